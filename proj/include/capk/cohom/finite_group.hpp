#pragma once

#include <vector>

namespace capk {

// Elements are 0..n-1 with 0 the identity; table[a][b] = a*b.
class FiniteGroup {
 public:
  FiniteGroup();  // trivial group
  explicit FiniteGroup(std::vector<std::vector<int>> table);
  static FiniteGroup cyclic(int n);

  int order() const { return static_cast<int>(table_.size()); }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inv_[a]; }
  int element_order(int a) const;
  const std::vector<std::vector<int>>& table() const { return table_; }
  bool operator==(const FiniteGroup& o) const { return table_ == o.table_; }

 private:
  std::vector<std::vector<int>> table_;
  std::vector<int> inv_;
};

}  // namespace capk
