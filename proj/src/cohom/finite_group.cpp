#include "capk/cohom/finite_group.hpp"

#include "capk/errors.hpp"

namespace capk {

FiniteGroup::FiniteGroup() : FiniteGroup(std::vector<std::vector<int>>{{0}}) {}

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table) : table_(std::move(table)) {
  int n = order();
  require(n >= 1, ErrorKind::ValidationError, "empty group table");
  for (auto& row : table_) {
    require(static_cast<int>(row.size()) == n, ErrorKind::ValidationError, "group table is not square");
    for (int x : row) require(x >= 0 && x < n, ErrorKind::ValidationError, "group table entry out of range");
  }
  for (int a = 0; a < n; ++a)
    require(table_[0][a] == a && table_[a][0] == a, ErrorKind::ValidationError, "0 is not the identity");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        require(mul(mul(a, b), c) == mul(a, mul(b, c)), ErrorKind::ValidationError, "group law not associative");
  inv_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (mul(a, b) == 0 && mul(b, a) == 0) inv_[a] = b;
  for (int a = 0; a < n; ++a) require(inv_[a] >= 0, ErrorKind::ValidationError, "element without inverse");
}

FiniteGroup FiniteGroup::cyclic(int n) {
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return FiniteGroup(t);
}

int FiniteGroup::element_order(int a) const {
  int k = 1, x = a;
  while (x != 0) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

}  // namespace capk
