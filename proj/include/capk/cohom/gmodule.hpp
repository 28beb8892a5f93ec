#pragma once

#include <vector>

#include "capk/cohom/finite_group.hpp"
#include "capk/fgab/group.hpp"

namespace capk {

// delta . x = x * action(delta), so action(d*t) agrees with action(t) * action(d).
class GModule {
 public:
  GModule() = default;
  GModule(FiniteGroup g, FGAbGroup m, std::vector<IntMatrix> action);
  static GModule trivial_action(const FiniteGroup& g, const FGAbGroup& m);

  const FiniteGroup& group() const { return g_; }
  const FGAbGroup& module() const { return m_; }
  const IntMatrix& action(int d) const { return act_[d]; }
  ElementCoords act(int d, const IntVec& x) const { return m_.reduce(vec_mul(x, act_[d])); }

  Subgroup invariants() const;
  bool is_stable(const Subgroup& s) const;
  // The induced module on a stable subgroup, presented on the subgroup's generators.
  GModule submodule(const Subgroup& s) const;

 private:
  FiniteGroup g_;
  FGAbGroup m_;
  std::vector<IntMatrix> act_;
};

}  // namespace capk
