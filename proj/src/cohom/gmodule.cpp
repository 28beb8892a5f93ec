#include "capk/cohom/gmodule.hpp"

#include "capk/errors.hpp"
#include "capk/fgab/normal_form.hpp"

namespace capk {

GModule::GModule(FiniteGroup g, FGAbGroup m, std::vector<IntMatrix> action)
    : g_(std::move(g)), m_(std::move(m)), act_(std::move(action)) {
  int n = g_.order();
  std::size_t k = m_.num_generators();
  require(static_cast<int>(act_.size()) == n, ErrorKind::ValidationError, "one action matrix per group element");
  for (auto& a : act_) {
    if (a.rows() == 0 && a.cols() == 0) a = IntMatrix(k, k);
    require(a.rows() == k && a.cols() == k, ErrorKind::ValidationError, "action matrix has wrong shape");
    FGAbHom(m_, m_, a);  // throws if relations are not preserved
  }
  for (std::size_t i = 0; i < k; ++i) {
    IntVec x = unit_vec(k, i);
    require(m_.equal(act(0, x), x), ErrorKind::ValidationError, "identity does not act trivially");
    for (int d = 0; d < n; ++d)
      for (int t = 0; t < n; ++t)
        require(m_.equal(act(d, act(t, x)), act(g_.mul(d, t), x)), ErrorKind::ValidationError,
                "action is not compatible with the group law");
  }
}

GModule GModule::trivial_action(const FiniteGroup& g, const FGAbGroup& m) {
  return GModule(g, m, std::vector<IntMatrix>(g.order(), IntMatrix::identity(m.num_generators())));
}

Subgroup GModule::invariants() const {
  std::size_t k = m_.num_generators();
  IntMatrix stacked(k, 0);
  for (int d = 0; d < g_.order(); ++d) stacked = hstack(stacked, act_[d] - IntMatrix::identity(k));
  IntMatrix rel(0, k * g_.order());
  for (int d = 0; d < g_.order(); ++d) {
    const IntMatrix& r = m_.relations();
    for (std::size_t i = 0; i < r.rows(); ++i) {
      IntVec row(k * g_.order());
      for (std::size_t j = 0; j < k; ++j) row[d * k + j] = r(i, j);
      rel.append_row(row);
    }
  }
  FGAbGroup target(k * g_.order(), rel);
  return kernel(FGAbHom(m_, target, stacked));
}

bool GModule::is_stable(const Subgroup& s) const {
  for (int d = 0; d < g_.order(); ++d)
    for (std::size_t i = 0; i < s.num_generators(); ++i)
      if (!s.contains(act(d, s.generators().row(i)))) return false;
  return true;
}

GModule GModule::submodule(const Subgroup& s) const {
  require(is_stable(s), ErrorKind::ValidationError, "subgroup is not stable under the action");
  std::vector<IntMatrix> acts;
  for (int d = 0; d < g_.order(); ++d) {
    IntMatrix a(s.num_generators(), s.num_generators());
    for (std::size_t i = 0; i < s.num_generators(); ++i) a.set_row(i, *s.express(act(d, s.generators().row(i))));
    acts.push_back(a);
  }
  return GModule(g_, s.group(), acts);
}

}  // namespace capk
