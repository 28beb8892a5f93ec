#include "capk/cohom/complex.hpp"

#include "capk/errors.hpp"
#include "capk/fgab/normal_form.hpp"

namespace capk {

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

void add_block(IntMatrix& d, std::size_t r0, std::size_t c0, const IntMatrix& b, long sign) {
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (b(i, j) != 0) d(r0 + i, c0 + j) += sign * b(i, j);
}

IntMatrix block_diagonal(const IntMatrix& b, std::size_t copies) {
  IntMatrix d(b.rows() * copies, b.cols() * copies);
  for (std::size_t k = 0; k < copies; ++k) add_block(d, k * b.rows(), k * b.cols(), b, 1);
  return d;
}

// Block matrix sending block src(t) to block t for every tuple t of the given length.
IntMatrix permutation_blocks(std::size_t g, int n, int len, const std::vector<std::size_t>& src) {
  std::size_t cnt = ipow(n, len);
  IntMatrix p(g * cnt, g * cnt);
  for (std::size_t t = 0; t < cnt; ++t)
    for (std::size_t a = 0; a < g; ++a) p(src[t] * g + a, t * g + a) = 1;
  return p;
}

}  // namespace

std::size_t tuple_index(const std::vector<int>& t, int n) {
  std::size_t idx = 0;
  for (int x : t) idx = idx * n + x;
  return idx;
}

std::vector<int> tuple_at(std::size_t idx, int len, int n) {
  std::vector<int> t(len);
  for (int k = len - 1; k >= 0; --k) {
    t[k] = static_cast<int>(idx % n);
    idx /= n;
  }
  return t;
}

IntVec cochain_value(const GModule& m, const Cochain& c, const std::vector<int>& t) {
  std::size_t g = m.module().num_generators();
  std::size_t b = tuple_index(t, m.group().order());
  return IntVec(c.values.begin() + b * g, c.values.begin() + (b + 1) * g);
}

FGAbGroup cochain_group(const GModule& m, int degree) {
  if (degree < 0 || degree > 3) fail(ErrorKind::DegreeOutOfRange, "cochain degree " + std::to_string(degree));
  std::size_t copies = ipow(m.group().order(), degree);
  const FGAbGroup& a = m.module();
  std::size_t g = a.num_generators();
  const IntMatrix& r = a.relations();
  IntMatrix rel(r.rows() * copies, g * copies);
  for (std::size_t k = 0; k < copies; ++k) add_block(rel, k * r.rows(), k * g, r, 1);
  return FGAbGroup(g * copies, rel);
}

IntMatrix bar_differential_matrix(const GModule& m, int i) {
  if (i < 0 || i > 2) fail(ErrorKind::DegreeOutOfRange, "bar differential from degree " + std::to_string(i));
  int n = m.group().order();
  std::size_t g = m.module().num_generators();
  IntMatrix id = IntMatrix::identity(g);
  std::size_t src = ipow(n, i), dst = ipow(n, i + 1);
  IntMatrix d(g * src, g * dst);
  for (std::size_t s = 0; s < dst; ++s) {
    std::vector<int> t = tuple_at(s, i + 1, n);
    std::vector<int> tail(t.begin() + 1, t.end());
    add_block(d, tuple_index(tail, n) * g, s * g, m.action(t[0]), 1);
    for (int j = 1; j <= i; ++j) {
      std::vector<int> merged;
      for (int k = 0; k < i + 1; ++k) {
        if (k == j - 1) {
          merged.push_back(m.group().mul(t[k], t[k + 1]));
          ++k;
        } else {
          merged.push_back(t[k]);
        }
      }
      add_block(d, tuple_index(merged, n) * g, s * g, id, (j % 2) ? -1 : 1);
    }
    std::vector<int> head(t.begin(), t.end() - 1);
    add_block(d, tuple_index(head, n) * g, s * g, id, ((i + 1) % 2) ? -1 : 1);
  }
  return d;
}

Cochain bar_differential(const GModule& m, const Cochain& c) {
  if (c.degree < 0 || c.degree > 2) fail(ErrorKind::DegreeOutOfRange, "differential of a degree " + std::to_string(c.degree) + " cochain");
  Cochain r{c.degree + 1, vec_mul(c.values, bar_differential_matrix(m, c.degree))};
  r.values = cochain_group(m, r.degree).reduce(r.values);
  return r;
}

std::optional<ElementCoords> CohomologyGroup::class_of(const IntVec& c) const {
  auto z = cocycles.express(c);
  if (!z) return std::nullopt;
  return group.reduce(*z);
}

IntVec CohomologyGroup::representative(const IntVec& h) const {
  return cochains.reduce(vec_mul(h, cocycles.generators()));
}

CohomologyGroup complex_cohomology(int degree, const FGAbGroup& ci, const FGAbGroup& cnext,
                                   const IntMatrix& d_prev, const IntMatrix& d_i) {
  CohomologyGroup h;
  h.degree = degree;
  h.cochains = ci;
  h.cocycles = kernel(FGAbHom(ci, cnext, d_i));
  IntMatrix rel = h.cocycles.group().relations();
  if (rel.rows() == 0) rel = IntMatrix(0, h.cocycles.num_generators());
  for (std::size_t r = 0; r < d_prev.rows(); ++r) {
    auto z = h.cocycles.express(d_prev.row(r));
    if (!z) fail(ErrorKind::InvalidArgument, "boundary is not a cocycle (d o d != 0)");
    rel.append_row(*z);
  }
  h.group = FGAbGroup(h.cocycles.num_generators(), rel);
  return h;
}

CohomologyGroup cohomology(const GModule& m, int degree) {
  if (degree < 0 || degree > 2) fail(ErrorKind::DegreeOutOfRange, "cohomology degree " + std::to_string(degree));
  IntMatrix dprev = degree ? bar_differential_matrix(m, degree - 1) : IntMatrix(0, m.module().num_generators());
  return complex_cohomology(degree, cochain_group(m, degree), cochain_group(m, degree + 1), dprev,
                            bar_differential_matrix(m, degree));
}

CohomologyClass class_of(const CohomologyGroup& h, const Cochain& c) {
  auto k = h.class_of(c.values);
  if (!k) fail(ErrorKind::InvalidArgument, "cochain is not a cocycle");
  return {c.degree, c, *k};
}

void check_equivariant(const FGAbHom& phi, const GModule& m, const GModule& n) {
  if (phi.source() != m.module() || phi.target() != n.module())
    fail(ErrorKind::NotEquivariant, "map does not join the two modules");
  if (!(m.group() == n.group())) fail(ErrorKind::NotEquivariant, "modules over different groups");
  for (int d = 0; d < m.group().order(); ++d)
    for (std::size_t i = 0; i < m.module().num_generators(); ++i) {
      IntVec x = unit_vec(m.module().num_generators(), i);
      if (!n.module().equal(phi.apply(m.act(d, x)), n.act(d, phi.apply(x))))
        fail(ErrorKind::NotEquivariant, "phi(d x) != d phi(x) for group element " + std::to_string(d));
    }
}

FGAbHom induced_cohomology_map(const FGAbHom& phi, const CohomologyGroup& hm, const CohomologyGroup& hn,
                               int blocks) {
  IntMatrix big = block_diagonal(phi.matrix(), blocks);
  const IntMatrix& z = hm.cocycles.generators();
  IntMatrix rows(z.rows(), hn.group.num_generators());
  for (std::size_t i = 0; i < z.rows(); ++i) {
    auto k = hn.class_of(vec_mul(z.row(i), big));
    if (!k) fail(ErrorKind::NotEquivariant, "image of a cocycle is not a cocycle");
    rows.set_row(i, *k);
  }
  return FGAbHom(hm.group, hn.group, rows);
}

FGAbHom induced_cohomology_map(const FGAbHom& phi, const GModule& m, const GModule& n, int degree) {
  check_equivariant(phi, m, n);
  return induced_cohomology_map(phi, cohomology(m, degree), cohomology(n, degree),
                                static_cast<int>(ipow(m.group().order(), degree)));
}

IntMatrix cech_differential_matrix(const GModule& m, int i) {
  if (i < 0 || i > 2) fail(ErrorKind::DegreeOutOfRange, "Cech differential from degree " + std::to_string(i));
  const FiniteGroup& G = m.group();
  int n = G.order();
  std::size_t g = m.module().num_generators();
  IntMatrix id = IntMatrix::identity(g);
  std::size_t src = ipow(n, i), dst = ipow(n, i + 1);
  IntMatrix d(g * src, g * dst);
  for (std::size_t s = 0; s < dst; ++s) {
    std::vector<int> t = tuple_at(s, i + 1, n);  // component (d_2, ..., d_{i+2})
    // Face 1 drops the base point: translate by d_2.
    std::vector<int> shifted;
    for (int k = 1; k <= i; ++k) shifted.push_back(G.mul(G.inv(t[0]), t[k]));
    add_block(d, tuple_index(shifted, n) * g, s * g, m.action(t[0]), 1);
    // Faces j >= 2 drop the entry d_j.
    for (int j = 2; j <= i + 2; ++j) {
      std::vector<int> dropped;
      for (int k = 0; k <= i; ++k)
        if (k != j - 2) dropped.push_back(t[k]);
      add_block(d, tuple_index(dropped, n) * g, s * g, id, (j % 2) ? 1 : -1);
    }
  }
  return d;
}

bool CechComparison::isomorphisms() const {
  for (auto& c : comparison)
    if (!c.is_isomorphism()) return false;
  return true;
}

CechComparison cech_complex_split(const GModule& m) {
  const FiniteGroup& G = m.group();
  int n = G.order();
  std::size_t g = m.module().num_generators();
  CechComparison r;
  // bar -> Cech: s(g_1..g_i) = c(g_1, g_1^-1 g_2, ..., g_{i-1}^-1 g_i); inverse: c(d) = s(d_1, d_1 d_2, ...).
  for (int i = 0; i <= 3; ++i) {
    std::size_t cnt = ipow(n, i);
    std::vector<std::size_t> to_cech(cnt), to_bar(cnt);
    for (std::size_t idx = 0; idx < cnt; ++idx) {
      std::vector<int> t = tuple_at(idx, i, n), a(i), b(i);
      for (int k = 0; k < i; ++k) {
        a[k] = k ? G.mul(G.inv(t[k - 1]), t[k]) : t[0];
        b[k] = k ? G.mul(b[k - 1], t[k]) : t[0];
      }
      to_cech[idx] = tuple_index(a, n);
      to_bar[idx] = tuple_index(b, n);
    }
    r.bar_to_cech[i] = permutation_blocks(g, n, i, to_cech);
    r.cech_to_bar[i] = permutation_blocks(g, n, i, to_bar);
  }
  r.chain_maps_commute = true;
  for (int i = 0; i <= 2; ++i) {
    FGAbGroup next = cochain_group(m, i + 1);
    IntMatrix lhs = bar_differential_matrix(m, i) * r.bar_to_cech[i + 1];
    IntMatrix rhs = r.bar_to_cech[i] * cech_differential_matrix(m, i);
    for (std::size_t k = 0; k < lhs.rows(); ++k)
      if (!next.equal(lhs.row(k), rhs.row(k))) r.chain_maps_commute = false;
    if (r.bar_to_cech[i] * r.cech_to_bar[i] != IntMatrix::identity(r.bar_to_cech[i].rows()))
      r.chain_maps_commute = false;
  }
  for (int i = 0; i <= 2; ++i) {
    FGAbGroup ci = cochain_group(m, i), cn = cochain_group(m, i + 1);
    IntMatrix bprev = i ? bar_differential_matrix(m, i - 1) : IntMatrix(0, g);
    IntMatrix cprev = i ? cech_differential_matrix(m, i - 1) : IntMatrix(0, g);
    r.bar[i] = complex_cohomology(i, ci, cn, bprev, bar_differential_matrix(m, i));
    r.cech[i] = complex_cohomology(i, ci, cn, cprev, cech_differential_matrix(m, i));
    const IntMatrix& z = r.cech[i].cocycles.generators();
    IntMatrix rows(z.rows(), r.bar[i].group.num_generators());
    for (std::size_t k = 0; k < z.rows(); ++k) {
      auto c = r.bar[i].class_of(vec_mul(z.row(k), r.cech_to_bar[i]));
      if (!c) fail(ErrorKind::InvalidArgument, "Cech cocycle does not map to a bar cocycle");
      rows.set_row(k, *c);
    }
    r.comparison[i] = FGAbHom(r.cech[i].group, r.bar[i].group, rows);
  }
  // Equalizer of the two pullbacks X -> X x X on the split components.
  IntMatrix eq(g, 0);
  for (int d = 0; d < n; ++d) eq = hstack(eq, m.action(d) - IntMatrix::identity(g));
  FGAbHom diff(m.module(), cochain_group(m, 1), eq);
  r.equalizer_is_invariants = kernel(diff).equals(m.invariants()) && r.cech[0].cocycles.equals(m.invariants());
  return r;
}

TorsionCompatibility torsion_compatibility_check(const GModule& m, const Int& n) {
  TorsionCompatibility t;
  Subgroup mn = n_torsion(m.module(), n);
  GModule sub = m.submodule(mn);
  CechComparison c = cech_complex_split(sub);
  t.from_torsion_module = image_of(mn.inclusion(), c.cech[0].cocycles);
  Subgroup inv = cech_complex_split(m).cech[0].cocycles;
  t.torsion_of_h0 = image_of(inv.inclusion(), n_torsion(inv.group(), n));
  t.equal = t.from_torsion_module.equals(t.torsion_of_h0);
  return t;
}

std::string dump_cocycle(const GModule& m, const Cochain& c) {
  std::string s;
  int n = m.group().order();
  std::size_t cnt = ipow(n, c.degree);
  for (std::size_t idx = 0; idx < cnt; ++idx) {
    std::vector<int> t = tuple_at(idx, c.degree, n);
    s += "(";
    for (std::size_t k = 0; k < t.size(); ++k) s += (k ? "," : "") + std::to_string(t[k]);
    s += ") -> " + vec_str(cochain_value(m, c, t)) + "\n";
  }
  return s;
}

}  // namespace capk
