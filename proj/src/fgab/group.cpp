#include "capk/fgab/group.hpp"

#include "capk/errors.hpp"
#include "capk/fgab/normal_form.hpp"

namespace capk {

namespace {

IntMatrix to_int(const RatMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).get_den() != 1) fail(ErrorKind::InternalOverflow, "non-unimodular transform");
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

IntMatrix x_part(const IntMatrix& k, std::size_t n) { return k.block(0, 0, k.rows(), n); }

Int mod_pos(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

}  // namespace

FGAbGroup::FGAbGroup() : FGAbGroup(0, IntMatrix(0, 0)) {}

FGAbGroup::FGAbGroup(std::size_t gens, const IntMatrix& relations) {
  auto d = std::make_shared<Data>();
  d->gens = gens;
  if (relations.rows() > 0 && relations.cols() != gens)
    fail(ErrorKind::InvalidArgument, "relation width does not match generator count");
  d->rels = relations.rows() ? relations : IntMatrix(0, gens);
  d->hnf = lattice_basis(d->rels);
  SmithForm s = smith_normal_form(d->rels);
  d->V = s.V;
  d->Vinv = gens ? to_int(inverse(to_rat(s.V))) : IntMatrix(0, 0);
  d->diag.assign(gens, 0);
  for (std::size_t j = 0; j < gens && j < d->rels.rows(); ++j) d->diag[j] = s.D(j, j);
  for (std::size_t j = 0; j < gens; ++j) {
    if (d->diag[j] == 0) {
      d->free_pos.push_back(j);
    } else if (d->diag[j] != 1) {
      d->torsion_pos.push_back(j);
      d->invariants.push_back(d->diag[j]);
    }
  }
  d->free_rank = d->free_pos.size();
  d_ = std::move(d);
}

FGAbGroup FGAbGroup::free(std::size_t rank) { return FGAbGroup(rank, IntMatrix(0, rank)); }

FGAbGroup FGAbGroup::cyclic(const Int& order) {
  IntMatrix r(1, 1);
  r(0, 0) = order;
  return FGAbGroup(1, r);
}

FGAbGroup FGAbGroup::from_invariants(const std::vector<Int>& inv, std::size_t rank) {
  IntMatrix r(inv.size(), inv.size() + rank);
  for (std::size_t i = 0; i < inv.size(); ++i) r(i, i) = inv[i];
  return FGAbGroup(inv.size() + rank, r);
}

Int FGAbGroup::order() const {
  if (!is_finite()) return 0;
  Int o = 1;
  for (auto& d : d_->invariants) o *= d;
  return o;
}

std::string FGAbGroup::structure() const {
  std::string s;
  for (auto& d : d_->invariants) s += (s.empty() ? "" : " x ") + ("Z/" + d.get_str());
  if (d_->free_rank) s += (s.empty() ? "" : " x ") + ("Z^" + std::to_string(d_->free_rank));
  return s.empty() ? "0" : s;
}

ElementCoords FGAbGroup::reduce(const IntVec& x) const {
  if (x.size() != d_->gens) fail(ErrorKind::InvalidArgument, "element length mismatch");
  return lattice_reduce(d_->hnf, x);
}

bool FGAbGroup::is_zero(const IntVec& x) const { return capk::is_zero(reduce(x)); }

bool FGAbGroup::equal(const IntVec& a, const IntVec& b) const { return is_zero(sub(a, b)); }

ElementCoords FGAbGroup::generator(std::size_t i) const { return reduce(unit_vec(d_->gens, i)); }

IntVec FGAbGroup::invariant_coords(const IntVec& x) const {
  IntVec y = vec_mul(x, d_->V);
  IntVec z;
  for (std::size_t j : d_->torsion_pos) z.push_back(mod_pos(y[j], d_->diag[j]));
  for (std::size_t j : d_->free_pos) z.push_back(y[j]);
  return z;
}

ElementCoords FGAbGroup::from_invariant_coords(const IntVec& z) const {
  IntVec y(d_->gens);
  std::size_t k = 0;
  for (std::size_t j : d_->torsion_pos) y[j] = z[k++];
  for (std::size_t j : d_->free_pos) y[j] = z[k++];
  return reduce(vec_mul(y, d_->Vinv));
}

IntMatrix FGAbGroup::invariant_generators() const {
  IntMatrix g(0, d_->gens);
  for (std::size_t j : d_->torsion_pos) g.append_row(reduce(d_->Vinv.row(j)));
  for (std::size_t j : d_->free_pos) g.append_row(reduce(d_->Vinv.row(j)));
  return g;
}

Int FGAbGroup::element_order(const IntVec& x) const {
  IntVec z = invariant_coords(x);
  std::size_t k = d_->invariants.size();
  for (std::size_t i = k; i < z.size(); ++i)
    if (z[i] != 0) return 0;
  Int o = 1;
  for (std::size_t i = 0; i < k; ++i) {
    Int g = gcd(z[i], d_->invariants[i]);
    o = lcm(o, Int(d_->invariants[i] / g));
  }
  return o;
}

std::vector<ElementCoords> FGAbGroup::elements() const {
  if (!is_finite() || order() > 1000000) fail(ErrorKind::InvalidArgument, "group too large to enumerate");
  std::vector<ElementCoords> out;
  const auto& inv = d_->invariants;
  IntVec z(inv.size());
  for (;;) {
    out.push_back(from_invariant_coords(z));
    std::size_t i = 0;
    while (i < z.size()) {
      z[i] += 1;
      if (z[i] < inv[i]) break;
      z[i] = 0;
      ++i;
    }
    if (i == z.size()) break;
  }
  return out;
}

bool FGAbGroup::operator==(const FGAbGroup& o) const {
  return d_ == o.d_ || (d_->gens == o.d_->gens && d_->hnf == o.d_->hnf);
}

FGAbHom::FGAbHom(FGAbGroup source, FGAbGroup target, IntMatrix m)
    : src_(std::move(source)), tgt_(std::move(target)), m_(std::move(m)) {
  if (m_.rows() == 0 && m_.cols() == 0) m_ = IntMatrix(src_.num_generators(), tgt_.num_generators());
  if (m_.rows() != src_.num_generators() || m_.cols() != tgt_.num_generators())
    fail(ErrorKind::IllFormedHom, "matrix shape " + std::to_string(m_.rows()) + "x" +
                                      std::to_string(m_.cols()) + " does not match groups");
  for (std::size_t i = 0; i < m_.rows(); ++i) m_.set_row(i, tgt_.reduce(m_.row(i)));
  const IntMatrix& r = src_.relations();
  for (std::size_t i = 0; i < r.rows(); ++i)
    if (!tgt_.is_zero(vec_mul(r.row(i), m_)))
      fail(ErrorKind::IllFormedHom, "relation " + vec_str(r.row(i)) + " does not map into target relations");
}

FGAbHom FGAbHom::zero(const FGAbGroup& s, const FGAbGroup& t) {
  return FGAbHom(s, t, IntMatrix(s.num_generators(), t.num_generators()));
}

FGAbHom FGAbHom::identity(const FGAbGroup& a) { return FGAbHom(a, a, IntMatrix::identity(a.num_generators())); }

FGAbHom FGAbHom::multiplication(const FGAbGroup& a, const Int& n) {
  return FGAbHom(a, a, scaled(IntMatrix::identity(a.num_generators()), n));
}

ElementCoords FGAbHom::apply(const IntVec& x) const { return tgt_.reduce(vec_mul(x, m_)); }

FGAbHom FGAbHom::then(const FGAbHom& g) const {
  if (tgt_ != g.src_) fail(ErrorKind::NotComposable, "target and source differ");
  return FGAbHom(src_, g.tgt_, m_ * g.m_);
}

bool FGAbHom::is_zero() const {
  for (std::size_t i = 0; i < m_.rows(); ++i)
    if (!tgt_.is_zero(m_.row(i))) return false;
  return true;
}

bool FGAbHom::is_injective() const { return kernel(*this).group().is_trivial(); }

bool FGAbHom::is_surjective() const { return cokernel(*this).group.is_trivial(); }

Subgroup::Subgroup(FGAbGroup parent, const IntMatrix& gens) : parent_(std::move(parent)) {
  std::size_t g = parent_.num_generators();
  gens_ = IntMatrix(0, g);
  for (std::size_t i = 0; i < gens.rows(); ++i) gens_.append_row(parent_.reduce(gens.row(i)));
  IntMatrix stacked = vstack(gens_, parent_.relations());
  span_ = lattice_basis(stacked);
  IntMatrix rel = x_part(left_kernel(stacked), gens_.rows());
  group_ = FGAbGroup(gens_.rows(), rel);
}

Subgroup Subgroup::whole(const FGAbGroup& a) { return Subgroup(a, IntMatrix::identity(a.num_generators())); }

Subgroup Subgroup::trivial(const FGAbGroup& a) { return Subgroup(a, IntMatrix(0, a.num_generators())); }

FGAbHom Subgroup::inclusion() const { return FGAbHom(group_, parent_, gens_); }

bool Subgroup::contains(const IntVec& x) const { return lattice_contains(span_, x); }

bool Subgroup::contains(const Subgroup& o) const {
  for (std::size_t i = 0; i < o.gens_.rows(); ++i)
    if (!contains(o.gens_.row(i))) return false;
  return true;
}

bool Subgroup::equals(const Subgroup& o) const {
  if (parent_ != o.parent_) return false;
  if (!contains(o) || !o.contains(*this)) return false;
  if (group_.is_finite() != o.group_.is_finite()) return false;
  return !group_.is_finite() || group_.order() == o.group_.order();
}

std::optional<IntVec> Subgroup::express(const IntVec& x) const {
  auto c = solve_left(vstack(gens_, parent_.relations()), x);
  if (!c) return std::nullopt;
  c->resize(gens_.rows());
  return group_.reduce(*c);
}

Subgroup kernel(const FGAbHom& f) {
  std::size_t gs = f.source().num_generators();
  IntMatrix k = left_kernel(vstack(f.matrix(), f.target().relations()));
  return Subgroup(f.source(), x_part(k, gs));
}

Subgroup image(const FGAbHom& f) { return Subgroup(f.target(), f.matrix()); }

Quotient quotient(const Subgroup& s) {
  const FGAbGroup& a = s.parent();
  FGAbGroup q(a.num_generators(), vstack(a.relations(), s.generators()));
  return {q, FGAbHom(a, q, IntMatrix::identity(a.num_generators()))};
}

Quotient cokernel(const FGAbHom& f) { return quotient(image(f)); }

KernelImageCokernel kernel_image_cokernel(const FGAbHom& f) { return {kernel(f), image(f), cokernel(f)}; }

Subgroup n_torsion(const FGAbGroup& a, const Int& n) { return kernel(FGAbHom::multiplication(a, n)); }

Quotient mod_n(const FGAbGroup& a, const Int& n) { return cokernel(FGAbHom::multiplication(a, n)); }

InducedMaps induced_maps(const FGAbHom& psi, const Int& n) {
  InducedMaps r;
  r.source_torsion = n_torsion(psi.source(), n);
  r.target_torsion = n_torsion(psi.target(), n);
  r.source_mod = mod_n(psi.source(), n);
  r.target_mod = mod_n(psi.target(), n);
  const IntMatrix& g = r.source_torsion.generators();
  IntMatrix m(g.rows(), r.target_torsion.num_generators());
  for (std::size_t i = 0; i < g.rows(); ++i) {
    auto c = r.target_torsion.express(psi.apply(g.row(i)));
    if (!c) fail(ErrorKind::IllFormedHom, "torsion element maps outside target torsion");
    m.set_row(i, *c);
  }
  r.torsion_map = FGAbHom(r.source_torsion.group(), r.target_torsion.group(), m);
  r.quotient_map = FGAbHom(r.source_mod.group, r.target_mod.group, psi.matrix());
  return r;
}

Subgroup image_of(const FGAbHom& f, const Subgroup& s) { return Subgroup(f.target(), s.generators() * f.matrix()); }

Subgroup preimage(const FGAbHom& f, const Subgroup& s) {
  std::size_t gs = f.source().num_generators();
  IntMatrix k = left_kernel(vstack(vstack(f.matrix(), s.generators()), f.target().relations()));
  return Subgroup(f.source(), x_part(k, gs));
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  FGAbHom inc = a.inclusion();
  return image_of(inc, preimage(inc, b));
}

std::vector<NodeVerdict> check_exact(const std::vector<FGAbHom>& seq) {
  std::vector<NodeVerdict> out;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (seq[i - 1].target() != seq[i].source())
      fail(ErrorKind::NotComposable, "maps " + std::to_string(i - 1) + " and " + std::to_string(i));
    NodeVerdict v;
    v.node = i;
    v.composition_zero = seq[i - 1].then(seq[i]).is_zero();
    v.kernel_equals_image = kernel(seq[i]).equals(image(seq[i - 1]));
    out.push_back(v);
  }
  return out;
}

std::string dump(const FGAbGroup& a) {
  return "gens " + std::to_string(a.num_generators()) + " rels " + a.relations().str() + " ~ " + a.structure();
}

}  // namespace capk
