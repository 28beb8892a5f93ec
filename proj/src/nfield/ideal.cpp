#include "capk/nfield/ideal.hpp"

#include <algorithm>

#include "capk/errors.hpp"
#include "capk/fgab/normal_form.hpp"

namespace capk {

namespace {

Int mod_pos(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

IdealHNF from_lattice(const NumberField& K, const IntMatrix& gens, const Int& den) {
  HermiteForm h = hermite_form(gens, false);
  if (h.rank != static_cast<std::size_t>(K.degree())) fail(ErrorKind::InvalidArgument, "zero ideal");
  return IdealHNF(h.H.top_rows(h.rank), den);
}

}  // namespace

IdealHNF::IdealHNF(IntMatrix hnf, Int den) : H_(std::move(hnf)), den_(std::move(den)) {
  Int g = den_;
  for (std::size_t i = 0; i < H_.rows(); ++i)
    for (std::size_t j = 0; j < H_.cols(); ++j) g = gcd(g, H_(i, j));
  if (g != 1 && g != 0) {
    for (std::size_t i = 0; i < H_.rows(); ++i)
      for (std::size_t j = 0; j < H_.cols(); ++j) H_(i, j) /= g;
    den_ /= g;
  }
}

bool IdealHNF::operator<(const IdealHNF& o) const {
  if (den_ != o.den_) return den_ < o.den_;
  for (std::size_t i = 0; i < H_.rows(); ++i)
    for (std::size_t j = 0; j < H_.cols(); ++j)
      if (H_(i, j) != o.H_(i, j)) return H_(i, j) < o.H_(i, j);
  return false;
}

std::string IdealHNF::str() const { return H_.str() + (den_ != 1 ? " / " + den_.get_str() : ""); }

IdealHNF make_ideal(const NumberField& K, const IntMatrix& rows, const Int& den) {
  IdealHNF a = from_lattice(K, rows, den);
  for (std::size_t i = 0; i < a.hnf().rows(); ++i)
    for (int j = 0; j < K.degree(); ++j)
      if (!lattice_contains(a.hnf(), K.mul_int(a.hnf().row(i), unit_vec(K.degree(), j))))
        fail(ErrorKind::ValidationError, "lattice " + a.str() + " is not an ideal of " + K.label());
  return a;
}

IdealHNF ideal_from_generators(const NumberField& K, const std::vector<FieldElement>& gens) {
  int d = K.degree();
  Int l = 1;
  for (auto& g : gens) l = lcm(l, g.den);
  IntMatrix rows(0, d);
  for (auto& g : gens) {
    IntVec n = scale(g.num, l / g.den);
    IntMatrix r = K.regular_matrix(n);
    for (int j = 0; j < d; ++j) rows.append_row(r.row(j));
  }
  return from_lattice(K, rows, l);
}

IdealHNF principal_ideal(const NumberField& K, const FieldElement& x) { return ideal_from_generators(K, {x}); }

IdealHNF unit_ideal(const NumberField& K) { return IdealHNF(IntMatrix::identity(K.degree()), 1); }

IdealHNF ideal_mul(const NumberField& K, const IdealHNF& a, const IdealHNF& b) {
  int d = K.degree();
  IntMatrix rows(0, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) rows.append_row(K.mul_int(a.hnf().row(i), b.hnf().row(j)));
  return from_lattice(K, rows, a.den() * b.den());
}

IdealHNF ideal_pow(const NumberField& K, const IdealHNF& a, unsigned k) {
  IdealHNF r = unit_ideal(K), base = a;
  while (k) {
    if (k & 1) r = ideal_mul(K, r, base);
    k >>= 1;
    if (k) base = ideal_mul(K, base, base);
  }
  return r;
}

IdealHNF ideal_add(const NumberField& K, const IdealHNF& a, const IdealHNF& b) {
  Int l = lcm(a.den(), b.den());
  return from_lattice(K, vstack(scaled(a.hnf(), Int(l / a.den())), scaled(b.hnf(), Int(l / b.den()))), l);
}

Rat ideal_norm(const IdealHNF& a) {
  Int det = 1;
  for (std::size_t i = 0; i < a.hnf().rows(); ++i) det *= a.hnf()(i, i);
  Rat n(det);
  for (std::size_t i = 0; i < a.hnf().rows(); ++i) n /= a.den();
  return n;
}

bool ideal_contains(const IdealHNF& a, const FieldElement& x) {
  IntVec v = scale(x.num, a.den());
  for (auto& c : v) {
    if (!mpz_divisible_p(c.get_mpz_t(), x.den.get_mpz_t())) return false;
    c /= x.den;
  }
  return lattice_contains(a.hnf(), v);
}

std::vector<FieldElement> ideal_basis(const IdealHNF& a) {
  std::vector<FieldElement> out;
  for (std::size_t i = 0; i < a.hnf().rows(); ++i) out.emplace_back(a.hnf().row(i), a.den());
  return out;
}

IntMatrix left_kernel_mod_p(const IntMatrix& m0, const Int& p) {
  // Row-reduce [m | I] mod p; rows whose m-part vanishes give the kernel.
  std::size_t r = m0.rows(), c = m0.cols();
  IntMatrix a = hstack(m0, IntMatrix::identity(r));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = mod_pos(a(i, j), p);
  std::size_t row = 0;
  for (std::size_t col = 0; col < c && row < r; ++col) {
    std::size_t piv = row;
    while (piv < r && a(piv, col) == 0) ++piv;
    if (piv == r) continue;
    a.swap_rows(row, piv);
    Int inv;
    mpz_invert(inv.get_mpz_t(), a(row, col).get_mpz_t(), p.get_mpz_t());
    for (std::size_t j = 0; j < a.cols(); ++j) a(row, j) = mod_pos(a(row, j) * inv, p);
    for (std::size_t i = 0; i < r; ++i) {
      if (i == row || a(i, col) == 0) continue;
      Int f = a(i, col);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = mod_pos(a(i, j) - f * a(row, j), p);
    }
    ++row;
  }
  return a.block(row, c, r - row, r);
}

int rank_mod_p(const IntMatrix& m, const Int& p) {
  return static_cast<int>(m.rows() - left_kernel_mod_p(m, p).rows());
}

namespace {

IntVec reduce_mod(const IntMatrix& H, const IntVec& x) { return lattice_reduce(H, x); }

// Residue coordinates of x in O/P, on the positions where the Hermite diagonal is p.
IntVec residue(const IntMatrix& H, const std::vector<std::size_t>& pos, const IntVec& x) {
  IntVec r = reduce_mod(H, x), out;
  for (auto k : pos) out.push_back(r[k]);
  return out;
}

}  // namespace

PrimeIdeal make_prime(const NumberField& K, const Int& p, const FieldElement& gen) {
  int d = K.degree();
  if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0) fail(ErrorKind::NotPrime, p.get_str() + " is not a prime number");
  if (!gen.is_integral()) fail(ErrorKind::NotPrime, "generator " + gen.str() + " is not integral");
  PrimeIdeal P;
  P.p = p;
  P.gen = gen;
  P.ideal = ideal_from_generators(K, {K.from_int(p), gen});
  const IntMatrix& H = P.ideal.hnf();
  std::vector<std::size_t> pos;
  for (int i = 0; i < d; ++i) {
    if (H(i, i) == p) pos.push_back(i);
    else if (H(i, i) != 1) fail(ErrorKind::NotPrime, "(" + p.get_str() + ", " + gen.str() + ") has a non-prime residue ring");
  }
  P.f = static_cast<int>(pos.size());
  if (P.f == 0) fail(ErrorKind::NotPrime, "(" + p.get_str() + ", " + gen.str() + ") is the unit ideal");
  // O/P is a field iff Frobenius is injective with a one-dimensional fixed space.
  IntMatrix frob(P.f, P.f);
  for (int s = 0; s < P.f; ++s) {
    IntVec e = unit_vec(d, pos[s]), acc = reduce_mod(H, K.from_int(1).num);
    Int k = p;
    IntVec base = e;
    while (k > 0) {
      if (mpz_odd_p(k.get_mpz_t())) acc = reduce_mod(H, K.mul_int(acc, base));
      k >>= 1;
      if (k > 0) base = reduce_mod(H, K.mul_int(base, base));
    }
    frob.set_row(s, residue(H, pos, acc));
  }
  if (rank_mod_p(frob, p) != P.f) fail(ErrorKind::NotPrime, "(" + p.get_str() + ", " + gen.str() + ") has nilpotents mod P");
  IntMatrix fm1 = frob - IntMatrix::identity(P.f);
  if (left_kernel_mod_p(fm1, p).rows() != 1)
    fail(ErrorKind::NotPrime, "(" + p.get_str() + ", " + gen.str() + ") splits further");

  // pP^{-1}/pO = { x : x * pi_j in pO for the Z-basis pi_j of P }.
  IntMatrix lin(d, 0);
  for (int j = 0; j < d; ++j) {
    // column block j: coordinates of w_i * pi_j
    IntMatrix blk(d, d);
    for (int i = 0; i < d; ++i) blk.set_row(i, K.mul_int(unit_vec(d, i), H.row(j)));
    lin = hstack(lin, blk);
  }
  IntMatrix ker = left_kernel_mod_p(lin, p);
  if (ker.rows() == 0) fail(ErrorKind::NotPrime, "no element of P^{-1} outside O");
  P.beta = ker.row(0);
  IntMatrix inv_rows = vstack(scaled(IntMatrix::identity(d), p), ker);
  P.inverse = from_lattice(K, inv_rows, p);
  P.e = valuation(K, P, K.from_int(p));
  P.label = "(" + p.get_str() + ", " + gen.str() + ")";
  return P;
}

namespace {

int valuation_integral(const NumberField& K, const PrimeIdeal& P, IntVec y) {
  int v = 0;
  for (;;) {
    IntVec z = K.mul_int(y, P.beta);
    for (auto& c : z)
      if (!mpz_divisible_p(c.get_mpz_t(), P.p.get_mpz_t())) return v;
    for (auto& c : z) c /= P.p;
    y = std::move(z);
    ++v;
  }
}

int pval(Int n, const Int& p) {
  int v = 0;
  while (n != 0 && mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
    n /= p;
    ++v;
  }
  return v;
}

}  // namespace

int valuation(const NumberField& K, const PrimeIdeal& P, const FieldElement& x) {
  if (x.is_zero()) fail(ErrorKind::DivisionByZero, "valuation of zero");
  int vd = P.e ? P.e * pval(x.den, P.p) : 0;
  return valuation_integral(K, P, x.num) - vd;
}

int valuation(const NumberField& K, const PrimeIdeal& P, const IdealHNF& a) {
  int best = -1;
  for (std::size_t i = 0; i < a.hnf().rows(); ++i) {
    IntVec r = a.hnf().row(i);
    if (is_zero(r)) continue;
    int v = valuation_integral(K, P, r);
    if (best < 0 || v < best) best = v;
  }
  return best - P.e * pval(a.den(), P.p);
}

IdealHNF prime_power(const NumberField& K, const PrimeIdeal& P, long k) {
  if (k >= 0) return ideal_pow(K, P.ideal, static_cast<unsigned>(k));
  return ideal_pow(K, P.inverse, static_cast<unsigned>(-k));
}

IdealHNF ideal_product(const NumberField& K, const std::vector<PrimeIdeal>& ps, const std::vector<long>& v) {
  IdealHNF r = unit_ideal(K);
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (v[i] != 0) r = ideal_mul(K, r, prime_power(K, ps[i], v[i]));
  return r;
}

std::vector<PrimeIdeal> factor_rational_prime(const NumberField& K, const Int& p) {
  if (mpz_probab_prime_p(p.get_mpz_t(), 30) == 0) fail(ErrorKind::NotPrime, p.get_str() + " is not prime");
  if (mpz_divisible_p(K.index().get_mpz_t(), p.get_mpz_t()))
    fail(ErrorKind::IndexDivisor, p.get_str() + " divides the index of Z[theta] in " + K.label());
  if (!p.fits_ulong_p() || p.get_ui() >= (1UL << 62)) fail(ErrorKind::InvalidArgument, "prime too large to factor");
  std::vector<PrimeIdeal> out;
  FieldElement th = K.theta();
  int total = 0;
  for (auto& [g, e] : factor_mod_p(K.polynomial(), p.get_ui())) {
    QPoly gq;
    for (auto c : g) gq.emplace_back(Int(static_cast<unsigned long>(c)));
    FieldElement gen = K.eval(gq, th);
    PrimeIdeal P = make_prime(K, p, gen);
    if (P.e != e || P.f != degree(g))
      fail(ErrorKind::InvalidArgument, "Kummer-Dedekind data disagree for " + P.label);
    total += P.e * P.f;
    out.push_back(P);
  }
  if (total != K.degree()) fail(ErrorKind::InvalidArgument, "sum of e*f differs from the degree");
  IdealHNF prod = unit_ideal(K);
  for (auto& P : out) prod = ideal_mul(K, prod, prime_power(K, P, P.e));
  if (prod != principal_ideal(K, K.from_int(p))) fail(ErrorKind::InvalidArgument, "prime factors do not multiply back to pO");
  return out;
}

}  // namespace capk
