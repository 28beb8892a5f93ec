#include "capk/classunits/units.hpp"

#include <numeric>

#include "capk/errors.hpp"

namespace capk {

namespace {

Int next_prime(const Int& n) {
  Int r;
  mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

Int mod_pos(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

Int inv_mod(const Int& a, const Int& m) {
  Int r;
  if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
    fail(ErrorKind::InternalOverflow, "non-invertible residue");
  return r;
}

Int pow_mod(const Int& a, const Int& e, const Int& m) {
  Int r;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

// Solves x * A = b over intervals (A square), pivoting on the largest midpoint.
std::optional<std::vector<Interval>> interval_solve(std::vector<std::vector<Interval>> a, std::vector<Interval> b,
                                                    mpfr_prec_t prec) {
  // transpose so that we solve A^T x^T = b^T by row elimination
  std::size_t n = b.size();
  std::vector<std::vector<Interval>> m(n, std::vector<Interval>(n, Interval(prec)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[j][i];
  mpfr_t best, cur;
  mpfr_inits2(prec, best, cur, (mpfr_ptr)0);
  bool ok = true;
  for (std::size_t c = 0; c < n && ok; ++c) {
    std::size_t piv = c;
    mpfr_set_zero(best, 1);
    for (std::size_t r = c; r < n; ++r) {
      m[r][c].mid(cur);
      mpfr_abs(cur, cur, MPFR_RNDN);
      if (mpfr_cmp(cur, best) > 0) {
        mpfr_set(best, cur, MPFR_RNDN);
        piv = r;
      }
    }
    if (m[piv][c].contains_zero()) {
      ok = false;
      break;
    }
    std::swap(m[piv], m[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      Interval f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] = m[r][k] - f * m[c][k];
      b[r] = b[r] - f * b[c];
    }
  }
  mpfr_clears(best, cur, (mpfr_ptr)0);
  if (!ok) return std::nullopt;
  std::vector<Interval> x(n, Interval(prec));
  for (std::size_t i = n; i-- > 0;) {
    Interval s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s = s - m[i][k] * x[k];
    x[i] = s / m[i][i];
  }
  return x;
}

Int round_mid(const Interval& x) {
  mpfr_t m;
  mpfr_init2(m, x.prec());
  x.mid(m);
  Int r;
  mpfr_get_z(r.get_mpz_t(), m, MPFR_RNDN);
  mpfr_clear(m);
  return r;
}

Int rational_prime_product(const std::vector<PrimeIdeal>& ps) {
  Int r = 1;
  for (auto& P : ps)
    if (r % P.p != 0) r *= P.p;
  return r;
}

}  // namespace

std::optional<Int> ResidueMap::apply(const FieldElement& x) const {
  if (x.den % q == 0) return std::nullopt;
  Int s = 0;
  for (std::size_t i = 0; i < images.size(); ++i) s += x.num[i] * images[i];
  return mod_pos(s * inv_mod(mod_pos(x.den, q), q), q);
}

std::vector<ResidueMap> degree_one_primes(const NumberField& K, const Int& start, std::size_t count,
                                          const Int& avoid) {
  std::vector<ResidueMap> out;
  Int bad = avoid * K.index() * K.discriminant();
  Int q = next_prime(start - 1);
  for (int tries = 0; out.size() < count && tries < 5000; ++tries, q = next_prime(q)) {
    if (bad % q == 0 || !q.fits_ulong_p()) continue;
    for (auto& [h, e] : factor_mod_p(K.polynomial(), q.get_ui())) {
      if (h.size() != 2 || e != 1) continue;
      Int r = mod_pos(Int(q) - Int(static_cast<unsigned long>(h[0])), q);
      ResidueMap m;
      m.q = q;
      const RatMatrix& B = K.basis();
      for (int i = 0; i < K.degree(); ++i) {
        Int s = 0, rk = 1;
        for (int k = 0; k < K.degree(); ++k) {
          const Rat& c = B(i, k);
          s += c.get_num() * inv_mod(mod_pos(c.get_den(), q), q) * rk;
          rk = rk * r % q;
        }
        m.images.push_back(mod_pos(s, q));
      }
      out.push_back(std::move(m));
      if (out.size() == count) break;
    }
  }
  return out;
}

SUnitLattice::SUnitLattice(std::shared_ptr<const NumberField> K, FieldElement zeta, long claimed_order,
                           std::vector<FieldElement> free, std::vector<PrimeIdeal> sigma, UnitOptions opt)
    : K_(std::move(K)), zeta_(std::move(zeta)), w_(claimed_order), free_(std::move(free)),
      sigma_(std::move(sigma)), opt_(opt) {
  const NumberField& k = *K_;
  auto bad = [&](const std::string& m) { fail(ErrorKind::ValidationError, k.label() + ": " + m); };
  opt_.start_precision = std::min(opt_.start_precision, opt_.precision_ceiling);
  if (w_ < 1) bad("torsion order must be positive");
  if (zeta_.num.size() != static_cast<std::size_t>(k.degree())) bad("torsion generator has wrong length");
  for (auto& u : free_)
    if (u.num.size() != static_cast<std::size_t>(k.degree())) bad("unit generator has wrong length");

  // order of zeta by exhaustive testing up to 2 d^2
  long bound = 2L * k.degree() * k.degree();
  FieldElement z = k.one();
  long order = 0;
  for (long i = 1; i <= bound; ++i) {
    z = k.mul(z, zeta_);
    if (z == k.one()) {
      order = i;
      break;
    }
  }
  if (order == 0) bad("torsion generator " + zeta_.str() + " has no order up to " + std::to_string(bound));
  if (order != w_)
    bad("torsion generator has order " + std::to_string(order) + ", claimed " + std::to_string(w_));
  zeta_pows_.push_back(k.one());
  for (long i = 1; i < w_; ++i) zeta_pows_.push_back(k.mul(zeta_pows_.back(), zeta_));

  for (auto& u : free_) {
    if (!is_unit(u)) fail(ErrorKind::NotAUnit, k.label() + ": " + u.str() + " (" + k.power_str(u) + ") is not a sigma-unit");
    free_inv_.push_back(k.inv(u));
  }
  long expected = k.unit_rank() + static_cast<long>(sigma_.size());
  if (static_cast<long>(free_.size()) != expected)
    bad("unit rank " + std::to_string(free_.size()) + " differs from Dirichlet rank " + std::to_string(expected));

  IntMatrix rel(1, 1 + free_.size());
  rel(0, 0) = w_;
  group_ = FGAbGroup(1 + free_.size(), rel);
  certify_torsion();
  certify_independence();
}

bool SUnitLattice::is_unit(const FieldElement& u) const {
  const NumberField& k = *K_;
  if (u.is_zero()) return false;
  Rat n = k.norm(u);
  Int rest[2] = {abs(n.get_num()), n.get_den()};
  for (auto& r : rest)
    for (auto& P : sigma_)
      while (r % P.p == 0) r /= P.p;
  if (rest[0] != 1 || rest[1] != 1) return false;
  std::vector<long> v;
  for (auto& P : sigma_) v.push_back(valuation(k, P, u));
  return principal_ideal(k, u) == ideal_product(k, sigma_, v);
}

void SUnitLattice::certify_torsion() const {
  const NumberField& k = *K_;
  Int start = 2L * k.degree() * k.degree() + 2;
  auto maps = degree_one_primes(k, start, 64, rational_prime_product(sigma_));
  Int g = 0;
  for (auto& m : maps) {
    g = gcd(g, m.q - 1);
    if (g == w_) return;
  }
  fail(ErrorKind::ValidationError, k.label() + ": torsion order " + std::to_string(w_) +
                                       " not certified (residue bound " + g.get_str() + ")");
}

std::shared_ptr<const SUnitLattice::LogData> SUnitLattice::log_data(mpfr_prec_t prec) const {
  {
    std::lock_guard<std::mutex> lk(cache_mu_);
    auto it = logs_.find(prec);
    if (it != logs_.end()) return it->second;
  }
  auto d = std::make_shared<LogData>();
  d->roots = isolate_roots(K_->polynomial(), prec);
  for (auto& u : free_) {
    auto l = log_vector(u, d->roots);
    if (l.empty()) {
      d->gens.clear();
      break;
    }
    d->gens.push_back(std::move(l));
  }
  std::lock_guard<std::mutex> lk(cache_mu_);
  logs_[prec] = d;
  return d;
}

std::vector<Interval> SUnitLattice::log_vector(const FieldElement& u, const RootEnclosures& roots) const {
  const NumberField& k = *K_;
  RatVec pc = k.to_power_basis(u);
  std::vector<Interval> out;
  std::size_t places = roots.roots.size();
  for (std::size_t j = 0; j + 1 < places; ++j) {
    Interval n2 = capk::evaluate(pc, roots.roots[j]).norm2();
    if (!n2.positive()) return {};
    out.push_back(n2.log());
  }
  for (auto& P : sigma_) out.emplace_back(Rat(valuation(k, P, u)), roots.prec);
  return out;
}

void SUnitLattice::certify_independence() const {
  if (free_.empty()) return;
  for (mpfr_prec_t prec = opt_.start_precision; prec <= opt_.precision_ceiling; prec *= 2) {
    auto d = log_data(prec);
    if (d->gens.empty()) continue;
    std::vector<Interval> zero(free_.size(), Interval(Rat(0), prec));
    if (interval_solve(d->gens, zero, prec)) {
      mpfr_prec_t cur = max_prec_.load();
      while (cur < prec && !max_prec_.compare_exchange_weak(cur, prec)) {
      }
      return;
    }
  }
  // dependent generators and too little precision look the same here
  fail(ErrorKind::RecoveryFailure, K_->label() + ": unit generators not certified independent up to " +
                                       std::to_string(opt_.precision_ceiling) + " bits");
}

std::optional<long> SUnitLattice::torsion_exponent(const FieldElement& t) const {
  for (long a = 0; a < w_; ++a)
    if (zeta_pows_[a] == t) return a;
  return std::nullopt;
}

FieldElement SUnitLattice::evaluate(const UnitExponentVector& e) const {
  const NumberField& k = *K_;
  FieldElement r = zeta_pows_[mod_pos(e.torsion, w_).get_si()];
  for (std::size_t i = 0; i < free_.size(); ++i) {
    if (e.free[i] == 0) continue;
    if (!e.free[i].fits_slong_p()) fail(ErrorKind::InternalOverflow, "unit exponent too large");
    long x = e.free[i].get_si();
    r = k.mul(r, k.pow(x < 0 ? free_inv_[i] : free_[i], x < 0 ? -x : x));
  }
  return r;
}

FieldElement SUnitLattice::evaluate(const IntVec& c) const {
  return evaluate(UnitExponentVector{c[0], IntVec(c.begin() + 1, c.end())});
}

UnitExponentVector SUnitLattice::recover_exponents(const FieldElement& u) const {
  const NumberField& k = *K_;
  if (!is_unit(u)) fail(ErrorKind::NotAUnit, k.label() + ": " + u.str() + " is not a sigma-unit");
  std::size_t r = free_.size();
  auto try_exponents = [&](const IntVec& e) -> std::optional<UnitExponentVector> {
    UnitExponentVector v{0, e};
    FieldElement prod = evaluate(v);
    auto a = torsion_exponent(k.div(u, prod));
    if (!a) return std::nullopt;
    v.torsion = *a;
    return v;
  };
  if (r == 0) {
    if (auto v = try_exponents({})) return *v;
    fail(ErrorKind::RecoveryFailure, "unit is not a root of unity in a rank-zero lattice");
  }
  for (mpfr_prec_t prec = opt_.start_precision; prec <= opt_.precision_ceiling; prec *= 2) {
    auto d = log_data(prec);
    if (d->gens.empty()) continue;
    auto l = log_vector(u, d->roots);
    if (l.empty()) continue;
    auto x = interval_solve(d->gens, l, prec);
    if (!x) continue;
    mpfr_prec_t cur = max_prec_.load();
    while (cur < prec && !max_prec_.compare_exchange_weak(cur, prec)) {
    }
    IntVec e0(r);
    for (std::size_t i = 0; i < r; ++i) e0[i] = round_mid((*x)[i]);
    if (auto v = try_exponents(e0)) return *v;
    if (r <= 8) {
      std::size_t total = 1;
      for (std::size_t i = 0; i < r; ++i) total *= 3;
      for (std::size_t code = 1; code < total; ++code) {
        IntVec e = e0;
        std::size_t c = code;
        for (std::size_t i = 0; i < r; ++i, c /= 3) e[i] += static_cast<long>(c % 3) - 1;
        if (auto v = try_exponents(e)) return *v;
      }
    }
  }
  fail(ErrorKind::RecoveryFailure, k.label() + ": exponent recovery failed up to " +
                                       std::to_string(opt_.precision_ceiling) + " bits for " + u.str());
}

IntVec SUnitLattice::coords(const FieldElement& u) const {
  UnitExponentVector e = recover_exponents(u);
  IntVec c{e.torsion};
  c.insert(c.end(), e.free.begin(), e.free.end());
  return c;
}

std::optional<IntVec> SUnitLattice::nth_root_coords(const IntVec& c, long n) const {
  IntVec out(c.size());
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i] % n != 0) return std::nullopt;
    out[i] = c[i] / n;
  }
  Int a = mod_pos(c[0], w_);
  Int g = gcd(Int(n), Int(w_));
  if (a % g != 0) return std::nullopt;
  Int m = Int(w_) / g;
  out[0] = m == 1 ? Int(0) : mod_pos((a / g) * inv_mod(mod_pos(Int(n) / g, m), m), m);
  return out;
}

std::optional<FieldElement> SUnitLattice::nth_root(const FieldElement& u, long n) const {
  auto rc = nth_root_coords(coords(u), n);
  if (!rc) return std::nullopt;
  FieldElement v = evaluate(*rc);
  if (K_->pow(v, n) != u) fail(ErrorKind::RecoveryFailure, "n-th root failed exact verification");
  return v;
}

FGAbGroup SUnitLattice::mod_n(long n) const {
  std::size_t g = 1 + free_.size();
  IntMatrix rel(g, g);
  rel(0, 0) = gcd(Int(n), Int(w_));
  for (std::size_t i = 1; i < g; ++i) rel(i, i) = n;
  return FGAbGroup(g, rel);
}

void SUnitLattice::certify_saturation(long p) const {
  const NumberField& k = *K_;
  bool tors = w_ % p == 0;
  std::vector<FieldElement> gens;
  if (tors) gens.push_back(zeta_);
  gens.insert(gens.end(), free_.begin(), free_.end());
  if (gens.empty()) return;
  std::size_t need = gens.size();
  Int avoid = rational_prime_product(sigma_);
  std::vector<IntVec> cols;
  Int start = 3;
  for (int round = 0; round < 40; ++round) {
    auto maps = degree_one_primes(k, start, 16, avoid);
    if (maps.empty()) break;
    for (auto& m : maps) {
      start = m.q + 1;
      if ((m.q - 1) % p != 0) continue;
      Int e = (m.q - 1) / p;
      Int g0;
      for (Int t = 2;; ++t) {
        g0 = pow_mod(t, e, m.q);
        if (g0 != 1) break;
      }
      IntVec col;
      for (auto& u : gens) {
        auto x = m.apply(u);
        if (!x || *x == 0) fail(ErrorKind::InternalOverflow, "unit vanishes at a residue prime");
        Int h = pow_mod(*x, e, m.q), gk = 1;
        long idx = -1;
        for (long j = 0; j < p; ++j, gk = gk * g0 % m.q)
          if (gk == h) {
            idx = j;
            break;
          }
        col.emplace_back(idx);
      }
      cols.push_back(col);
    }
    IntMatrix mat(need, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < need; ++i) mat(i, j) = cols[j][i];
    if (rank_mod_p(mat, p) == static_cast<int>(need)) return;
  }
  fail(ErrorKind::ValidationError, k.label() + ": unit lattice not certified " + std::to_string(p) + "-saturated");
}

}  // namespace capk
