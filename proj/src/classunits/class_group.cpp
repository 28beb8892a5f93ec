#include "capk/classunits/class_group.hpp"

#include <omp.h>

#include <limits>

#include "capk/errors.hpp"
#include "capk/fgab/normal_form.hpp"

namespace capk {

namespace {

std::vector<long> to_longs(const IntVec& v, std::size_t from, std::size_t count) {
  std::vector<long> out;
  for (std::size_t i = from; i < from + count; ++i) out.push_back(v[i].get_si());
  return out;
}

// Fraction-free elimination in 128-bit integers; false on overflow.
bool det128(std::vector<__int128>& a, int n, __int128& out) {
  __int128 prev = 1;
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    if (a[k * n + k] == 0) {
      int r = k + 1;
      while (r < n && a[r * n + k] == 0) ++r;
      if (r == n) {
        out = 0;
        return true;
      }
      for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[r * n + j]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        __int128 x, y, z;
        if (__builtin_mul_overflow(a[i * n + j], a[k * n + k], &x)) return false;
        if (__builtin_mul_overflow(a[i * n + k], a[k * n + j], &y)) return false;
        if (__builtin_sub_overflow(x, y, &z)) return false;
        a[i * n + j] = z / prev;
      }
    prev = a[k * n + k];
  }
  out = sign * a[(n - 1) * n + (n - 1)];
  return true;
}

Int from128(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  Int r = static_cast<unsigned long>(u >> 64);
  r <<= 64;
  r += static_cast<unsigned long>(u & 0xFFFFFFFFFFFFFFFFULL);
  return neg ? Int(-r) : r;
}

}  // namespace

ClassGroupData::ClassGroupData(std::shared_ptr<const NumberField> K, std::vector<PrimeIdeal> factor_base,
                               IntMatrix relations, std::vector<FieldElement> witnesses, std::vector<PrimeIdeal> sigma)
    : K_(std::move(K)), fb_(std::move(factor_base)), sigma_(std::move(sigma)), rel_(std::move(relations)),
      wit_(std::move(witnesses)) {
  const NumberField& k = *K_;
  auto bad = [&](const std::string& m) { fail(ErrorKind::ValidationError, k.label() + ": " + m); };
  if (rel_.rows() > 0 && rel_.cols() != fb_.size()) bad("relation length differs from factor base size");
  if (rel_.rows() == 0) rel_ = IntMatrix(0, fb_.size());
  if (wit_.size() != rel_.rows()) bad("one witness is required per relation");
  all_ = fb_;
  all_.insert(all_.end(), sigma_.begin(), sigma_.end());
  for (std::size_t i = 0; i < all_.size(); ++i)
    for (std::size_t j = i + 1; j < all_.size(); ++j)
      if (all_[i] == all_[j]) bad("prime " + all_[i].label + " listed twice in factor base and sigma");
  for (auto& P : all_) {
    bool seen = false;
    for (auto& s : support_) seen = seen || s == P.p;
    if (!seen) support_.push_back(P.p);
  }
  group_ = FGAbGroup(fb_.size(), rel_);

  for (std::size_t i = 0; i < wit_.size(); ++i) {
    std::string where = "relation " + std::to_string(i + 1) + " witness " + wit_[i].str();
    if (wit_[i].num.size() != static_cast<std::size_t>(k.degree()) || wit_[i].is_zero())
      fail(ErrorKind::WitnessMismatch, k.label() + ": " + where + " is not a nonzero field element");
    auto v = factor(wit_[i]);
    if (!v) fail(ErrorKind::WitnessMismatch, k.label() + ": " + where + " is not supported on factor base and sigma");
    for (std::size_t j = 0; j < fb_.size(); ++j)
      if ((*v)[j] != rel_(i, j))
        fail(ErrorKind::WitnessMismatch, k.label() + ": " + where + " has valuation " + (*v)[j].get_str() + " at " +
                                             fb_[j].label + ", relation says " + rel_(i, j).get_str());
  }

  // Minkowski constant squared, with pi replaced by a lower bound
  Rat four_over_pi_sq(Int(16) * Int("10000000000"), Int(314159) * Int(314159));
  Rat m2 = abs(Rat(k.discriminant()));
  for (int i = 0; i < k.r2(); ++i) m2 *= four_over_pi_sq;
  Rat fact = 1;
  for (int i = 1; i <= k.degree(); ++i) fact *= Rat(i, k.degree());
  m2 *= fact * fact;
  mink2_ = m2;
  for (Int p = 2; Rat(p * p) <= mink2_; mpz_nextprime(p.get_mpz_t(), p.get_mpz_t())) {
    covered_.push_back(p);
    int known = 0;
    for (auto& P : all_)
      if (P.p == p) known += P.e * P.f;
    if (known == k.degree()) continue;
    std::vector<PrimeIdeal> above;
    try {
      above = factor_rational_prime(k, p);
    } catch (const Error& e) {
      fail(ErrorKind::CoverageGap, k.label() + ": primes above " + p.get_str() +
                                       " below the Minkowski bound cannot be enumerated (" + e.what() + ")");
    }
    for (auto& Q : above) {
      Int nq = ideal_norm(Q.ideal).get_num();
      if (Rat(nq * nq) > mink2_) continue;
      bool listed = false;
      for (auto& P : all_) listed = listed || P == Q;
      if (!listed)
        fail(ErrorKind::CoverageGap, k.label() + ": prime " + Q.label + " of norm " + nq.get_str() +
                                         " lies below the Minkowski bound but is missing from the factor base");
    }
  }
}

bool ClassGroupData::norm_supported(const Rat& n) const {
  Int parts[2] = {abs(n.get_num()), n.get_den()};
  for (auto& r : parts) {
    for (auto& p : support_)
      while (r % p == 0) r /= p;
    if (r != 1) return false;
  }
  return true;
}

std::optional<IntVec> ClassGroupData::factor(const IdealHNF& I) const {
  if (!norm_supported(ideal_norm(I))) return std::nullopt;
  IntVec v;
  std::vector<long> vl;
  for (auto& P : all_) {
    long x = valuation(*K_, P, I);
    v.emplace_back(x);
    vl.push_back(x);
  }
  if (ideal_product(*K_, all_, vl) != I) return std::nullopt;
  return v;
}

std::optional<IntVec> ClassGroupData::factor(const FieldElement& x) const {
  if (x.is_zero() || !norm_supported(K_->norm(x))) return std::nullopt;
  return factor(principal_ideal(*K_, x));
}

ElementCoords ClassGroupData::dlog(const IdealHNF& I) const {
  auto v = factor(I);
  if (!v) fail(ErrorKind::NotSmooth, K_->label() + ": ideal " + I.str() + " does not factor over the factor base");
  return group_.reduce(IntVec(v->begin(), v->begin() + fb_.size()));
}

FieldElement ClassGroupData::principal_generator(const IdealHNF& I) const {
  const NumberField& k = *K_;
  auto v = factor(I);
  if (!v) fail(ErrorKind::NotSmooth, k.label() + ": ideal " + I.str() + " does not factor over the factor base");
  IntVec vfb(v->begin(), v->begin() + fb_.size());
  if (!group_.is_zero(vfb)) fail(ErrorKind::InvalidArgument, k.label() + ": ideal class is not trivial");
  FieldElement x = k.one();
  if (!fb_.empty()) {
    auto c = solve_left(rel_, vfb);
    if (!c) fail(ErrorKind::SolveFailure, k.label() + ": relations do not express " + vec_str(vfb));
    for (std::size_t i = 0; i < c->size(); ++i)
      if ((*c)[i] != 0) x = k.mul(x, k.pow(wit_[i], (*c)[i].get_si()));
  }
  if (!same_away_from_sigma(principal_ideal(k, x), I))
    fail(ErrorKind::SolveFailure, k.label() + ": assembled generator does not generate the ideal");
  return x;
}

IdealHNF ClassGroupData::representative(const IntVec& coords) const {
  return ideal_product(*K_, fb_, to_longs(coords, 0, fb_.size()));
}

IdealHNF ClassGroupData::strip_sigma(const IdealHNF& I) const {
  IdealHNF r = I;
  for (auto& P : sigma_) {
    int v = valuation(*K_, P, r);
    if (v != 0) r = ideal_mul(*K_, r, prime_power(*K_, P, -v));
  }
  return r;
}

bool ClassGroupData::same_away_from_sigma(const IdealHNF& a, const IdealHNF& b) const {
  return strip_sigma(a) == strip_sigma(b);
}

long capped_height(int degree, long height, std::uint64_t budget) {
  long h = height;
  while (h > 0) {
    Int box = 1;
    for (int i = 0; i < degree; ++i) box *= 2 * h + 1;
    if (box <= Int(static_cast<unsigned long>(budget))) break;
    --h;
  }
  return h;
}

SaturationReport sweep_box(const ClassGroupData& cg, long h, bool parallel) {
  const NumberField& K = cg.field();
  const int d = K.degree();
  SaturationReport rep;
  rep.requested_height = rep.height = h;
  std::vector<std::int64_t> table(static_cast<std::size_t>(d) * d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const Int& t = K.table()[i](j, k);
        if (!t.fits_slong_p()) fail(ErrorKind::InternalOverflow, "multiplication table too large for the sweep");
        table[(i * d + j) * d + k] = t.get_si();
      }
  std::vector<PrimeIdeal> all = cg.factor_base();
  all.insert(all.end(), cg.sigma().begin(), cg.sigma().end());
  std::vector<Int> support;
  for (auto& P : all) {
    bool seen = false;
    for (auto& s : support) seen = seen || s == P.p;
    if (!seen) support.push_back(P.p);
  }
  const IntMatrix& lattice = cg.group().relation_basis();
  const std::size_t nfb = cg.factor_base().size();
  const long side = 2 * h + 1;
  long total = 1;
  for (int i = 0; i < d; ++i) total *= side;

  std::uint64_t tested = 0, smooth = 0;
  long first_bad = std::numeric_limits<long>::max();

  auto visit = [&](long idx, std::uint64_t& t, std::uint64_t& s) {
    std::vector<long> x(d);
    long c = idx;
    for (int i = d - 1; i >= 0; --i, c /= side) x[i] = c % side - h;
    int lead = 0;
    while (lead < d && x[lead] == 0) ++lead;
    if (lead == d || x[lead] < 0) return;
    ++t;
    std::vector<__int128> m(static_cast<std::size_t>(d) * d, 0);
    for (int i = 0; i < d; ++i) {
      if (x[i] == 0) continue;
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) m[j * d + k] += static_cast<__int128>(x[i]) * table[(i * d + j) * d + k];
    }
    __int128 n128;
    IntVec xv(x.begin(), x.end());
    FieldElement fe(xv);
    Int n = det128(m, d, n128) ? from128(n128) : K.norm(fe).get_num();
    n = abs(n);
    Int rest = n;
    std::vector<long> pv(support.size(), 0);
    for (std::size_t i = 0; i < support.size(); ++i)
      while (rest % support[i] == 0) {
        rest /= support[i];
        ++pv[i];
      }
    if (rest != 1) return;
    IntVec v(all.size());
    std::vector<long> sum(support.size(), 0);
    for (std::size_t i = 0; i < all.size(); ++i) {
      long val = valuation(K, all[i], fe);
      v[i] = val;
      for (std::size_t s2 = 0; s2 < support.size(); ++s2)
        if (support[s2] == all[i].p) sum[s2] += val * all[i].f;
    }
    if (sum != pv) return;  // some prime outside the factor base divides (x)
    ++s;
    IntVec vfb(v.begin(), v.begin() + nfb);
    if (!lattice_contains(lattice, vfb)) {
#pragma omp critical(capk_sweep_violation)
      if (idx < first_bad) first_bad = idx;
    }
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic, 4096) reduction(+ : tested, smooth)
    for (long idx = 0; idx < total; ++idx) visit(idx, tested, smooth);
  } else {
    for (long idx = 0; idx < total; ++idx) visit(idx, tested, smooth);
  }
  rep.tested = tested;
  rep.smooth = smooth;
  if (first_bad != std::numeric_limits<long>::max()) {
    rep.passed = false;
    long c = first_bad;
    rep.violation.assign(d, 0);
    for (int i = d - 1; i >= 0; --i, c /= side) rep.violation[i] = c % side - h;
  }
  return rep;
}

SaturationReport ClassGroupData::saturation_sweep(const SaturationOptions& opt) const {
  long h = capped_height(K_->degree(), opt.height, opt.budget);
  SaturationReport rep = sweep_box(*this, h, opt.parallel);
  rep.requested_height = opt.height;
  rep.capped = h < opt.height;
  return rep;
}

SaturationReport validate_saturation(const ClassGroupData& cg, const SaturationOptions& opt) {
  SaturationReport rep = cg.saturation_sweep(opt);
  if (!rep.passed)
    fail(ErrorKind::SaturationViolation, cg.field().label() + ": principal ideal of " + vec_str(rep.violation) +
                                             " is not in the relation lattice");
  return rep;
}

}  // namespace capk
