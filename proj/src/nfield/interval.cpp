#include "capk/nfield/interval.hpp"

#include <algorithm>
#include <cmath>

#include "capk/errors.hpp"

namespace capk {

namespace {

mpfr_prec_t pmax(const Interval& a, const Interval& b) { return std::max(a.prec(), b.prec()); }

}  // namespace

Interval::Interval(mpfr_prec_t prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Rat& q, mpfr_prec_t prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_q(lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, q.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const Interval& o) {
  mpfr_init2(lo_, o.prec());
  mpfr_init2(hi_, o.prec());
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval& Interval::operator=(const Interval& o) {
  if (this != &o) {
    mpfr_set_prec(lo_, o.prec());
    mpfr_set_prec(hi_, o.prec());
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::hull(const Interval& a, const Interval& b) {
  Interval r(pmax(a, b));
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::point(const mpfr_t x, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set(r.lo_, x, MPFR_RNDD);
  mpfr_set(r.hi_, x, MPFR_RNDU);
  return r;
}

bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
bool Interval::positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::negative() const { return mpfr_sgn(hi_) < 0; }

void Interval::mid(mpfr_t out) const {
  mpfr_add(out, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(out, out, 1, MPFR_RNDN);
}

double Interval::width() const {
  mpfr_t w;
  mpfr_init2(w, prec());
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  double d = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return d;
}

std::vector<Int> Interval::integers_inside(std::size_t limit) const {
  Int a, b;
  mpfr_get_z(a.get_mpz_t(), lo_, MPFR_RNDU);
  mpfr_get_z(b.get_mpz_t(), hi_, MPFR_RNDD);
  std::vector<Int> out;
  for (Int x = a; x <= b && out.size() <= limit; ++x) out.push_back(x);
  return out;
}

Interval Interval::widened(const mpfr_t r) const {
  Interval w(*this);
  mpfr_sub(w.lo_, w.lo_, r, MPFR_RNDD);
  mpfr_add(w.hi_, w.hi_, r, MPFR_RNDU);
  return w;
}

std::string Interval::str() const {
  char buf[128];
  mpfr_snprintf(buf, sizeof buf, "[%.12Rg, %.12Rg]", lo_, hi_);
  return buf;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(pmax(a, b));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(pmax(a, b));
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  mpfr_prec_t p = pmax(a, b);
  Interval r(p);
  mpfr_t t;
  mpfr_init2(t, p);
  const __mpfr_struct* xs[2] = {a.lo_, a.hi_};
  const __mpfr_struct* ys[2] = {b.lo_, b.hi_};
  bool first = true;
  for (auto x : xs)
    for (auto y : ys) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  mpfr_clear(t);
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) fail(ErrorKind::DivisionByZero, "interval division by an interval containing 0");
  Interval inv(b.prec());
  mpfr_ui_div(inv.lo_, 1, b.hi_, MPFR_RNDD);
  mpfr_ui_div(inv.hi_, 1, b.lo_, MPFR_RNDU);
  return a * inv;
}

Interval Interval::operator-() const {
  Interval r(prec());
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval Interval::abs() const {
  if (mpfr_sgn(lo_) >= 0) return *this;
  if (mpfr_sgn(hi_) <= 0) return -*this;
  Interval r(prec());
  mpfr_set_zero(r.lo_, 1);
  mpfr_t t;
  mpfr_init2(t, prec());
  mpfr_neg(t, lo_, MPFR_RNDU);
  mpfr_max(r.hi_, t, hi_, MPFR_RNDU);
  mpfr_clear(t);
  return r;
}

Interval Interval::sqr() const {
  Interval a = abs();
  Interval r(prec());
  mpfr_mul(r.lo_, a.lo_, a.lo_, MPFR_RNDD);
  mpfr_mul(r.hi_, a.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::sqrt() const {
  Interval r(prec());
  if (mpfr_sgn(lo_) > 0) mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
  else mpfr_set_zero(r.lo_, 1);
  if (mpfr_sgn(hi_) < 0) fail(ErrorKind::InvalidArgument, "square root of a negative interval");
  mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::log() const {
  if (!positive()) fail(ErrorKind::DivisionByZero, "logarithm of an interval reaching 0");
  Interval r(prec());
  mpfr_log(r.lo_, lo_, MPFR_RNDD);
  mpfr_log(r.hi_, hi_, MPFR_RNDU);
  return r;
}

void Interval::mag(mpfr_t out) const {
  mpfr_t t;
  mpfr_init2(t, prec());
  mpfr_abs(t, lo_, MPFR_RNDU);
  mpfr_abs(out, hi_, MPFR_RNDU);
  mpfr_max(out, out, t, MPFR_RNDU);
  mpfr_clear(t);
}

ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) { return {a.re + b.re, a.im + b.im}; }

ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) { return {a.re - b.re, a.im - b.im}; }

ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexInterval operator/(const ComplexInterval& a, const ComplexInterval& b) {
  Interval n = b.norm2();
  ComplexInterval num{a.re * b.re + a.im * b.im, a.im * b.re - a.re * b.im};
  return {num.re / n, num.im / n};
}

namespace {

ComplexInterval cpoint(const mpfr_t re, const mpfr_t im, mpfr_prec_t prec) {
  return {Interval::point(re, prec), Interval::point(im, prec)};
}

ComplexInterval horner(const ZPoly& f, const ComplexInterval& z) {
  mpfr_prec_t p = z.re.prec();
  ComplexInterval acc(p);
  for (std::size_t k = f.size(); k-- > 0;) {
    acc = acc * z;
    acc.re = acc.re + Interval(Rat(f[k]), p);
  }
  return acc;
}

void midpoint(const ComplexInterval& z, mpfr_t re, mpfr_t im) {
  z.re.mid(re);
  z.im.mid(im);
}

}  // namespace

ComplexInterval evaluate(const RatVec& c, const ComplexInterval& z) {
  mpfr_prec_t p = z.re.prec();
  ComplexInterval acc(p);
  for (std::size_t k = c.size(); k-- > 0;) {
    acc = acc * z;
    acc.re = acc.re + Interval(c[k], p);
  }
  return acc;
}

RootEnclosures isolate_roots(const ZPoly& f0, mpfr_prec_t prec) {
  ZPoly f = f0;
  while (!f.empty() && f.back() == 0) f.pop_back();
  int d = static_cast<int>(f.size()) - 1;
  require(d >= 1 && f.back() == 1, ErrorKind::InvalidArgument, "root isolation needs a monic polynomial");
  RootEnclosures out;
  out.prec = prec;
  mpfr_prec_t wp = prec + 32;
  ZPoly df;
  for (int k = 1; k <= d; ++k) df.push_back(f[k] * k);

  // Aberth iteration on midpoints; starting points on a circle of Cauchy radius.
  double R = 1;
  for (int k = 0; k < d; ++k) R = std::max(R, 1 + std::fabs(f[k].get_d()));
  std::vector<ComplexInterval> z;
  for (int k = 0; k < d; ++k) {
    double ang = 2 * M_PI * k / d + 0.4;
    z.emplace_back(Interval(Rat(R * 0.5 * std::cos(ang)), wp), Interval(Rat(R * 0.5 * std::sin(ang)), wp));
  }
  mpfr_t re, im, tol, mag;
  mpfr_inits2(wp, re, im, tol, mag, (mpfr_ptr)0);
  mpfr_set_ui_2exp(tol, 1, -(static_cast<long>(prec) + 8), MPFR_RNDN);
  for (int iter = 0; iter < 2000; ++iter) {
    bool done = true;
    std::vector<ComplexInterval> nz;
    for (int i = 0; i < d; ++i) {
      ComplexInterval fz = horner(f, z[i]), dz = horner(df, z[i]);
      if (dz.norm2().contains_zero()) {
        nz.push_back(z[i]);
        done = false;
        continue;
      }
      ComplexInterval ratio = fz / dz;
      ComplexInterval s(wp);
      for (int j = 0; j < d; ++j) {
        if (j == i) continue;
        ComplexInterval diff = z[i] - z[j];
        if (diff.norm2().contains_zero()) continue;
        ComplexInterval one(Interval(Rat(1), wp), Interval(wp));
        s = s + one / diff;
      }
      ComplexInterval one(Interval(Rat(1), wp), Interval(wp));
      ComplexInterval den = one - ratio * s;
      ComplexInterval w = den.norm2().contains_zero() ? ratio : ratio / den;
      ComplexInterval next = z[i] - w;
      midpoint(next, re, im);
      nz.push_back(cpoint(re, im, wp));
      w.norm2().mag(mag);
      if (mpfr_greater_p(mag, tol)) done = false;
    }
    z = std::move(nz);
    if (done) break;
  }

  // Weierstrass corrections give inclusion disks of radius d |W_i|.
  std::vector<Interval> rad;
  for (int i = 0; i < d; ++i) {
    ComplexInterval prod(Interval(Rat(1), wp), Interval(wp));
    for (int j = 0; j < d; ++j)
      if (j != i) prod = prod * (z[i] - z[j]);
    if (prod.norm2().contains_zero()) {
      mpfr_clears(re, im, tol, mag, (mpfr_ptr)0);
      fail(ErrorKind::RecoveryFailure, "root approximations collide");
    }
    ComplexInterval W = horner(f, z[i]) / prod;
    Interval r = W.norm2().sqrt() * Interval(Rat(d), wp);
    r.mag(mag);
    rad.push_back(Interval::point(mag, wp));
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Interval dist = (z[i] - z[j]).norm2().sqrt();
      Interval sum = rad[i] + rad[j];
      if (!mpfr_greater_p(dist.lo(), sum.hi())) {
        mpfr_clears(re, im, tol, mag, (mpfr_ptr)0);
        fail(ErrorKind::RecoveryFailure, "root disks overlap at this precision");
      }
    }
  int r1 = count_real_roots(f);
  std::vector<int> real_idx, upper_idx;
  int lower = 0;
  for (int i = 0; i < d; ++i) {
    z[i].im.mid(im);
    mpfr_abs(im, im, MPFR_RNDN);
    if (!mpfr_greater_p(im, rad[i].lo())) real_idx.push_back(i);
    else if (z[i].im.positive()) upper_idx.push_back(i);
    else ++lower;
  }
  if (static_cast<int>(real_idx.size()) != r1 || static_cast<int>(upper_idx.size()) != lower) {
    mpfr_clears(re, im, tol, mag, (mpfr_ptr)0);
    fail(ErrorKind::RecoveryFailure, "cannot separate real roots at this precision");
  }
  mpfr_t rr;
  mpfr_init2(rr, wp);
  for (int i = 0; i < d; ++i) {
    rad[i].mag(rr);
    bool real = std::find(real_idx.begin(), real_idx.end(), i) != real_idx.end();
    ComplexInterval box{z[i].re.widened(rr), real ? Interval(wp) : z[i].im.widened(rr)};
    out.all.push_back(box);
  }
  for (int i : real_idx) out.roots.push_back(out.all[i]);
  for (int i : upper_idx) out.roots.push_back(out.all[i]);
  out.r1 = r1;
  out.r2 = static_cast<int>(upper_idx.size());
  mpfr_clear(rr);
  mpfr_clears(re, im, tol, mag, (mpfr_ptr)0);
  return out;
}

}  // namespace capk
