#pragma once

#include <mpfr.h>

#include <string>
#include <vector>

#include "capk/matrix.hpp"
#include "capk/nfield/poly.hpp"

namespace capk {

// Closed real interval [lo, hi] with outward rounding.
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec = 64);
  Interval(const Rat& q, mpfr_prec_t prec);
  Interval(const Interval& o);
  Interval& operator=(const Interval& o);
  ~Interval();

  static Interval hull(const Interval& a, const Interval& b);
  static Interval point(const mpfr_t x, mpfr_prec_t prec);

  mpfr_prec_t prec() const { return mpfr_get_prec(lo_); }
  const __mpfr_struct* lo() const { return lo_; }
  const __mpfr_struct* hi() const { return hi_; }
  bool contains_zero() const;
  bool positive() const;
  bool negative() const;
  // Midpoint and radius, rounded to nearest.
  void mid(mpfr_t out) const;
  double width() const;
  // Integers inside the interval when there are few of them.
  std::vector<Int> integers_inside(std::size_t limit = 4) const;
  Interval widened(const mpfr_t r) const;
  std::string str() const;

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);
  Interval operator-() const;
  Interval abs() const;
  Interval sqr() const;
  Interval sqrt() const;
  Interval log() const;
  // Upper bound of |x| as an MPFR number (rounded up).
  void mag(mpfr_t out) const;

 private:
  mpfr_t lo_, hi_;
};

struct ComplexInterval {
  Interval re, im;
  explicit ComplexInterval(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
  ComplexInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}
  Interval norm2() const { return re.sqr() + im.sqr(); }
};

ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b);
ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b);
ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b);
ComplexInterval operator/(const ComplexInterval& a, const ComplexInterval& b);

// Enclosures of all complex roots of a squarefree monic integer polynomial.
// Real roots come first (im is an exact zero point interval widened by the disk),
// then one representative of each conjugate pair with positive imaginary part.
struct RootEnclosures {
  mpfr_prec_t prec = 0;
  int r1 = 0, r2 = 0;
  std::vector<ComplexInterval> roots;  // r1 + r2 entries
  std::vector<ComplexInterval> all;    // every root, for symmetric functions
};

// Throws RecoveryFailure if isolation fails at this precision.
RootEnclosures isolate_roots(const ZPoly& f, mpfr_prec_t prec);

ComplexInterval evaluate(const RatVec& power_coords, const ComplexInterval& z);

}  // namespace capk
