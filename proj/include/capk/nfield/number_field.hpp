#pragma once

#include <optional>
#include <string>
#include <vector>

#include "capk/matrix.hpp"
#include "capk/nfield/interval.hpp"
#include "capk/nfield/poly.hpp"

namespace capk {

// Coordinates over the integral basis divided by a positive denominator, kept reduced.
struct FieldElement {
  IntVec num;
  Int den = 1;

  FieldElement() = default;
  FieldElement(IntVec n, Int d = 1);
  bool operator==(const FieldElement& o) const { return num == o.num && den == o.den; }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }
  bool operator<(const FieldElement& o) const;
  bool is_integral() const { return den == 1; }
  bool is_zero() const { return capk::is_zero(num); }
  std::string str() const;
};

class NumberField {
 public:
  // Verifies: monic irreducible f, basis spans a ring containing Z[theta], and the
  // claimed discriminant and signature when given. Throws ValidationError.
  NumberField(std::string label, ZPoly f, RatMatrix basis, std::optional<Int> claimed_disc = std::nullopt,
              std::optional<std::pair<int, int>> claimed_signature = std::nullopt);

  const std::string& label() const { return label_; }
  int degree() const { return d_; }
  const ZPoly& polynomial() const { return f_; }
  const RatMatrix& basis() const { return B_; }
  const RatMatrix& basis_inverse() const { return Binv_; }
  const Int& discriminant() const { return disc_; }
  const Int& index() const { return index_; }
  int r1() const { return r1_; }
  int r2() const { return r2_; }
  int unit_rank() const { return r1_ + r2_ - 1; }

  FieldElement zero() const { return FieldElement(IntVec(d_)); }
  FieldElement one() const { return FieldElement(one_); }
  FieldElement from_int(const Int& n) const { return FieldElement(capk::scale(one_, n)); }
  FieldElement from_rat(const Rat& q) const { return FieldElement(capk::scale(one_, q.get_num()), q.get_den()); }
  FieldElement basis_element(std::size_t i) const { return FieldElement(unit_vec(d_, i)); }
  FieldElement theta() const;
  FieldElement from_power_basis(const RatVec& v) const;
  RatVec to_power_basis(const FieldElement& x) const;
  FieldElement eval(const QPoly& g, const FieldElement& x) const;

  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement sub(const FieldElement& a, const FieldElement& b) const;
  FieldElement neg(const FieldElement& a) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  FieldElement inv(const FieldElement& a) const;  // DivisionByZero
  FieldElement div(const FieldElement& a, const FieldElement& b) const { return mul(a, inv(b)); }
  FieldElement pow(const FieldElement& a, long k) const;
  FieldElement scale(const FieldElement& a, const Rat& q) const;

  // Rows: coordinates of x * w_j over the integral basis (for an integral numerator).
  IntMatrix regular_matrix(const IntVec& x) const;
  IntVec mul_int(const IntVec& a, const IntVec& b) const;
  Rat norm(const FieldElement& a) const;
  Rat trace(const FieldElement& a) const;
  // table()[i] has rows w_i * w_j.
  const std::vector<IntMatrix>& table() const { return mult_; }

  RootEnclosures roots(mpfr_prec_t prec) const;
  std::string power_str(const FieldElement& x) const;

 private:
  std::string label_;
  int d_;
  ZPoly f_;
  RatMatrix B_, Binv_;
  std::vector<IntMatrix> mult_;
  IntVec one_;
  Int disc_, index_;
  int r1_ = 0, r2_ = 0;
};

// Irreducibility over Q: mod-p degree patterns, then an exact test on root-subset products.
bool is_irreducible(const ZPoly& f);

}  // namespace capk
