#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "capk/matrix.hpp"

namespace capk {

// Coefficient vectors, constant term first.
using ZPoly = IntVec;
using QPoly = RatVec;

int degree(const QPoly& f);
QPoly to_q(const ZPoly& f);
QPoly poly_trim(QPoly f);
QPoly poly_mul(const QPoly& a, const QPoly& b);
QPoly poly_sub(const QPoly& a, const QPoly& b);
QPoly poly_rem(const QPoly& a, const QPoly& m);
QPoly poly_derivative(const QPoly& f);
// Number of distinct real roots (Sturm).
int count_real_roots(const ZPoly& f);
Int poly_discriminant(const ZPoly& f);

// Polynomials over F_p, p < 2^63.
using ModPoly = std::vector<std::uint64_t>;

class Fp {
 public:
  explicit Fp(std::uint64_t p) : p_(p) {}
  std::uint64_t p() const { return p_; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return a >= p_ - b ? a - (p_ - b) : a + b; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + (p_ - b); }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p_);
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
  std::uint64_t inv(std::uint64_t a) const { return pow(a, p_ - 2); }
  std::uint64_t from(const Int& x) const;

  ModPoly reduce(const ZPoly& f) const;
  ModPoly trim(ModPoly f) const;
  ModPoly add(const ModPoly& a, const ModPoly& b) const;
  ModPoly sub(const ModPoly& a, const ModPoly& b) const;
  ModPoly mul(const ModPoly& a, const ModPoly& b) const;
  std::pair<ModPoly, ModPoly> divrem(const ModPoly& a, const ModPoly& b) const;
  ModPoly rem(const ModPoly& a, const ModPoly& b) const { return divrem(a, b).second; }
  ModPoly gcd(ModPoly a, ModPoly b) const;
  ModPoly monic(const ModPoly& a) const;
  ModPoly powmod(const ModPoly& a, const Int& e, const ModPoly& m) const;
  ModPoly derivative(const ModPoly& a) const;

 private:
  std::uint64_t p_;
};

int degree(const ModPoly& f);

// Monic irreducible factors with multiplicities, sorted by (degree, coefficients).
std::vector<std::pair<ModPoly, int>> factor_mod_p(const ZPoly& f, std::uint64_t p);

}  // namespace capk
