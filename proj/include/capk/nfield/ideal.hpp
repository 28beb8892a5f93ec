#pragma once

#include <string>
#include <vector>

#include "capk/nfield/number_field.hpp"

namespace capk {

// (1/den) * row span of an upper-triangular Hermite basis over the integral basis.
class IdealHNF {
 public:
  IdealHNF() = default;
  IdealHNF(IntMatrix hnf, Int den);  // normalizes; the caller guarantees an ideal lattice

  const IntMatrix& hnf() const { return H_; }
  const Int& den() const { return den_; }
  bool is_integral() const { return den_ == 1; }
  bool operator==(const IdealHNF& o) const { return den_ == o.den_ && H_ == o.H_; }
  bool operator!=(const IdealHNF& o) const { return !(*this == o); }
  bool operator<(const IdealHNF& o) const;
  std::string str() const;

 private:
  IntMatrix H_;
  Int den_ = 1;
};

// Checks closure under the integral basis; throws ValidationError otherwise.
IdealHNF make_ideal(const NumberField& K, const IntMatrix& basis_rows, const Int& den);
IdealHNF ideal_from_generators(const NumberField& K, const std::vector<FieldElement>& gens);
IdealHNF principal_ideal(const NumberField& K, const FieldElement& x);
IdealHNF unit_ideal(const NumberField& K);
IdealHNF ideal_mul(const NumberField& K, const IdealHNF& a, const IdealHNF& b);
IdealHNF ideal_pow(const NumberField& K, const IdealHNF& a, unsigned k);
IdealHNF ideal_add(const NumberField& K, const IdealHNF& a, const IdealHNF& b);
Rat ideal_norm(const IdealHNF& a);
bool ideal_contains(const IdealHNF& a, const FieldElement& x);
std::vector<FieldElement> ideal_basis(const IdealHNF& a);

struct PrimeIdeal {
  IdealHNF ideal;
  Int p;
  int e = 0, f = 0;
  FieldElement gen;   // P = (p, gen)
  IntVec beta;        // integral, beta * P inside pO, beta not in pO
  IdealHNF inverse;
  std::string label;
  bool operator==(const PrimeIdeal& o) const { return ideal == o.ideal; }
};

// Verifies primality (O/P is a field); throws NotPrime.
PrimeIdeal make_prime(const NumberField& K, const Int& p, const FieldElement& gen);
int valuation(const NumberField& K, const PrimeIdeal& P, const FieldElement& x);
int valuation(const NumberField& K, const PrimeIdeal& P, const IdealHNF& a);
IdealHNF prime_power(const NumberField& K, const PrimeIdeal& P, long k);
// prod P_i^{v_i}
IdealHNF ideal_product(const NumberField& K, const std::vector<PrimeIdeal>& ps, const std::vector<long>& v);

// Kummer-Dedekind. Throws IndexDivisor when p divides [O_K : Z[theta]].
std::vector<PrimeIdeal> factor_rational_prime(const NumberField& K, const Int& p);

// F_p linear algebra on integer matrices.
IntMatrix left_kernel_mod_p(const IntMatrix& m, const Int& p);
int rank_mod_p(const IntMatrix& m, const Int& p);

}  // namespace capk
