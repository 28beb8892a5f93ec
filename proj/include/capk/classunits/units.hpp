#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "capk/fgab/group.hpp"
#include "capk/nfield/ideal.hpp"

namespace capk {

struct UnitOptions {
  mpfr_prec_t start_precision = 64;
  mpfr_prec_t precision_ceiling = 1024;
};

// u = zeta^torsion * prod free_i^free[i]
struct UnitExponentVector {
  Int torsion;
  IntVec free;
};

// A ring homomorphism O_K -> F_q from a prime of degree one.
struct ResidueMap {
  Int q;
  IntVec images;  // image of each integral-basis element
  std::optional<Int> apply(const FieldElement& x) const;  // nullopt if x is not q-integral
};

// Degree-one primes above rational primes q >= start, skipping q dividing avoid.
std::vector<ResidueMap> degree_one_primes(const NumberField& K, const Int& start, std::size_t count, const Int& avoid);

class SUnitLattice {
 public:
  // Validates the torsion generator, the sigma-unit property, the Dirichlet rank and
  // independence. Throws ValidationError or NotAUnit.
  SUnitLattice(std::shared_ptr<const NumberField> K, FieldElement zeta, long claimed_order,
               std::vector<FieldElement> free, std::vector<PrimeIdeal> sigma, UnitOptions opt = {});

  const NumberField& field() const { return *K_; }
  long torsion_order() const { return w_; }
  std::size_t rank() const { return free_.size(); }
  const FieldElement& torsion_generator() const { return zeta_; }
  const std::vector<FieldElement>& free_generators() const { return free_; }
  const std::vector<PrimeIdeal>& sigma() const { return sigma_; }
  // Z/w x Z^r on (zeta, u_1, ..., u_r).
  const FGAbGroup& group() const { return group_; }

  bool is_unit(const FieldElement& u) const;
  UnitExponentVector recover_exponents(const FieldElement& u) const;  // NotAUnit, RecoveryFailure
  IntVec coords(const FieldElement& u) const;                        // (torsion, free...)
  FieldElement evaluate(const IntVec& coords) const;
  FieldElement evaluate(const UnitExponentVector& e) const;

  // A verified root v with v^n = u, or nullopt.
  std::optional<FieldElement> nth_root(const FieldElement& u, long n) const;
  std::optional<IntVec> nth_root_coords(const IntVec& c, long n) const;

  // U/U^n = Z/gcd(w,n) x (Z/n)^r on the same generators.
  FGAbGroup mod_n(long n) const;

  // Certifies that U meets the p-th powers of the full sigma-unit group only in U^p,
  // using characters at degree-one primes. Throws ValidationError when not certified.
  void certify_saturation(long p) const;

  mpfr_prec_t max_precision_used() const { return max_prec_.load(); }

 private:
  std::shared_ptr<const NumberField> K_;
  FieldElement zeta_;
  long w_ = 1;
  std::vector<FieldElement> free_;
  std::vector<PrimeIdeal> sigma_;
  UnitOptions opt_;
  FGAbGroup group_;
  std::vector<FieldElement> zeta_pows_, free_inv_;

  struct LogData {
    RootEnclosures roots;
    std::vector<std::vector<Interval>> gens;  // empty when this precision is too low
  };
  mutable std::mutex cache_mu_;
  mutable std::map<mpfr_prec_t, std::shared_ptr<const LogData>> logs_;
  mutable std::atomic<mpfr_prec_t> max_prec_{0};

  std::shared_ptr<const LogData> log_data(mpfr_prec_t prec) const;
  // Archimedean logs (last place dropped) then sigma valuations; empty when imprecise.
  std::vector<Interval> log_vector(const FieldElement& u, const RootEnclosures& roots) const;
  std::optional<long> torsion_exponent(const FieldElement& t) const;
  void certify_torsion() const;
  void certify_independence() const;
};

}  // namespace capk
