#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "capk/fgab/group.hpp"
#include "capk/nfield/ideal.hpp"

namespace capk {

struct SaturationOptions {
  long height = 12;
  // Upper limit on the number of box points; the height shrinks until the box fits.
  std::uint64_t budget = 2000000;
  bool parallel = true;
};

struct SaturationReport {
  long requested_height = 0;
  long height = 0;
  bool capped = false;
  std::uint64_t tested = 0;
  std::uint64_t smooth = 0;
  bool passed = true;
  IntVec violation;  // first offending element (box order) when !passed
};

class ClassGroupData {
 public:
  // Verifies every witness identity (WitnessMismatch) and Minkowski coverage (CoverageGap).
  ClassGroupData(std::shared_ptr<const NumberField> K, std::vector<PrimeIdeal> factor_base, IntMatrix relations,
                 std::vector<FieldElement> witnesses, std::vector<PrimeIdeal> sigma);

  const NumberField& field() const { return *K_; }
  std::shared_ptr<const NumberField> field_ptr() const { return K_; }
  const std::vector<PrimeIdeal>& factor_base() const { return fb_; }
  const std::vector<PrimeIdeal>& sigma() const { return sigma_; }
  const IntMatrix& relations() const { return rel_; }
  const std::vector<FieldElement>& witnesses() const { return wit_; }
  const FGAbGroup& group() const { return group_; }
  // Upper bound for the square of the Minkowski constant.
  const Rat& minkowski_bound_squared() const { return mink2_; }
  const std::vector<Int>& covered_rational_primes() const { return covered_; }

  // Exponents over factor_base followed by sigma; nullopt when I does not factor there.
  std::optional<IntVec> factor(const IdealHNF& I) const;
  std::optional<IntVec> factor(const FieldElement& x) const;
  ElementCoords dlog(const IdealHNF& I) const;  // NotSmooth
  // x with (x) = I away from sigma. InvalidArgument when dlog(I) != 0, SolveFailure when
  // the relations cannot express it.
  FieldElement principal_generator(const IdealHNF& I) const;
  // Product of factor-base primes with the given exponents.
  IdealHNF representative(const IntVec& coords) const;
  // Removes all sigma-primes from I.
  IdealHNF strip_sigma(const IdealHNF& I) const;
  bool same_away_from_sigma(const IdealHNF& a, const IdealHNF& b) const;

  SaturationReport saturation_sweep(const SaturationOptions& opt) const;

 private:
  std::shared_ptr<const NumberField> K_;
  std::vector<PrimeIdeal> fb_, sigma_, all_;
  IntMatrix rel_;
  std::vector<FieldElement> wit_;
  FGAbGroup group_;
  Rat mink2_;
  std::vector<Int> covered_;
  std::vector<Int> support_;  // rational primes below factor_base and sigma

  bool norm_supported(const Rat& n) const;
};

// Throws SaturationViolation with the offending element.
SaturationReport validate_saturation(const ClassGroupData& cg, const SaturationOptions& opt);

// Box sweep used by saturation_sweep; exposed for the serial/parallel benchmark.
SaturationReport sweep_box(const ClassGroupData& cg, long height, bool parallel);
long capped_height(int degree, long height, std::uint64_t budget);

}  // namespace capk
