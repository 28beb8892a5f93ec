#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "capk/capitulation/covering.hpp"
#include "capk/cohom/complex.hpp"

namespace capk {

// Delta acting on exponent coordinates of the sigma-units of K.
GModule units_module(const CoveringDatum& cov);

struct MuN {
  long order = 1;  // gcd(n, w_K)
  Subgroup inside_units;
  GModule module;
  FGAbHom inclusion;
};
MuN mu_n(const CoveringDatum& cov, const GModule& units);
// Coordinate of a root of unity of K on the generator of mu_n; nullopt outside mu_n.
std::optional<Int> mu_n_coordinate(const CoveringDatum& cov, const MuN& mu, const FieldElement& z);

struct KernelGenerator {
  IntVec class_coords;  // over F's factor base
  IdealHNF ideal;       // product of factor-base primes
  FieldElement witness;  // a O_K = (witness) away from sigma
};

struct CapitulationKernel {
  FGAbHom j;
  Subgroup kernel;
  std::vector<KernelGenerator> generators;
  std::vector<KernelGenerator> prime_witnesses;  // factor-base primes of F that capitulate
  bool killed_by_n = false;
};
CapitulationKernel capitulation_kernel(const CoveringDatum& cov);
KernelGenerator kernel_element(const CoveringDatum& cov, const IntVec& class_coords);

struct PsiData {
  FGAbGroup units_mod_n;   // U_K / U_K^n
  FGAbGroup base_mod_n;    // U_F / U_F^n
  FGAbHom base_to_top;     // induced by the embedding
  std::vector<FGAbHom> phi;  // [u] -> [u / delta(u)]
  Subgroup psi;            // Psi / U_K^n inside U_K / U_K^n
  Subgroup base_image;     // image of U_F, inside U_K / U_K^n
  Quotient quotient;       // Psi / U_F U_K^n, presented on psi's generators
  bool psi_is_everything = false;
  Int index;               // [U_K : U_F U_K^n]
};
PsiData psi_group(const CoveringDatum& cov);
// Class in Psi / U_F U_K^n of a unit of K lying in Psi.
ElementCoords psi_class(const CoveringDatum& cov, const PsiData& psi, const FieldElement& u);

struct Term1 {
  Subgroup kernel;  // inside U_F / U_F^n
  std::vector<FieldElement> units;  // representative in F of each generator
  std::vector<FieldElement> roots;  // v in K with v^n = u
};
Term1 term1(const CoveringDatum& cov, const PsiData& psi);

// c(delta) = delta(v) / v
Cochain kummer_cocycle(const CoveringDatum& cov, const MuN& mu, const FieldElement& v);
FGAbHom map1_kummer(const CoveringDatum& cov, const Term1& t1, const MuN& mu, const CohomologyGroup& h1mu);

struct ResolventCertificate {
  FieldElement theta, b, x;
  IntVec kernel_coords;  // class of the descended ideal, over the kernel generators
  FieldElement t;        // coboundary unit relating the two cocycles
  FieldElement beta;     // element of F with (x) = a beta O_K
  int attempts = 0;
};

struct H1Comparison {
  CohomologyGroup h1;
  FGAbHom theta;  // Ker j -> H^1(Delta, U_K)
  FGAbHom omega;  // H^1(Delta, U_K) -> Ker j via the resolvent
  std::vector<ResolventCertificate> certificates;
  bool orders_equal = false;
  bool bijective = false;
};
H1Comparison h1_units_and_comparison(const CoveringDatum& cov, const GModule& units, const CapitulationKernel& kj,
                                     std::mt19937_64& rng, int max_attempts = 32);

FGAbHom map2_inclusion(const CoveringDatum& cov, const MuN& mu, const GModule& units, const H1Comparison& cmp);

// Sign convention of the snake and transgression maps.
enum class Convention { Direct, Inverse };

struct SnakeWitness {
  FieldElement x, alpha, u;
};
// u = x^n / alpha (Direct) or alpha / x^n (Inverse)
FieldElement snake_unit(const CoveringDatum& cov, const FieldElement& x, const FieldElement& alpha, Convention c);
FGAbHom map3_snake(const CoveringDatum& cov, const CapitulationKernel& kj, const PsiData& psi, Convention c,
                   std::vector<SnakeWitness>* witnesses = nullptr);

// b_delta with b_delta^n = delta(u)/u and b_identity = 1
std::vector<FieldElement> transgression_witnesses(const CoveringDatum& cov, const FieldElement& u);
Cochain transgression_cocycle(const CoveringDatum& cov, const MuN& mu, const std::vector<FieldElement>& b,
                              Convention c);
FGAbHom map4_transgression(const CoveringDatum& cov, const PsiData& psi, const MuN& mu,
                           const CohomologyGroup& h2mu, Convention c);

struct RescoresEntry {
  std::string prime;
  bool ideal_identity = false;  // N(P O_K) = P^n exactly
  bool class_identity = false;  // dlog N(P O_K) = n dlog P
};
std::vector<RescoresEntry> rescores_check(const CoveringDatum& cov);

struct NormUnitEntry {
  std::string unit;
  bool holds = false;
};
// prod_delta delta(u) = u^n for the unit generators of F
std::vector<NormUnitEntry> norm_unit_check(const CoveringDatum& cov);

struct FuzzResult {
  std::size_t trials = 0;
  std::size_t stable = 0;
  bool passed() const { return trials == stable; }
};
FuzzResult fuzz_map3(const CoveringDatum& cov, const CapitulationKernel& kj, const PsiData& psi, Convention c,
                     std::mt19937_64& rng, int rounds = 20);
FuzzResult fuzz_map4(const CoveringDatum& cov, const PsiData& psi, const MuN& mu, const CohomologyGroup& h2mu,
                     Convention c, std::mt19937_64& rng, int rounds = 20);

struct SequenceReport {
  std::uint64_t seed = 0;
  int n = 0;
  std::array<FGAbGroup, 5> terms;
  std::array<FGAbHom, 4> maps;
  std::array<std::string, 5> term_names;
  std::array<std::string, 4> map_names;
  CapitulationKernel kernel;
  PsiData psi;
  Term1 t1;
  H1Comparison comparison;
  std::vector<SnakeWitness> snake_witnesses;
  Convention convention = Convention::Direct;
  bool inverse_tried = false;
  std::vector<NodeVerdict> verdicts;  // nodes term1 .. term4
  std::array<bool, 5> killed_by_n{};
  bool exact = false;
  bool corollary_applies = false;
  bool corollary_isomorphism = false;
  bool corollary_bound = false;
  std::vector<RescoresEntry> rescores;
  std::vector<NormUnitEntry> norm_units;
  FuzzResult fuzz3, fuzz4;
  mpfr_prec_t precision_used = 0;
  std::string hasse_principle = "open: not computed";
  // every check that must hold for the run to count as verified
  bool all_verified() const;
};
SequenceReport verify_sequence(const CoveringDatum& cov, std::uint64_t seed);

}  // namespace capk
