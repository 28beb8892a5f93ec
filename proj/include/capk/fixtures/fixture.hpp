#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "capk/capitulation/covering.hpp"

namespace capk {

inline constexpr int kFixtureFormatVersion = 1;

struct FieldBlock {
  std::string label;
  ZPoly polynomial;
  RatMatrix basis;
  std::optional<Int> discriminant;
  std::optional<std::pair<int, int>> signature;
  bool operator==(const FieldBlock&) const = default;
};

// P = (p, gen), gen in integral-basis coordinates
struct PrimeEntry {
  Int p;
  RatVec gen;
  bool operator==(const PrimeEntry&) const = default;
};

struct RelationEntry {
  IntVec exponents;
  RatVec witness;
  bool operator==(const RelationEntry&) const = default;
};

struct ClassGroupBlock {
  std::vector<PrimeEntry> primes;
  std::vector<RelationEntry> relations;
  bool operator==(const ClassGroupBlock&) const = default;
};

struct UnitsBlock {
  RatVec torsion;
  long torsion_order = 1;
  std::vector<RatVec> free;
  bool operator==(const UnitsBlock&) const = default;
};

struct SigmaBlock {
  std::vector<PrimeEntry> primes;  // finite primes of F
  std::string archimedean = "all";
  std::string infinite_ramification = "none";
  bool operator==(const SigmaBlock&) const = default;
};

struct Expectations {
  std::optional<std::vector<Int>> term_orders;
  std::optional<std::vector<Int>> kernel_invariants;
  std::optional<Int> class_number_F, class_number_K;
  std::optional<long> torsion_order_K, unit_rank_K;
  bool operator==(const Expectations&) const = default;
};

struct FixtureFile {
  int format_version = kFixtureFormatVersion;
  std::string name;
  std::uint64_t seed = 0;
  FieldBlock F, K;
  RatVec embedding;
  int galois_order = 0;
  std::vector<std::vector<int>> table;
  std::vector<RatVec> automorphisms;
  SigmaBlock sigma;
  ClassGroupBlock classgroup_F, classgroup_K;
  UnitsBlock units_F, units_K;
  Expectations expectations;
  bool operator==(const FixtureFile&) const = default;
};

// ParseError messages carry "source:line:column".
FixtureFile parse_fixture(const std::string& text, const std::string& source = "<input>");
FixtureFile load_fixture(const std::string& path);
std::string serialize_fixture(const FixtureFile& f);

FieldElement element_from(const RatVec& coords);
// Builds fields and primes; construction failures are ValidationError-class errors.
CoveringInput covering_input(const FixtureFile& f);

struct LoadedFixture {
  FixtureFile file;
  CoveringDatum datum;
};
LoadedFixture parse_and_validate(const std::string& path, const CoveringOptions& opt = {});

}  // namespace capk
