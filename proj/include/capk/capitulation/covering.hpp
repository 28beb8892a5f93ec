#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "capk/classunits/class_group.hpp"
#include "capk/classunits/units.hpp"
#include "capk/cohom/finite_group.hpp"
#include "capk/nfield/maps.hpp"

namespace capk {

struct FieldInput {
  std::shared_ptr<const NumberField> field;
  std::vector<PrimeIdeal> factor_base;
  IntMatrix relations;
  std::vector<FieldElement> witnesses;
  FieldElement torsion;
  long torsion_order = 1;
  std::vector<FieldElement> free_units;
};

struct CoveringInput {
  FieldInput F, K;
  FieldElement embedding_image;
  std::vector<std::vector<int>> table;
  std::vector<FieldElement> automorphisms;
  std::vector<PrimeIdeal> sigma_F;
  bool archimedean_all = true;
  std::string infinite_ramification = "none";  // declared: "none" or "real"
};

struct CoveringOptions {
  SaturationOptions saturation;
  UnitOptions units;
};

struct CheckRecord {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct FieldData {
  std::shared_ptr<const NumberField> field;
  std::vector<PrimeIdeal> sigma;
  std::shared_ptr<const ClassGroupData> classes;
  std::shared_ptr<const SUnitLattice> units;
  SaturationReport saturation;
};

class CoveringDatum {
 public:
  const FieldData& F() const { return F_; }
  const FieldData& K() const { return K_; }
  const NumberField& base() const { return *F_.field; }
  const NumberField& top() const { return *K_.field; }
  const FieldEmbedding& embedding() const { return emb_; }
  const FiniteGroup& delta() const { return delta_; }
  const std::vector<FieldAutomorphism>& automorphisms() const { return autos_; }
  int degree() const { return n_; }
  const std::vector<Int>& ramified_rational_primes() const { return ramified_; }
  const std::string& infinite_ramification() const { return inf_ram_; }
  const std::vector<CheckRecord>& checks() const { return checks_; }

  FieldElement embed(const FieldElement& x) const { return emb_.apply(x); }
  IdealHNF extend(const IdealHNF& a) const { return emb_.extend(top(), a); }
  // Preimage of a Delta-invariant element of K; nullopt when it is not in F.
  std::optional<FieldElement> descend(const FieldElement& x) const;
  // Relative norm computed prime by prime; NotSmooth when A does not factor.
  IdealHNF norm_to_base(const IdealHNF& A) const;

  friend CoveringDatum validate_covering(const CoveringInput& in, const CoveringOptions& opt,
                                         std::vector<CheckRecord>* log);

 private:
  FieldData F_, K_;
  FieldEmbedding emb_;
  FiniteGroup delta_;
  std::vector<FieldAutomorphism> autos_;
  int n_ = 0;
  std::vector<Int> ramified_;
  std::string inf_ram_;
  std::vector<CheckRecord> checks_;
  // For each prime of K's factor base followed by sigma: index into F's factor base
  // followed by sigma, and the relative residue degree.
  std::vector<std::pair<std::size_t, int>> below_;
};

// Runs every certificate check. Failures are collected; a single failure is rethrown
// with its own kind, several are joined into one ValidationError. The check log is
// copied to *log whether or not validation succeeds.
CoveringDatum validate_covering(const CoveringInput& in, const CoveringOptions& opt = {},
                                std::vector<CheckRecord>* log = nullptr);

// All primes of K above p, from the known list when it is complete, else Kummer-Dedekind.
std::vector<PrimeIdeal> primes_above(const NumberField& K, const Int& p, const std::vector<PrimeIdeal>& known);

}  // namespace capk
