#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "capk/cohom/gmodule.hpp"

namespace capk {

// Values stored as consecutive blocks, one per tuple in Delta^degree
// (lexicographic, first entry most significant).
struct Cochain {
  int degree = 0;
  IntVec values;
};

std::size_t tuple_index(const std::vector<int>& t, int n);
std::vector<int> tuple_at(std::size_t idx, int len, int n);
IntVec cochain_value(const GModule& m, const Cochain& c, const std::vector<int>& t);

FGAbGroup cochain_group(const GModule& m, int degree);
IntMatrix bar_differential_matrix(const GModule& m, int degree);
Cochain bar_differential(const GModule& m, const Cochain& c);

// H^i of a complex ... -> C^{i-1} -> C^i -> C^{i+1}, presented on a basis of cocycles.
struct CohomologyGroup {
  int degree = 0;
  FGAbGroup cochains;
  Subgroup cocycles;
  FGAbGroup group;

  bool is_cocycle(const IntVec& c) const { return cocycles.contains(c); }
  // Class of a cocycle; nullopt when c is not a cocycle.
  std::optional<ElementCoords> class_of(const IntVec& c) const;
  IntVec representative(const IntVec& h) const;
};

CohomologyGroup complex_cohomology(int degree, const FGAbGroup& ci, const FGAbGroup& cnext,
                                   const IntMatrix& d_prev, const IntMatrix& d_i);

CohomologyGroup cohomology(const GModule& m, int degree);

struct CohomologyClass {
  int degree = 0;
  Cochain representative;
  ElementCoords coords;
};
CohomologyClass class_of(const CohomologyGroup& h, const Cochain& c);

// phi: underlying(M) -> underlying(N). Throws NotEquivariant.
FGAbHom induced_cohomology_map(const FGAbHom& phi, const GModule& m, const GModule& n, int degree);
FGAbHom induced_cohomology_map(const FGAbHom& phi, const CohomologyGroup& hm, const CohomologyGroup& hn,
                               int num_cochain_blocks);
void check_equivariant(const FGAbHom& phi, const GModule& m, const GModule& n);

// Split Cech complex of a Galois covering with group Delta; sections of X^{i+1}
// live on Delta^i.
IntMatrix cech_differential_matrix(const GModule& m, int degree);

struct CechComparison {
  std::array<CohomologyGroup, 3> cech;
  std::array<CohomologyGroup, 3> bar;
  std::array<FGAbHom, 3> comparison;  // Cech -> bar
  std::array<IntMatrix, 4> bar_to_cech, cech_to_bar;
  bool chain_maps_commute = false;
  bool equalizer_is_invariants = false;
  bool isomorphisms() const;
};
CechComparison cech_complex_split(const GModule& m);

struct TorsionCompatibility {
  Subgroup from_torsion_module;  // H^0 of M_n, inside M
  Subgroup torsion_of_h0;        // (H^0 M)_n, inside M
  bool equal = false;
};
TorsionCompatibility torsion_compatibility_check(const GModule& m, const Int& n);

std::string dump_cocycle(const GModule& m, const Cochain& c);

}  // namespace capk
