#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "capk/matrix.hpp"

namespace capk {

// Canonical representative modulo the relation lattice.
using ElementCoords = IntVec;

// Z^g / (row span of relations). Canonical data is computed once and shared.
class FGAbGroup {
 public:
  FGAbGroup();  // trivial group on no generators
  FGAbGroup(std::size_t gens, const IntMatrix& relations);

  static FGAbGroup free(std::size_t rank);
  static FGAbGroup cyclic(const Int& order);
  static FGAbGroup from_invariants(const std::vector<Int>& inv, std::size_t rank = 0);

  std::size_t num_generators() const { return d_->gens; }
  const IntMatrix& relations() const { return d_->rels; }
  const IntMatrix& relation_basis() const { return d_->hnf; }
  const std::vector<Int>& invariant_factors() const { return d_->invariants; }
  std::size_t free_rank() const { return d_->free_rank; }
  bool is_finite() const { return d_->free_rank == 0; }
  bool is_trivial() const { return is_finite() && d_->invariants.empty(); }
  Int order() const;  // 0 for infinite groups
  std::string structure() const;

  ElementCoords reduce(const IntVec& x) const;
  bool is_zero(const IntVec& x) const;
  bool equal(const IntVec& a, const IntVec& b) const;
  ElementCoords zero() const { return IntVec(num_generators()); }
  ElementCoords generator(std::size_t i) const;
  Int element_order(const IntVec& x) const;  // 0 when infinite

  // Coordinates against the invariant factors: torsion part reduced mod d_i, then free part.
  IntVec invariant_coords(const IntVec& x) const;
  ElementCoords from_invariant_coords(const IntVec& z) const;
  // Rows: presentation coordinates of the generators realizing the invariant factors.
  IntMatrix invariant_generators() const;

  // Every element, for finite groups; used by enumeration oracles.
  std::vector<ElementCoords> elements() const;

  bool operator==(const FGAbGroup& o) const;
  bool operator!=(const FGAbGroup& o) const { return !(*this == o); }

 private:
  struct Data {
    std::size_t gens = 0;
    IntMatrix rels, hnf;
    IntMatrix V, Vinv;
    std::vector<Int> diag;  // one entry per generator; 0 marks a free direction
    std::vector<Int> invariants;
    std::vector<std::size_t> torsion_pos, free_pos;
    std::size_t free_rank = 0;
  };
  std::shared_ptr<const Data> d_;
};

class FGAbHom {
 public:
  FGAbHom() = default;
  // Rows of m are images of the source generators. Throws IllFormedHom.
  FGAbHom(FGAbGroup source, FGAbGroup target, IntMatrix m);
  static FGAbHom zero(const FGAbGroup& s, const FGAbGroup& t);
  static FGAbHom identity(const FGAbGroup& a);
  static FGAbHom multiplication(const FGAbGroup& a, const Int& n);

  const FGAbGroup& source() const { return src_; }
  const FGAbGroup& target() const { return tgt_; }
  const IntMatrix& matrix() const { return m_; }

  ElementCoords apply(const IntVec& x) const;
  FGAbHom then(const FGAbHom& g) const;  // g after this
  bool is_zero() const;
  bool is_injective() const;
  bool is_surjective() const;
  bool is_isomorphism() const { return is_injective() && is_surjective(); }

 private:
  FGAbGroup src_, tgt_;
  IntMatrix m_;
};

class Subgroup {
 public:
  Subgroup() = default;
  Subgroup(FGAbGroup parent, const IntMatrix& gens);
  static Subgroup whole(const FGAbGroup& a);
  static Subgroup trivial(const FGAbGroup& a);

  const FGAbGroup& parent() const { return parent_; }
  const IntMatrix& generators() const { return gens_; }
  std::size_t num_generators() const { return gens_.rows(); }
  // The subgroup as an abstract group on the stored generators.
  const FGAbGroup& group() const { return group_; }
  FGAbHom inclusion() const;

  bool contains(const IntVec& x) const;
  bool contains(const Subgroup& o) const;
  bool equals(const Subgroup& o) const;
  std::optional<IntVec> express(const IntVec& x) const;
  Int order() const { return group_.order(); }

 private:
  FGAbGroup parent_;
  IntMatrix gens_;
  IntMatrix span_;  // echelon basis of gens + relations
  FGAbGroup group_;
};

struct Quotient {
  FGAbGroup group;
  FGAbHom projection;
};

Subgroup kernel(const FGAbHom& f);
Subgroup image(const FGAbHom& f);
Quotient cokernel(const FGAbHom& f);
Quotient quotient(const Subgroup& s);

struct KernelImageCokernel {
  Subgroup kernel;
  Subgroup image;
  Quotient cokernel;
};
KernelImageCokernel kernel_image_cokernel(const FGAbHom& f);

Subgroup n_torsion(const FGAbGroup& a, const Int& n);
Quotient mod_n(const FGAbGroup& a, const Int& n);

struct InducedMaps {
  Subgroup source_torsion, target_torsion;
  Quotient source_mod, target_mod;
  FGAbHom torsion_map;   // psi_n on the abstract n-torsion groups
  FGAbHom quotient_map;  // psi/n
};
InducedMaps induced_maps(const FGAbHom& psi, const Int& n);

// Image of a subgroup under f, as a subgroup of the target.
Subgroup image_of(const FGAbHom& f, const Subgroup& s);
// Preimage of a subgroup of the target.
Subgroup preimage(const FGAbHom& f, const Subgroup& s);
Subgroup intersect(const Subgroup& a, const Subgroup& b);

struct NodeVerdict {
  std::size_t node = 0;
  bool composition_zero = false;
  bool kernel_equals_image = false;
  bool exact() const { return composition_zero && kernel_equals_image; }
};
// One verdict per interior node of the chain. Throws NotComposable.
std::vector<NodeVerdict> check_exact(const std::vector<FGAbHom>& seq);

std::string dump(const FGAbGroup& a);

}  // namespace capk
