#pragma once

#include <optional>
#include <vector>

#include "capk/matrix.hpp"

namespace capk {

struct SmithForm {
  IntMatrix U, D, V;  // U * M * V = D
};

// Pivot: minimal nonzero |entry|, ties broken row-major.
SmithForm smith_normal_form(const IntMatrix& m);

// Row-style Hermite form: T * A = H, nonzero rows first, positive pivots,
// entries above a pivot reduced into [0, pivot).
struct HermiteForm {
  IntMatrix H;
  IntMatrix T;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

HermiteForm hermite_form(const IntMatrix& a, bool with_transform = true);

// Nonzero rows of the Hermite form.
IntMatrix lattice_basis(const IntMatrix& a);

// Canonical representative of x modulo the lattice spanned by an echelon basis.
IntVec lattice_reduce(const IntMatrix& basis, IntVec x);
bool lattice_contains(const IntMatrix& basis, const IntVec& x);

// c with c * a = b, if one exists.
std::optional<IntVec> solve_left(const IntMatrix& a, const IntVec& b);
// Basis (rows) of { x : x * a = 0 }.
IntMatrix left_kernel(const IntMatrix& a);

void check_entry_size(const IntMatrix& m);

}  // namespace capk
