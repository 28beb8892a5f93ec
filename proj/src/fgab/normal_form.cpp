#include "capk/fgab/normal_form.hpp"

#include <algorithm>

#include "capk/errors.hpp"

namespace capk {

namespace {

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Entry with minimal nonzero absolute value in rows/cols >= t.
bool find_min_entry(const IntMatrix& d, std::size_t t, std::size_t& pi, std::size_t& pj) {
  bool found = false;
  Int best;
  for (std::size_t i = t; i < d.rows(); ++i)
    for (std::size_t j = t; j < d.cols(); ++j) {
      if (d(i, j) == 0) continue;
      Int a = abs(d(i, j));
      if (!found || a < best) {
        best = a;
        pi = i;
        pj = j;
        found = true;
      }
    }
  return found;
}

}  // namespace

void check_entry_size(const IntMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (mpz_sizeinbase(m(i, j).get_mpz_t(), 2) > kMaxEntryBits)
        fail(ErrorKind::InternalOverflow, "matrix entry exceeds size limit");
}

SmithForm smith_normal_form(const IntMatrix& m) {
  SmithForm s{IntMatrix::identity(m.rows()), m, IntMatrix::identity(m.cols())};
  IntMatrix& d = s.D;
  std::size_t lim = std::min(d.rows(), d.cols());
  for (std::size_t t = 0; t < lim; ++t) {
    for (;;) {
      std::size_t pi = 0, pj = 0;
      if (!find_min_entry(d, t, pi, pj)) return s;
      d.swap_rows(t, pi);
      s.U.swap_rows(t, pi);
      d.swap_cols(t, pj);
      s.V.swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < d.rows(); ++i) {
        if (d(i, t) == 0) continue;
        Int q = floor_div(d(i, t), d(t, t));
        d.add_row(i, t, -q);
        s.U.add_row(i, t, -q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < d.cols(); ++j) {
        if (d(t, j) == 0) continue;
        Int q = floor_div(d(t, j), d(t, t));
        d.add_col(j, t, -q);
        s.V.add_col(j, t, -q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // Pivot must divide the remaining block.
      bool divides = true;
      for (std::size_t i = t + 1; i < d.rows() && divides; ++i)
        for (std::size_t j = t + 1; j < d.cols(); ++j)
          if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
            d.add_row(t, i, 1);
            s.U.add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (d(t, t) < 0) {
      d.negate_row(t);
      s.U.negate_row(t);
    }
    check_entry_size(d);
  }
  return s;
}

HermiteForm hermite_form(const IntMatrix& a, bool with_transform) {
  HermiteForm h;
  h.H = a;
  if (with_transform) h.T = IntMatrix::identity(a.rows());
  IntMatrix& H = h.H;
  std::size_t r = 0;
  for (std::size_t c = 0; c < H.cols() && r < H.rows(); ++c) {
    for (;;) {
      std::size_t best = H.rows();
      for (std::size_t i = r; i < H.rows(); ++i)
        if (H(i, c) != 0 && (best == H.rows() || abs(H(i, c)) < abs(H(best, c)))) best = i;
      if (best == H.rows()) break;
      H.swap_rows(r, best);
      if (with_transform) h.T.swap_rows(r, best);
      bool done = true;
      for (std::size_t i = r + 1; i < H.rows(); ++i) {
        if (H(i, c) == 0) continue;
        Int q = floor_div(H(i, c), H(r, c));
        H.add_row(i, r, -q);
        if (with_transform) h.T.add_row(i, r, -q);
        if (H(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (H(r, c) == 0) continue;
    if (H(r, c) < 0) {
      H.negate_row(r);
      if (with_transform) h.T.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Int q = floor_div(H(i, c), H(r, c));
      H.add_row(i, r, -q);
      if (with_transform) h.T.add_row(i, r, -q);
    }
    h.pivots.push_back(c);
    ++r;
    check_entry_size(H);
  }
  h.rank = r;
  return h;
}

IntMatrix lattice_basis(const IntMatrix& a) {
  HermiteForm h = hermite_form(a, false);
  return h.H.top_rows(h.rank);
}

namespace {

std::size_t pivot_of(const IntMatrix& basis, std::size_t k) {
  std::size_t c = 0;
  while (basis(k, c) == 0) ++c;
  return c;
}

}  // namespace

IntVec lattice_reduce(const IntMatrix& basis, IntVec x) {
  for (std::size_t k = 0; k < basis.rows(); ++k) {
    std::size_t c = pivot_of(basis, k);
    if (x[c] == 0) continue;
    Int q = floor_div(x[c], basis(k, c));
    if (q == 0) continue;
    for (std::size_t j = c; j < x.size(); ++j) x[j] -= q * basis(k, j);
  }
  return x;
}

bool lattice_contains(const IntMatrix& basis, const IntVec& x) { return is_zero(lattice_reduce(basis, x)); }

std::optional<IntVec> solve_left(const IntMatrix& a, const IntVec& b) {
  HermiteForm h = hermite_form(a, true);
  IntVec rem = b;
  IntVec coef(a.rows());
  for (std::size_t k = 0; k < h.rank; ++k) {
    std::size_t c = h.pivots[k];
    if (rem[c] == 0) continue;
    if (!mpz_divisible_p(rem[c].get_mpz_t(), h.H(k, c).get_mpz_t())) return std::nullopt;
    Int q = rem[c] / h.H(k, c);
    for (std::size_t j = c; j < rem.size(); ++j) rem[j] -= q * h.H(k, j);
    for (std::size_t j = 0; j < a.rows(); ++j) coef[j] += q * h.T(k, j);
  }
  if (!is_zero(rem)) return std::nullopt;
  return coef;
}

IntMatrix left_kernel(const IntMatrix& a) {
  HermiteForm h = hermite_form(a, true);
  return h.T.block(h.rank, 0, a.rows() - h.rank, a.rows());
}

}  // namespace capk
