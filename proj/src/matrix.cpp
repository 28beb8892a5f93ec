#include "capk/matrix.hpp"

#include "capk/errors.hpp"

namespace capk {

RatMatrix to_rat(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

IntVec zero_vec(std::size_t n) { return IntVec(n); }

IntVec unit_vec(std::size_t n, std::size_t i) {
  IntVec v(n);
  v[i] = 1;
  return v;
}

IntVec add(const IntVec& a, const IntVec& b) {
  IntVec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

IntVec sub(const IntVec& a, const IntVec& b) {
  IntVec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

IntVec scale(const IntVec& a, const Int& s) {
  IntVec r(a);
  for (auto& x : r) x *= s;
  return r;
}

bool is_zero(const IntVec& v) {
  for (auto& x : v)
    if (x != 0) return false;
  return true;
}

std::string vec_str(const IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].get_str();
  }
  return s + ")";
}

Rat determinant(const RatMatrix& m0) {
  RatMatrix m = m0;
  std::size_t n = m.rows();
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      m.swap_rows(p, c);
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      Rat f = m(i, c) / m(c, c);
      m.add_row(i, c, -f);
    }
  }
  return det;
}

// Bareiss fraction-free elimination.
Int determinant(const IntMatrix& m0) {
  IntMatrix m = m0;
  std::size_t n = m.rows();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(p, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = t;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

RatMatrix inverse(const RatMatrix& m0) {
  std::size_t n = m0.rows();
  RatMatrix m = m0, inv = RatMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) fail(ErrorKind::DivisionByZero, "singular matrix");
    m.swap_rows(p, c);
    inv.swap_rows(p, c);
    Rat piv = m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m(i, c) == 0) continue;
      Rat f = -m(i, c);
      m.add_row(i, c, f);
      inv.add_row(i, c, f);
    }
  }
  return inv;
}

}  // namespace capk
