#include "capk/nfield/poly.hpp"

#include <algorithm>
#include <random>

#include "capk/errors.hpp"

namespace capk {

int degree(const QPoly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[i] != 0) return i;
  return -1;
}

QPoly to_q(const ZPoly& f) { return QPoly(f.begin(), f.end()); }

QPoly poly_trim(QPoly f) {
  f.resize(std::max(degree(f), -1) + 1);
  return f;
}

QPoly poly_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return poly_trim(c);
}

QPoly poly_sub(const QPoly& a, const QPoly& b) {
  QPoly c(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
  return poly_trim(c);
}

QPoly poly_rem(const QPoly& a, const QPoly& m) {
  QPoly r = poly_trim(a);
  int dm = degree(m);
  if (dm < 0) fail(ErrorKind::DivisionByZero, "polynomial remainder by zero");
  while (degree(r) >= dm) {
    int dr = degree(r);
    Rat q = r[dr] / m[dm];
    for (int i = 0; i <= dm; ++i) r[dr - dm + i] -= q * m[i];
    r = poly_trim(r);
  }
  return r;
}

QPoly poly_derivative(const QPoly& f) {
  QPoly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<long>(i));
  return poly_trim(d);
}

namespace {

int sign_at_infinity(const QPoly& p, bool positive) {
  int d = degree(p);
  if (d < 0) return 0;
  int s = sgn(p[d]);
  if (!positive && d % 2) s = -s;
  return s;
}

}  // namespace

int count_real_roots(const ZPoly& f) {
  std::vector<QPoly> seq{poly_trim(to_q(f))};
  seq.push_back(poly_derivative(seq[0]));
  while (degree(seq.back()) > 0) {
    QPoly r = poly_rem(seq[seq.size() - 2], seq.back());
    for (auto& c : r) c = -c;
    if (degree(r) < 0) break;
    seq.push_back(r);
  }
  auto changes = [&](bool positive) {
    int cnt = 0, last = 0;
    for (auto& p : seq) {
      int s = sign_at_infinity(p, positive);
      if (s == 0) continue;
      if (last != 0 && s != last) ++cnt;
      last = s;
    }
    return cnt;
  };
  return changes(false) - changes(true);
}

// (-1)^{n(n-1)/2} Res(f, f') / lc(f), with the resultant taken by Euclid over Q.
Int poly_discriminant(const ZPoly& f) {
  QPoly a = poly_trim(to_q(f)), b = poly_derivative(a);
  int n = degree(a);
  // Res(a, b) by Euclid over Q.
  Rat res = 1;
  QPoly x = a, y = b;
  while (degree(y) > 0) {
    int dx = degree(x), dy = degree(y);
    QPoly r = poly_rem(x, y);
    int dr = degree(r);
    if (dr < 0) return 0;
    // Res(x, y) = (-1)^{dx dy} lc(y)^{dx - dr} Res(y, r)
    Rat lc = y[dy];
    Rat factor = 1;
    for (int i = 0; i < dx - dr; ++i) factor *= lc;
    if ((dx * dy) % 2) factor = -factor;
    res *= factor;
    x = y;
    y = r;
  }
  if (degree(y) < 0) return 0;
  // Res(x, c) = c^{deg x}
  Rat c = y[0];
  for (int i = 0; i < degree(x); ++i) res *= c;
  Rat lead = a[n];
  Rat disc = res / lead;
  if ((n * (n - 1) / 2) % 2) disc = -disc;
  if (disc.get_den() != 1) fail(ErrorKind::InvalidArgument, "non-integral discriminant");
  return disc.get_num();
}

std::uint64_t Fp::pow(std::uint64_t a, std::uint64_t e) const {
  std::uint64_t r = 1 % p_;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t Fp::from(const Int& x) const {
  Int r;
  Int pp(static_cast<unsigned long>(p_));
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t());
  return r.get_ui();
}

ModPoly Fp::reduce(const ZPoly& f) const {
  ModPoly r;
  for (auto& c : f) r.push_back(from(c));
  return trim(r);
}

int degree(const ModPoly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[i] != 0) return i;
  return -1;
}

ModPoly Fp::trim(ModPoly f) const {
  f.resize(degree(f) + 1);
  return f;
}

ModPoly Fp::add(const ModPoly& a, const ModPoly& b) const {
  ModPoly c(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  return trim(c);
}

ModPoly Fp::sub(const ModPoly& a, const ModPoly& b) const {
  ModPoly c(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  return trim(c);
}

ModPoly Fp::mul(const ModPoly& a, const ModPoly& b) const {
  if (a.empty() || b.empty()) return {};
  ModPoly c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = add(c[i + j], mul(a[i], b[j]));
  return trim(c);
}

std::pair<ModPoly, ModPoly> Fp::divrem(const ModPoly& a, const ModPoly& b) const {
  int db = degree(b);
  if (db < 0) fail(ErrorKind::DivisionByZero, "polynomial division by zero mod p");
  ModPoly r = trim(a);
  ModPoly q(std::max(degree(r) - db + 1, 0));
  std::uint64_t li = inv(b[db]);
  while (degree(r) >= db) {
    int dr = degree(r);
    std::uint64_t c = mul(r[dr], li);
    q[dr - db] = c;
    for (int i = 0; i <= db; ++i) r[dr - db + i] = sub(r[dr - db + i], mul(c, b[i]));
    r = trim(r);
  }
  return {trim(q), r};
}

ModPoly Fp::gcd(ModPoly a, ModPoly b) const {
  a = trim(a);
  b = trim(b);
  while (!b.empty()) {
    ModPoly r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.empty() ? a : monic(a);
}

ModPoly Fp::monic(const ModPoly& a) const {
  ModPoly r = trim(a);
  if (r.empty()) return r;
  std::uint64_t li = inv(r.back());
  for (auto& c : r) c = mul(c, li);
  return r;
}

ModPoly Fp::powmod(const ModPoly& a, const Int& e, const ModPoly& m) const {
  ModPoly result{1 % p_}, base = rem(a, m);
  result = rem(result, m);
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = rem(mul(result, result), m);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = rem(mul(result, base), m);
  }
  return result;
}

ModPoly Fp::derivative(const ModPoly& a) const {
  ModPoly d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(mul(a[i], i % p_));
  return trim(d);
}

namespace {

void squarefree(const Fp& F, const ModPoly& f, int mult, std::vector<std::pair<ModPoly, int>>& out) {
  if (degree(f) <= 0) return;
  ModPoly c = F.gcd(f, F.derivative(f));
  ModPoly w = F.divrem(f, c).first;
  int i = 1;
  while (degree(w) > 0) {
    ModPoly y = F.gcd(w, c);
    ModPoly z = F.divrem(w, y).first;
    if (degree(z) > 0) out.push_back({F.monic(z), i * mult});
    ++i;
    w = y;
    c = F.divrem(c, y).first;
  }
  if (degree(c) > 0) {
    // c is a polynomial in x^p
    ModPoly root;
    for (std::size_t k = 0; k < c.size(); k += F.p()) root.push_back(c[k]);
    squarefree(F, root, mult * static_cast<int>(F.p()), out);
  }
}

void equal_degree(const Fp& F, const ModPoly& g, int d, std::mt19937_64& rng, std::vector<ModPoly>& out) {
  int n = degree(g);
  if (n == d) {
    out.push_back(F.monic(g));
    return;
  }
  std::uniform_int_distribution<std::uint64_t> coef(0, F.p() - 1);
  for (;;) {
    ModPoly a(n);
    for (auto& c : a) c = coef(rng);
    a = F.trim(a);
    if (degree(a) <= 0) continue;
    ModPoly b;
    if (F.p() == 2) {
      ModPoly t = a, s = a;
      for (int i = 1; i < d; ++i) {
        t = F.rem(F.mul(t, t), g);
        s = F.add(s, t);
      }
      b = s;
    } else {
      Int pd = 1;
      for (int i = 0; i < d; ++i) pd *= Int(static_cast<unsigned long>(F.p()));
      b = F.sub(F.powmod(a, (pd - 1) / 2, g), ModPoly{1});
    }
    ModPoly h = F.gcd(g, b);
    if (degree(h) > 0 && degree(h) < n) {
      equal_degree(F, h, d, rng, out);
      equal_degree(F, F.divrem(g, h).first, d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<ModPoly, int>> factor_mod_p(const ZPoly& f, std::uint64_t p) {
  Fp F(p);
  ModPoly g = F.reduce(f);
  require(degree(g) >= 0, ErrorKind::InvalidArgument, "polynomial vanishes mod p");
  std::vector<std::pair<ModPoly, int>> sqf, out;
  squarefree(F, F.monic(g), 1, sqf);
  std::mt19937_64 rng(p * 1000003ULL + 17);
  for (auto& [h, e] : sqf) {
    ModPoly rest = h, xp{0, 1};
    ModPoly x{0, 1};
    for (int d = 1; 2 * d <= degree(rest); ++d) {
      xp = F.powmod(xp, Int(static_cast<unsigned long>(p)), rest);
      ModPoly gd = F.gcd(rest, F.sub(xp, x));
      if (degree(gd) > 0) {
        std::vector<ModPoly> parts;
        equal_degree(F, gd, d, rng, parts);
        for (auto& q : parts) out.push_back({q, e});
        rest = F.divrem(rest, gd).first;
        xp = F.rem(xp, rest);
      }
    }
    if (degree(rest) > 0) out.push_back({F.monic(rest), e});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (degree(a.first) != degree(b.first)) return degree(a.first) < degree(b.first);
    return std::lexicographical_compare(a.first.rbegin(), a.first.rend(), b.first.rbegin(), b.first.rend());
  });
  return out;
}

}  // namespace capk
