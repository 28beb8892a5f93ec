#include "capk/nfield/number_field.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "capk/errors.hpp"

namespace capk {

FieldElement::FieldElement(IntVec n, Int d) : num(std::move(n)), den(std::move(d)) {
  if (den == 0) fail(ErrorKind::DivisionByZero, "zero denominator");
  if (den < 0) {
    den = -den;
    for (auto& x : num) x = -x;
  }
  Int g = den;
  for (auto& x : num) g = gcd(g, x);
  if (g != 1) {
    for (auto& x : num) x /= g;
    den /= g;
  }
}

bool FieldElement::operator<(const FieldElement& o) const {
  if (den != o.den) return den < o.den;
  return num < o.num;
}

std::string FieldElement::str() const {
  std::string s = vec_str(num);
  if (den != 1) s += "/" + den.get_str();
  return s;
}

namespace {

Rat lcm_den(const RatVec& v, Int& l) {
  l = 1;
  for (auto& q : v) l = lcm(l, Int(q.get_den()));
  return l;
}

FieldElement from_rat_vec(const RatVec& v) {
  Int l;
  lcm_den(v, l);
  IntVec n;
  for (auto& q : v) n.push_back(Int(q * l));
  return FieldElement(n, l);
}

std::vector<int> small_primes(int count) {
  std::vector<int> ps;
  for (int n = 2; static_cast<int>(ps.size()) < count; ++n) {
    bool pr = true;
    for (int p : ps)
      if (n % p == 0) {
        pr = false;
        break;
      }
    if (pr) ps.push_back(n);
  }
  return ps;
}

}  // namespace

bool is_irreducible(const ZPoly& f0) {
  ZPoly f = f0;
  while (!f.empty() && f.back() == 0) f.pop_back();
  int d = static_cast<int>(f.size()) - 1;
  if (d <= 0) return false;
  if (d == 1) return true;
  std::set<int> possible;
  for (int k = 1; k < d; ++k) possible.insert(k);
  for (int p : small_primes(60)) {
    Fp F(p);
    ModPoly g = F.reduce(f);
    if (degree(g) != d) continue;
    if (degree(F.gcd(g, F.derivative(g))) > 0) continue;
    std::set<int> sums{0};
    for (auto& [h, e] : factor_mod_p(f, p)) {
      std::set<int> next = sums;
      for (int s : sums) next.insert(s + degree(h));
      sums = next;
    }
    std::set<int> keep;
    for (int k : possible)
      if (sums.count(k)) keep.insert(k);
    possible = keep;
    if (possible.empty()) return true;
  }
  // Candidate factor degrees survive; test every root subset of size k <= d/2 exactly.
  if (degree(poly_trim(to_q(f))) != d || f.back() != 1) fail(ErrorKind::ValidationError, "polynomial is not monic");
  for (mpfr_prec_t prec = 128; prec <= 4096; prec *= 2) {
    RootEnclosures re;
    try {
      re = isolate_roots(f, prec);
    } catch (const Error&) {
      continue;
    }
    bool ambiguous = false;
    for (int k : possible) {
      if (2 * k > d) continue;
      std::vector<bool> sel(d, false);
      std::fill(sel.end() - k, sel.end(), true);
      do {
        std::vector<ComplexInterval> coef{ComplexInterval(Interval(Rat(1), prec), Interval(prec))};
        for (int i = 0; i < d; ++i) {
          if (!sel[i]) continue;
          std::vector<ComplexInterval> next(coef.size() + 1, ComplexInterval(prec));
          for (std::size_t j = 0; j < coef.size(); ++j) {
            next[j + 1] = next[j + 1] + coef[j];
            next[j] = next[j] - coef[j] * re.all[i];
          }
          coef = next;
        }
        ZPoly g;
        bool candidate = true;
        for (auto& c : coef) {
          auto ints = c.re.integers_inside(2);
          if (ints.empty() || !c.im.contains_zero()) {
            candidate = false;
            break;
          }
          if (ints.size() > 1) {
            ambiguous = true;
            candidate = false;
            break;
          }
          g.push_back(ints[0]);
        }
        if (candidate && degree(poly_rem(to_q(f), to_q(g))) < 0) return false;
      } while (std::next_permutation(sel.begin(), sel.end()));
    }
    if (!ambiguous) return true;
  }
  fail(ErrorKind::RecoveryFailure, "irreducibility test did not resolve");
}

NumberField::NumberField(std::string label, ZPoly f, RatMatrix basis, std::optional<Int> claimed_disc,
                         std::optional<std::pair<int, int>> claimed_signature)
    : label_(std::move(label)), f_(std::move(f)), B_(std::move(basis)) {
  while (!f_.empty() && f_.back() == 0) f_.pop_back();
  d_ = static_cast<int>(f_.size()) - 1;
  auto bad = [&](const std::string& why) { fail(ErrorKind::ValidationError, "field " + label_ + ": " + why); };
  if (d_ < 1) bad("defining polynomial has degree < 1");
  if (f_.back() != 1) bad("defining polynomial is not monic");
  if (B_.rows() != static_cast<std::size_t>(d_) || B_.cols() != static_cast<std::size_t>(d_))
    bad("integral basis must be " + std::to_string(d_) + "x" + std::to_string(d_));
  if (determinant(B_) == 0) bad("integral basis is singular");
  Binv_ = inverse(B_);
  if (!is_irreducible(f_)) bad("defining polynomial is reducible");

  // One must lie in the lattice, and Z[theta] inside it (the index is then an integer).
  RatVec e0(d_);
  e0[0] = 1;
  FieldElement o = from_power_basis(e0);
  if (!o.is_integral()) bad("1 is not in the span of the basis");
  one_ = o.num;
  Rat idx = 1 / determinant(B_);
  if (idx < 0) idx = -idx;
  for (int k = 0; k < d_; ++k) {
    RatVec ek(d_);
    ek[k] = 1;
    if (!from_power_basis(ek).is_integral()) bad("theta^" + std::to_string(k) + " is not integral over the basis");
  }
  if (idx.get_den() != 1) bad("basis does not contain Z[theta]");
  index_ = idx.get_num();

  QPoly fq = to_q(f_);
  mult_.assign(d_, IntMatrix(d_, d_));
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) {
      QPoly prod = poly_rem(poly_mul(poly_trim(B_.row(i)), poly_trim(B_.row(j))), fq);
      prod.resize(d_);
      FieldElement c = from_power_basis(prod);
      if (!c.is_integral()) bad("basis is not closed under multiplication");
      mult_[i].set_row(j, c.num);
    }
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) {
      if (mult_[i].row(j) != mult_[j].row(i)) bad("multiplication table is not commutative");
      for (int k = 0; k < d_; ++k)
        if (mul_int(mult_[i].row(j), unit_vec(d_, k)) != mul_int(unit_vec(d_, i), mult_[j].row(k)))
          bad("multiplication table is not associative");
    }

  IntVec tr(d_);
  for (int k = 0; k < d_; ++k)
    for (int j = 0; j < d_; ++j) tr[k] += mult_[k](j, j);
  IntMatrix tform(d_, d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j)
      for (int k = 0; k < d_; ++k) tform(i, j) += mult_[i](j, k) * tr[k];
  disc_ = determinant(tform);
  if (poly_discriminant(f_) != disc_ * index_ * index_) bad("discriminant does not match the index");
  if (claimed_disc && *claimed_disc != disc_)
    bad("claimed discriminant " + claimed_disc->get_str() + " but the basis gives " + disc_.get_str());
  r1_ = count_real_roots(f_);
  r2_ = (d_ - r1_) / 2;
  if (claimed_signature && (claimed_signature->first != r1_ || claimed_signature->second != r2_))
    bad("claimed signature (" + std::to_string(claimed_signature->first) + "," +
        std::to_string(claimed_signature->second) + ") but f has " + std::to_string(r1_) + " real roots");
}

FieldElement NumberField::theta() const {
  RatVec v(d_);
  if (d_ > 1) v[1] = 1;
  else v[0] = -Rat(f_[0]);
  return from_power_basis(v);
}

FieldElement NumberField::from_power_basis(const RatVec& v) const { return from_rat_vec(vec_mul(v, Binv_)); }

RatVec NumberField::to_power_basis(const FieldElement& x) const {
  RatVec n(x.num.begin(), x.num.end());
  RatVec r = vec_mul(n, B_);
  for (auto& q : r) q /= x.den;
  return r;
}

FieldElement NumberField::eval(const QPoly& g, const FieldElement& x) const {
  FieldElement acc = zero();
  for (std::size_t k = g.size(); k-- > 0;) acc = add(mul(acc, x), from_rat(g[k]));
  return acc;
}

FieldElement NumberField::add(const FieldElement& a, const FieldElement& b) const {
  Int l = lcm(a.den, b.den);
  return FieldElement(capk::add(capk::scale(a.num, l / a.den), capk::scale(b.num, l / b.den)), l);
}

FieldElement NumberField::sub(const FieldElement& a, const FieldElement& b) const { return add(a, neg(b)); }

FieldElement NumberField::neg(const FieldElement& a) const { return FieldElement(capk::scale(a.num, -1), a.den); }

IntVec NumberField::mul_int(const IntVec& a, const IntVec& b) const {
  IntVec r(d_);
  for (int i = 0; i < d_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < d_; ++j) {
      if (b[j] == 0) continue;
      Int c = a[i] * b[j];
      const IntMatrix& m = mult_[i];
      for (int k = 0; k < d_; ++k)
        if (m(j, k) != 0) r[k] += c * m(j, k);
    }
  }
  return r;
}

FieldElement NumberField::mul(const FieldElement& a, const FieldElement& b) const {
  return FieldElement(mul_int(a.num, b.num), a.den * b.den);
}

IntMatrix NumberField::regular_matrix(const IntVec& x) const {
  IntMatrix m(d_, d_);
  for (int i = 0; i < d_; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < d_; ++j)
      for (int k = 0; k < d_; ++k) m(j, k) += x[i] * mult_[i](j, k);
  }
  return m;
}

FieldElement NumberField::inv(const FieldElement& a) const {
  if (a.is_zero()) fail(ErrorKind::DivisionByZero, "inverse of zero in " + label_);
  RatMatrix m = to_rat(regular_matrix(a.num));
  RatVec o(one_.begin(), one_.end());
  RatVec y = vec_mul(o, inverse(m));
  for (auto& q : y) q *= a.den;
  return from_rat_vec(y);
}

FieldElement NumberField::pow(const FieldElement& a, long k) const {
  FieldElement base = k < 0 ? inv(a) : a;
  unsigned long e = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  FieldElement r = one();
  while (e) {
    if (e & 1) r = mul(r, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return r;
}

FieldElement NumberField::scale(const FieldElement& a, const Rat& q) const {
  return FieldElement(capk::scale(a.num, q.get_num()), a.den * q.get_den());
}

Rat NumberField::norm(const FieldElement& a) const {
  Rat n = determinant(regular_matrix(a.num));
  for (int i = 0; i < d_; ++i) n /= a.den;
  return n;
}

Rat NumberField::trace(const FieldElement& a) const {
  IntMatrix m = regular_matrix(a.num);
  Int t = 0;
  for (int i = 0; i < d_; ++i) t += m(i, i);
  return Rat(t, a.den);
}

RootEnclosures NumberField::roots(mpfr_prec_t prec) const { return isolate_roots(f_, prec); }

std::string NumberField::power_str(const FieldElement& x) const {
  RatVec v = to_power_basis(x);
  std::string s;
  for (int k = 0; k < d_; ++k) {
    if (v[k] == 0) continue;
    if (!s.empty()) s += " + ";
    s += v[k].get_str();
    if (k) s += "*t^" + std::to_string(k);
  }
  return s.empty() ? "0" : s;
}

}  // namespace capk
