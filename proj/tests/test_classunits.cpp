#include <random>

#include "capk/classunits/class_group.hpp"
#include "capk/classunits/units.hpp"
#include "capk/errors.hpp"
#include "doctest.h"

using namespace capk;

namespace {

IntVec iv(std::initializer_list<long> xs) {
  IntVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

RatMatrix rm(std::initializer_list<std::initializer_list<long>> rows) { return to_rat(IntMatrix(rows)); }

FieldElement el(std::initializer_list<long> xs, long den = 1) { return FieldElement(iv(xs), den); }

std::shared_ptr<const NumberField> field(std::string label, IntVec f, RatMatrix b) {
  return std::make_shared<const NumberField>(label, f, b);
}

auto qsqrt_m5() { return field("Q(sqrt-5)", iv({5, 0, 1}), rm({{1, 0}, {0, 1}})); }
auto qi() { return field("Q(i)", iv({1, 0, 1}), rm({{1, 0}, {0, 1}})); }

auto qsqrt5() {
  RatMatrix b(2, 2);
  b(0, 0) = 1;
  b(1, 0) = Rat(1, 2);
  b(1, 1) = Rat(1, 2);
  return field("Q(sqrt5)", iv({-5, 0, 1}), b);
}

auto biquadratic() {
  return field("Q(sqrt-5,i)", iv({1, 0, 3, 0, 1}), rm({{1, 0, 0, 0}, {0, -2, 0, -1}, {-1, 0, -1, 0}, {0, 1, 0, 0}}));
}

struct Sqrt5Data {
  std::shared_ptr<const NumberField> F = qsqrt_m5();
  PrimeIdeal p2 = make_prime(*F, 2, el({1, 1}));
  PrimeIdeal p3 = make_prime(*F, 3, el({-1, 1}));
  PrimeIdeal p3b = make_prime(*F, 3, el({1, 1}));
  std::vector<FieldElement> wit{el({2, 0}), el({3, 0}), el({-1, -1})};
  IntMatrix rel{{2, 0, 0}, {0, 1, 1}, {1, 0, 1}};
  ClassGroupData make() const { return ClassGroupData(F, {p2, p3, p3b}, rel, wit, {}); }
};

}  // namespace

TEST_CASE("class group of Q(sqrt-5)") {
  Sqrt5Data s;
  ClassGroupData cg = s.make();
  CHECK(cg.group().structure() == "Z/2");
  // oracle: a^2 + 5 b^2 = 2 has no solution, so the prime above 2 is not principal
  bool norm_two = false;
  for (long a = -2; a <= 2; ++a)
    for (long b = -1; b <= 1; ++b) norm_two = norm_two || a * a + 5 * b * b == 2;
  CHECK(!norm_two);
  CHECK(!cg.group().is_zero(cg.dlog(s.p2.ideal)));
  CHECK(cg.group().is_zero(cg.dlog(ideal_mul(*s.F, s.p2.ideal, s.p2.ideal))));
  CHECK(cg.group().is_zero(cg.dlog(principal_ideal(*s.F, el({1, 1})))));
  CHECK(cg.dlog(ideal_mul(*s.F, s.p2.ideal, principal_ideal(*s.F, el({1, 1})))) == cg.dlog(s.p2.ideal));
  CHECK_THROWS_AS(cg.dlog(principal_ideal(*s.F, el({7, 0}))), Error);

  FieldElement x = cg.principal_generator(ideal_mul(*s.F, s.p2.ideal, s.p2.ideal));
  CHECK(principal_ideal(*s.F, x) == principal_ideal(*s.F, el({2, 0})));
  CHECK_THROWS_AS(cg.principal_generator(s.p2.ideal), Error);

  // dlog is additive on random smooth ideals
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> d(-3, 3);
  for (int t = 0; t < 100; ++t) {
    IntVec a = iv({d(rng), d(rng), d(rng)}), b = iv({d(rng), d(rng), d(rng)});
    IdealHNF I = cg.representative(a), J = cg.representative(b);
    CHECK(cg.dlog(ideal_mul(*s.F, I, J)) == cg.group().reduce(add(cg.dlog(I), cg.dlog(J))));
  }
}

TEST_CASE("class group validation failures") {
  Sqrt5Data s;
  auto wrong = s.wit;
  wrong[1] = el({9, 0});
  CHECK_THROWS_AS(ClassGroupData(s.F, {s.p2, s.p3, s.p3b}, s.rel, wrong, {}), Error);
  try {
    ClassGroupData(s.F, {s.p2, s.p3, s.p3b}, s.rel, wrong, {});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WitnessMismatch);
  }
  try {
    ClassGroupData(s.F, {s.p3, s.p3b}, IntMatrix{{1, 1}}, {el({3, 0})}, {});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CoverageGap);
  }
  // missing the relation (2) = P2^2: the sweep must find it
  ClassGroupData under(s.F, {s.p2, s.p3, s.p3b}, IntMatrix{{0, 1, 1}, {1, 0, 1}}, {el({3, 0}), el({-1, -1})}, {});
  SaturationOptions opt;
  opt.height = 3;
  SaturationReport rep = under.saturation_sweep(opt);
  CHECK(!rep.passed);
  CHECK_THROWS_AS(validate_saturation(under, opt), Error);
}

TEST_CASE("saturation sweep") {
  Sqrt5Data s;
  ClassGroupData cg = s.make();
  SaturationOptions opt;
  SaturationReport par = cg.saturation_sweep(opt);
  CHECK(par.passed);
  CHECK(par.height == 12);
  CHECK(!par.capped);
  CHECK(par.tested == (25 * 25 - 1) / 2);
  CHECK(par.smooth > 0);
  SaturationReport ser = sweep_box(cg, 12, false);
  CHECK(ser.tested == par.tested);
  CHECK(ser.smooth == par.smooth);
  CHECK(capped_height(6, 12, 2000000) == 5);
  opt.budget = 100;
  CHECK(cg.saturation_sweep(opt).height == 4);

  auto Q = field("Q", iv({0, 1}), rm({{1}}));
  ClassGroupData trivial(Q, {}, IntMatrix(0, 0), {}, {});
  CHECK(trivial.group().is_trivial());
  CHECK(trivial.covered_rational_primes().empty());
  CHECK(trivial.saturation_sweep({}).passed);
}

TEST_CASE("unit lattices") {
  auto K5 = qsqrt5();
  SUnitLattice u5(K5, el({-1, 0}), 2, {el({0, 1})}, {});
  UnitExponentVector e = u5.recover_exponents(el({-1, 0}));
  CHECK(e.torsion == 1);
  CHECK(e.free == iv({0}));
  FieldElement eps = el({0, 1});
  e = u5.recover_exponents(K5->pow(eps, 3));
  CHECK(e.torsion == 0);
  CHECK(e.free == iv({3}));
  CHECK(!u5.nth_root(el({-1, 0}), 2));
  CHECK_THROWS_AS(u5.recover_exponents(el({0, 2})), Error);
  u5.certify_saturation(2);
  u5.certify_saturation(3);

  auto K2 = field("Q(sqrt2)", iv({-2, 0, 1}), rm({{1, 0}, {0, 1}}));
  SUnitLattice u2(K2, el({-1, 0}), 2, {el({1, 1})}, {});
  e = u2.recover_exponents(el({3, 2}));
  CHECK(e.torsion == 0);
  CHECK(e.free == iv({2}));
  // oracle: (1 + sqrt2)^2 = 3 + 2 sqrt2
  CHECK(K2->mul(el({1, 1}), el({1, 1})) == el({3, 2}));

  auto Ki = qi();
  SUnitLattice ui(Ki, el({0, 1}), 4, {}, {});
  auto r = ui.nth_root(el({-1, 0}), 2);
  REQUIRE(r);
  CHECK(Ki->mul(*r, *r) == el({-1, 0}));
  CHECK(ui.mod_n(3).is_trivial());
}

TEST_CASE("unit lattice validation") {
  auto K5 = qsqrt5();
  try {
    SUnitLattice(K5, el({-1, 0}), 2, {el({0, 2})}, {});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAUnit);
  }
  CHECK_THROWS_AS(SUnitLattice(K5, el({-1, 0}), 2, {}, {}), Error);            // rank
  CHECK_THROWS_AS(SUnitLattice(K5, el({-1, 0}), 2, {el({-1, 0})}, {}), Error);  // dependent
  CHECK_THROWS_AS(SUnitLattice(K5, el({-1, 0}), 4, {el({0, 1})}, {}), Error);   // order
  CHECK_THROWS_AS(SUnitLattice(qi(), el({-1, 0}), 2, {}, {}), Error);           // torsion not full
  SUnitLattice sq(K5, el({-1, 0}), 2, {el({1, 1})}, {});                       // eps^2
  CHECK_THROWS_AS(sq.certify_saturation(2), Error);
  sq.certify_saturation(3);
}

TEST_CASE("sigma-units of Q(i) with 2 in sigma") {
  auto Ki = qi();
  PrimeIdeal p = make_prime(*Ki, 2, el({1, 1}));
  SUnitLattice u(Ki, el({0, 1}), 4, {el({1, 1})}, {p});
  IntVec c = u.coords(el({2, 0}));
  // 2 = -i (1+i)^2
  CHECK(c == iv({3, 2}));
  CHECK(u.evaluate(c) == el({2, 0}));
  CHECK(u.coords(el({1, 0}, 2)) == iv({1, -2}));
  CHECK(!u.is_unit(el({3, 0})));
  u.certify_saturation(2);
}

TEST_CASE("unit round trip and n-th powers") {
  auto K = biquadratic();
  SUnitLattice u(K, el({0, 1, 0, 0}), 4, {el({0, 0, 1, 0})}, {});
  FGAbGroup q = u.mod_n(2);
  CHECK(q.structure() == "Z/2 x Z/2");
  CHECK(q.is_zero(u.coords(el({-1, 0, 0, 0}))));
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> d(-10, 10), a(0, 3);
  for (int t = 0; t < 100; ++t) {
    IntVec c = iv({a(rng), d(rng)});
    CHECK(u.coords(u.evaluate(c)) == c);
  }
  for (int t = 0; t < 20; ++t) {
    FieldElement v = u.evaluate(iv({a(rng), d(rng)}));
    for (long n : {2L, 3L}) {
      auto r = u.nth_root(K->pow(v, n), n);
      REQUIRE(r);
      CHECK(K->pow(*r, n) == K->pow(v, n));
    }
  }
  u.certify_saturation(2);
}
