#include "capk/capitulation/pipeline.hpp"
#include "capk/errors.hpp"
#include "capk/fixtures/fixture.hpp"
#include "capk/fixtures/report.hpp"
#include "doctest.h"

using namespace capk;

namespace {

const CoveringDatum& fixture(const std::string& name) {
  static std::map<std::string, CoveringDatum> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    auto lf = parse_and_validate(std::string(CAPK_FIXTURE_DIR) + "/" + name + ".fix");
    it = cache.emplace(name, lf.datum).first;
  }
  return it->second;
}

const SequenceReport& report(const std::string& name) {
  static std::map<std::string, SequenceReport> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, verify_sequence(fixture(name), 7)).first;
  return it->second;
}

std::vector<long> orders(const SequenceReport& r) {
  std::vector<long> o;
  for (auto& t : r.terms) o.push_back(t.order().get_si());
  return o;
}

// H^1 of a cyclic group with generator s: ker(N) / im(s - 1), no bar resolution involved.
Int cyclic_h1_order(const GModule& m, int generator) {
  const FGAbGroup& A = m.module();
  std::size_t g = A.num_generators();
  IntMatrix N(g, g), D = m.action(generator);
  for (int d = 0; d < m.group().order(); ++d) N = N + m.action(d);
  for (std::size_t i = 0; i < g; ++i) D(i, i) -= 1;
  Subgroup kerN = kernel(FGAbHom(A, A, N));
  Subgroup imD = image(FGAbHom(A, A, D));
  REQUIRE(kerN.contains(imD));
  IntMatrix rows(imD.num_generators(), kerN.num_generators());
  for (std::size_t i = 0; i < imD.num_generators(); ++i) rows.set_row(i, *kerN.express(imD.generators().row(i)));
  return quotient(Subgroup(kerN.group(), rows)).group.order();
}

template <class Fn>
std::optional<ErrorKind> thrown_kind(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("unit module action agrees with the automorphisms") {
  for (auto name : {"q_qi", "fixture_a", "fixture_b"}) {
    const CoveringDatum& cov = fixture(name);
    const SUnitLattice& U = *cov.K().units;
    GModule M = units_module(cov);
    std::vector<FieldElement> gens{U.torsion_generator()};
    gens.insert(gens.end(), U.free_generators().begin(), U.free_generators().end());
    for (int d = 0; d < cov.delta().order(); ++d)
      for (std::size_t i = 0; i < gens.size(); ++i)
        CHECK(U.evaluate(M.action(d).row(i)) == cov.automorphisms()[d].apply(gens[i]));
  }
}

TEST_CASE("fixture A: i goes to -i and the fundamental unit to -1/eps") {
  const CoveringDatum& cov = fixture("fixture_a");
  const NumberField& K = cov.top();
  const SUnitLattice& U = *cov.K().units;
  const auto& s = cov.automorphisms()[1];
  FieldElement i = U.torsion_generator(), eps = U.free_generators()[0];
  CHECK(K.mul(i, i) == K.from_int(-1));
  CHECK(s.apply(i) == K.neg(i));
  CHECK(s.apply(eps) == K.neg(K.inv(eps)));
}

TEST_CASE("mu_n and its cohomology for trivial action") {
  for (auto name : {"q_qi", "fixture_a", "fixture_b"}) {
    const CoveringDatum& cov = fixture(name);
    GModule U = units_module(cov);
    MuN mu = mu_n(cov, U);
    Int n = cov.degree(), w = cov.K().units->torsion_order();
    CHECK(mu.order == Int(gcd(n, w)).get_si());
    // trivial action of a cyclic group on Z/m: H^1 = H^2 = Z/gcd(|G|, m)
    Int g = gcd(n, Int(mu.order));
    CHECK(cohomology(mu.module, 1).group.order() == g);
    CHECK(cohomology(mu.module, 2).group.order() == g);
    if (mu.order > 1) {
      FieldElement z = cov.K().units->evaluate(mu.inside_units.generators().row(0));
      CHECK(mu_n_coordinate(cov, mu, z) == Int(1));
      CHECK(cov.top().pow(z, mu.order) == cov.top().one());
    }
    CHECK_FALSE(mu_n_coordinate(cov, mu, cov.K().units->free_generators()[0]).has_value());
  }
}

TEST_CASE("capitulation kernel with exact principal generators") {
  const CoveringDatum& A = fixture("fixture_a");
  CapitulationKernel kj = capitulation_kernel(A);
  CHECK(kj.kernel.group().invariant_factors() == IntVec{2});
  CHECK(kj.killed_by_n);
  // (2, 1 + sqrt(-5)) O_K is principal
  PrimeIdeal P = make_prime(A.base(), 2, FieldElement(IntVec{1, 1}));
  FieldElement x = A.K().classes->principal_generator(A.extend(P.ideal));
  CHECK(principal_ideal(A.top(), x) == A.extend(P.ideal));
  CHECK(kj.prime_witnesses.size() == 3);
  for (auto& k : kj.prime_witnesses) CHECK(principal_ideal(A.top(), k.witness) == A.extend(k.ideal));

  const CoveringDatum& B = fixture("fixture_b");
  CapitulationKernel kb = capitulation_kernel(B);
  CHECK(kb.kernel.group().invariant_factors() == IntVec{3});
  for (auto& k : kb.generators) CHECK(principal_ideal(B.top(), k.witness) == B.extend(k.ideal));

  CHECK(capitulation_kernel(fixture("q_qi")).kernel.group().is_trivial());
}

TEST_CASE("Psi and the unit quotient of fixture A") {
  const CoveringDatum& cov = fixture("fixture_a");
  const NumberField& K = cov.top();
  const SUnitLattice& U = *cov.K().units;
  PsiData p = psi_group(cov);
  CHECK(p.psi_is_everything);
  CHECK(p.quotient.group.invariant_factors() == IntVec{2, 2});
  CHECK(p.index == 4);
  // oracle: every u in U_K/U_K^2 has u / sigma(u) a square, checked in the field
  for (long a = 0; a < 2; ++a)
    for (long e = 0; e < 2; ++e) {
      FieldElement u = U.evaluate(IntVec{a, e});
      CHECK(U.nth_root(K.div(u, cov.automorphisms()[1].apply(u)), 2).has_value());
    }
  CHECK(U.nth_root(K.from_int(-1), 2).has_value());
}

TEST_CASE("term1 and the Kummer map of fixture A") {
  const CoveringDatum& cov = fixture("fixture_a");
  const NumberField& K = cov.top();
  PsiData p = psi_group(cov);
  Term1 t = term1(cov, p);
  CHECK(t.kernel.group().invariant_factors() == IntVec{2});
  REQUIRE(t.roots.size() == 1);
  CHECK(t.units[0] == cov.base().from_int(-1));
  CHECK(K.pow(t.roots[0], 2) == K.from_int(-1));
  GModule U = units_module(cov);
  MuN mu = mu_n(cov, U);
  // sigma(i)/i = -1
  CHECK(K.div(cov.automorphisms()[1].apply(t.roots[0]), t.roots[0]) == K.from_int(-1));
  Cochain c = kummer_cocycle(cov, mu, t.roots[0]);
  CHECK(c.values == IntVec{0, 1});
  CohomologyGroup h1 = cohomology(mu.module, 1);
  FGAbHom m1 = map1_kummer(cov, t, mu, h1);
  CHECK(m1.is_isomorphism());
}

TEST_CASE("H^1 of the units matches Ker j through the resolvent") {
  for (auto [name, expect] : {std::pair{"q_qi", 1}, {"fixture_a", 2}, {"fixture_b", 3}}) {
    const CoveringDatum& cov = fixture(name);
    GModule U = units_module(cov);
    CHECK(cyclic_h1_order(U, 1) == expect);
    const SequenceReport& r = report(name);
    CHECK(r.comparison.h1.group.order() == expect);
    CHECK(r.comparison.orders_equal);
    CHECK(r.comparison.bijective);
    for (auto& c : r.comparison.certificates) {
      CHECK_FALSE(c.b.is_zero());
      CHECK(cov.top().mul(c.b, c.x) == cov.top().one());
    }
  }
}

TEST_CASE("resolvent with no attempts is degenerate") {
  const CoveringDatum& cov = fixture("fixture_a");
  std::mt19937_64 rng(1);
  GModule U = units_module(cov);
  CapitulationKernel kj = capitulation_kernel(cov);
  CHECK(thrown_kind([&] { h1_units_and_comparison(cov, U, kj, rng, 0); }) == ErrorKind::ResolventDegenerate);
}

TEST_CASE("five-term sequences of the fixtures") {
  const SequenceReport& q = report("q_qi");
  CHECK(orders(q) == std::vector<long>{2, 2, 1, 1, 2});
  CHECK(q.exact);
  CHECK(q.all_verified());

  const SequenceReport& a = report("fixture_a");
  CHECK(orders(a) == std::vector<long>{2, 2, 2, 4, 2});
  CHECK(a.terms[3].invariant_factors() == IntVec{2, 2});
  CHECK(a.exact);
  CHECK(a.maps[0].is_isomorphism());
  CHECK(a.maps[1].is_zero());
  CHECK(a.maps[2].is_injective());
  CHECK_FALSE(a.maps[3].is_zero());
  CHECK(a.verdicts.size() == 4);
  CHECK(a.all_verified());

  const SequenceReport& b = report("fixture_b");
  CHECK(orders(b) == std::vector<long>{1, 1, 3, 3, 1});
  CHECK(b.exact);
  CHECK(b.corollary_applies);
  CHECK(b.corollary_isomorphism);
  CHECK(b.corollary_bound);
  CHECK(b.psi.index == 9);
  CHECK(b.all_verified());

  for (auto* r : {&q, &a, &b}) {
    for (bool k : r->killed_by_n) CHECK(k);
    CHECK(r->kernel.killed_by_n);
    CHECK(r->convention == Convention::Direct);
    CHECK(r->fuzz3.passed());
    CHECK(r->fuzz4.passed());
  }
}

TEST_CASE("snake values of fixture A") {
  const CoveringDatum& cov = fixture("fixture_a");
  const NumberField& K = cov.top();
  const SequenceReport& a = report("fixture_a");
  REQUIRE(a.snake_witnesses.size() == 1);
  auto& w = a.snake_witnesses[0];
  CHECK(K.div(K.pow(w.x, 2), cov.embed(w.alpha)) == w.u);
  CHECK(cov.K().units->is_unit(w.u));
  // the inverse convention negates the class
  FGAbHom inv = map3_snake(cov, a.kernel, a.psi, Convention::Inverse);
  CHECK(inv.then(FGAbHom::multiplication(inv.target(), -1)).matrix() == a.maps[2].matrix());
  CHECK(snake_unit(cov, w.x, w.alpha, Convention::Inverse) == K.inv(w.u));
}

TEST_CASE("a broken map is caught by the exactness check") {
  const SequenceReport& a = report("fixture_a");
  FGAbHom zero3 = FGAbHom::zero(a.terms[2], a.terms[3]);
  auto v = check_exact({a.maps[1], zero3, a.maps[3]});
  CHECK_FALSE(v[0].kernel_equals_image);
}

TEST_CASE("units outside Psi are rejected") {
  const CoveringDatum& cov = fixture("q_qi");
  PsiData p = psi_group(cov);
  CHECK_FALSE(p.psi_is_everything);
  FieldElement u = cov.K().units->free_generators()[0];  // 1 + i
  CHECK(thrown_kind([&] { psi_class(cov, p, u); }) == ErrorKind::ExactnessFailure);
  CHECK(thrown_kind([&] { transgression_witnesses(cov, u); }) == ErrorKind::NotAnNthPower);
}

TEST_CASE("norm identities") {
  for (auto name : {"q_qi", "fixture_a", "fixture_b"}) {
    const CoveringDatum& cov = fixture(name);
    for (auto& e : rescores_check(cov)) {
      CHECK(e.ideal_identity);
      CHECK(e.class_identity);
    }
    for (auto& e : norm_unit_check(cov)) CHECK(e.holds);
    // absolute norms: N(P O_K) = N(P)^n
    for (auto& P : cov.F().classes->factor_base()) {
      Rat nP = ideal_norm(P.ideal), nK = ideal_norm(cov.extend(P.ideal)), pw = 1;
      for (int i = 0; i < cov.degree(); ++i) pw *= nP;
      CHECK(nK == pw);
    }
  }
}

TEST_CASE("descent to the base field") {
  const CoveringDatum& cov = fixture("fixture_b");
  FieldElement x(IntVec{3, -2}, 5);
  CHECK(cov.descend(cov.embed(x)) == x);
  CHECK_FALSE(cov.descend(cov.top().theta()).has_value());
}

TEST_CASE("same seed, same report") {
  const CoveringDatum& cov = fixture("fixture_a");
  SequenceReport r1 = verify_sequence(cov, 99), r2 = verify_sequence(cov, 99);
  CHECK(sequence_json(r1, cov).dump() == sequence_json(r2, cov).dump());
}
