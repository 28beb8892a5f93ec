#include "capk/capitulation/pipeline.hpp"

#include <numeric>

#include "capk/errors.hpp"
#include "capk/fgab/normal_form.hpp"

namespace capk {

namespace {

const SUnitLattice& UK(const CoveringDatum& c) { return *c.K().units; }
const SUnitLattice& UF(const CoveringDatum& c) { return *c.F().units; }
const ClassGroupData& CK(const CoveringDatum& c) { return *c.K().classes; }
const ClassGroupData& CF(const CoveringDatum& c) { return *c.F().classes; }

IntVec scaled(const IntVec& v, long n) { return scale(v, Int(n)); }

// Values of a 1-cochain delta -> coords(f(delta)) on the unit module.
Cochain unit_cochain1(const CoveringDatum& cov, const std::vector<FieldElement>& vals) {
  Cochain c{1, {}};
  for (auto& v : vals) {
    IntVec x = UK(cov).coords(v);
    c.values.insert(c.values.end(), x.begin(), x.end());
  }
  return c;
}

std::vector<FieldElement> cochain_units(const CoveringDatum& cov, const IntVec& values) {
  std::size_t g = 1 + UK(cov).rank();
  std::vector<FieldElement> out;
  for (std::size_t i = 0; i < values.size() / g; ++i)
    out.push_back(UK(cov).evaluate(IntVec(values.begin() + i * g, values.begin() + (i + 1) * g)));
  return out;
}

// delta(x)/x for every delta
std::vector<FieldElement> coboundary_values(const CoveringDatum& cov, const FieldElement& x) {
  const NumberField& K = cov.top();
  std::vector<FieldElement> out;
  FieldElement xi = K.inv(x);
  for (auto& a : cov.automorphisms()) out.push_back(K.mul(a.apply(x), xi));
  return out;
}

FieldElement random_element(const NumberField& K, std::mt19937_64& rng, long h) {
  std::uniform_int_distribution<long> d(-h, h);
  for (;;) {
    IntVec v(K.degree());
    for (auto& x : v) x = d(rng);
    if (!is_zero(v)) return FieldElement(v);
  }
}

IntVec random_unit_coords(const SUnitLattice& U, std::mt19937_64& rng, long h) {
  std::uniform_int_distribution<long> t(0, U.torsion_order() - 1), d(-h, h);
  IntVec c{Int(t(rng))};
  for (std::size_t i = 0; i < U.rank(); ++i) c.emplace_back(d(rng));
  return c;
}

// Same subgroup, on generators realizing its invariant factors.
Subgroup minimal(const Subgroup& s) {
  return Subgroup(s.parent(), s.group().invariant_generators() * s.generators());
}

}  // namespace

GModule units_module(const CoveringDatum& cov) {
  const SUnitLattice& U = UK(cov);
  std::vector<FieldElement> gens{U.torsion_generator()};
  gens.insert(gens.end(), U.free_generators().begin(), U.free_generators().end());
  std::vector<IntMatrix> act;
  for (auto& a : cov.automorphisms()) {
    IntMatrix m(gens.size(), gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) m.set_row(i, U.coords(a.apply(gens[i])));
    act.push_back(m);
  }
  return GModule(cov.delta(), U.group(), act);
}

MuN mu_n(const CoveringDatum& cov, const GModule& units) {
  MuN mu;
  long w = UK(cov).torsion_order();
  mu.order = std::gcd(long(cov.degree()), w);
  IntMatrix g(1, units.module().num_generators());
  g(0, 0) = w / mu.order;
  mu.inside_units = Subgroup(units.module(), g);
  mu.module = units.submodule(mu.inside_units);
  mu.inclusion = mu.inside_units.inclusion();
  return mu;
}

std::optional<Int> mu_n_coordinate(const CoveringDatum& cov, const MuN& mu, const FieldElement& z) {
  IntVec c = UK(cov).coords(z);
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i] != 0) return std::nullopt;
  long step = UK(cov).torsion_order() / mu.order;
  Int a = c[0] % UK(cov).torsion_order();
  if (a < 0) a += UK(cov).torsion_order();
  if (a % step != 0) return std::nullopt;
  return a / step;
}

KernelGenerator kernel_element(const CoveringDatum& cov, const IntVec& class_coords) {
  KernelGenerator g;
  g.class_coords = class_coords;
  g.ideal = CF(cov).representative(class_coords);
  g.witness = CK(cov).principal_generator(cov.extend(g.ideal));
  return g;
}

CapitulationKernel capitulation_kernel(const CoveringDatum& cov) {
  CapitulationKernel r;
  const auto& fb = CF(cov).factor_base();
  IntMatrix m(fb.size(), CK(cov).group().num_generators());
  for (std::size_t i = 0; i < fb.size(); ++i) m.set_row(i, CK(cov).dlog(cov.extend(fb[i].ideal)));
  r.j = FGAbHom(CF(cov).group(), CK(cov).group(), m);
  r.kernel = minimal(kernel(r.j));
  for (std::size_t i = 0; i < r.kernel.num_generators(); ++i)
    r.generators.push_back(kernel_element(cov, r.kernel.generators().row(i)));
  for (std::size_t i = 0; i < fb.size(); ++i)
    if (r.kernel.contains(unit_vec(fb.size(), i)))
      r.prime_witnesses.push_back(kernel_element(cov, unit_vec(fb.size(), i)));
  r.killed_by_n = FGAbHom::multiplication(r.kernel.group(), cov.degree()).is_zero();
  return r;
}

PsiData psi_group(const CoveringDatum& cov) {
  PsiData p;
  const int n = cov.degree();
  p.units_mod_n = UK(cov).mod_n(n);
  p.base_mod_n = UF(cov).mod_n(n);
  std::vector<FieldElement> fg{UF(cov).torsion_generator()};
  fg.insert(fg.end(), UF(cov).free_generators().begin(), UF(cov).free_generators().end());
  IntMatrix b(fg.size(), p.units_mod_n.num_generators());
  for (std::size_t i = 0; i < fg.size(); ++i) b.set_row(i, UK(cov).coords(cov.embed(fg[i])));
  p.base_to_top = FGAbHom(p.base_mod_n, p.units_mod_n, b);

  GModule U = units_module(cov);
  std::size_t g = p.units_mod_n.num_generators();
  p.psi = Subgroup::whole(p.units_mod_n);
  for (int d = 0; d < cov.delta().order(); ++d) {
    IntMatrix m = IntMatrix::identity(g);
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t k = 0; k < g; ++k) m(i, k) -= U.action(d)(i, k);
    p.phi.emplace_back(p.units_mod_n, p.units_mod_n, m);
    p.psi = intersect(p.psi, kernel(p.phi.back()));
  }
  p.psi = minimal(p.psi);
  p.base_image = image(p.base_to_top);
  if (!p.psi.contains(p.base_image))
    fail(ErrorKind::ExactnessFailure, "image of the base-field units is not inside Psi");
  IntMatrix rows(p.base_image.num_generators(), p.psi.num_generators());
  for (std::size_t i = 0; i < p.base_image.num_generators(); ++i)
    rows.set_row(i, *p.psi.express(p.base_image.generators().row(i)));
  p.quotient = quotient(Subgroup(p.psi.group(), rows));
  p.psi_is_everything = p.psi.equals(Subgroup::whole(p.units_mod_n));
  p.index = quotient(p.base_image).group.order();
  return p;
}

ElementCoords psi_class(const CoveringDatum& cov, const PsiData& psi, const FieldElement& u) {
  IntVec c = psi.units_mod_n.reduce(UK(cov).coords(u));
  auto e = psi.psi.express(c);
  if (!e) fail(ErrorKind::ExactnessFailure, "unit " + u.str() + " is not in Psi");
  return psi.quotient.projection.apply(*e);
}

Term1 term1(const CoveringDatum& cov, const PsiData& psi) {
  Term1 t;
  t.kernel = minimal(kernel(psi.base_to_top));
  for (std::size_t i = 0; i < t.kernel.num_generators(); ++i) {
    FieldElement u = UF(cov).evaluate(t.kernel.generators().row(i));
    auto v = UK(cov).nth_root(cov.embed(u), cov.degree());
    if (!v) fail(ErrorKind::NotAnNthPower, "unit " + u.str() + " of F is not an n-th power in K");
    t.units.push_back(u);
    t.roots.push_back(*v);
  }
  return t;
}

Cochain kummer_cocycle(const CoveringDatum& cov, const MuN& mu, const FieldElement& v) {
  const NumberField& K = cov.top();
  Cochain c{1, {}};
  for (auto& z : coboundary_values(cov, v)) {
    if (K.pow(z, cov.degree()) != K.one()) fail(ErrorKind::NotAnNthPower, "Kummer cocycle value outside mu_n");
    auto a = mu_n_coordinate(cov, mu, z);
    if (!a) fail(ErrorKind::NotAnNthPower, "Kummer cocycle value outside mu_n");
    c.values.push_back(*a);
  }
  return c;
}

FGAbHom map1_kummer(const CoveringDatum& cov, const Term1& t1, const MuN& mu, const CohomologyGroup& h1mu) {
  IntMatrix rows(t1.roots.size(), h1mu.group.num_generators());
  for (std::size_t i = 0; i < t1.roots.size(); ++i)
    rows.set_row(i, class_of(h1mu, kummer_cocycle(cov, mu, t1.roots[i])).coords);
  return FGAbHom(t1.kernel.group(), h1mu.group, rows);
}

H1Comparison h1_units_and_comparison(const CoveringDatum& cov, const GModule& units, const CapitulationKernel& kj,
                                     std::mt19937_64& rng, int max_attempts) {
  const NumberField& K = cov.top();
  const int nd = cov.delta().order();
  H1Comparison r;
  r.h1 = cohomology(units, 1);

  IntMatrix th(kj.generators.size(), r.h1.group.num_generators());
  for (std::size_t i = 0; i < kj.generators.size(); ++i) {
    Cochain c = unit_cochain1(cov, coboundary_values(cov, kj.generators[i].witness));
    th.set_row(i, class_of(r.h1, c).coords);
  }
  r.theta = FGAbHom(kj.kernel.group(), r.h1.group, th);

  Subgroup reach(r.h1.group, r.theta.matrix());
  IntMatrix d0 = bar_differential_matrix(units, 0);
  Subgroup coboundaries(r.h1.cochains, d0);
  IntMatrix om(r.h1.group.num_generators(), kj.kernel.num_generators());
  for (std::size_t i = 0; i < r.h1.group.num_generators(); ++i) {
    ResolventCertificate cert;
    IntVec rep = r.h1.representative(r.h1.group.generator(i));
    std::vector<FieldElement> c = cochain_units(cov, rep);
    // b = sum_delta c(delta) delta(theta), so that c(delta) = b / delta(b)
    bool ok = false;
    for (int a = 1; a <= max_attempts && !ok; ++a) {
      cert.attempts = a;
      cert.theta = random_element(K, rng, 3);
      FieldElement b = K.zero();
      for (int d = 0; d < nd; ++d) b = K.add(b, K.mul(c[d], cov.automorphisms()[d].apply(cert.theta)));
      if (b.is_zero()) continue;
      ok = true;
      for (int d = 0; d < nd; ++d)
        if (K.div(b, cov.automorphisms()[d].apply(b)) != c[d])
          fail(ErrorKind::ExactnessFailure, "resolvent does not split the cocycle");
      cert.b = b;
    }
    if (!ok) fail(ErrorKind::ResolventDegenerate, "resolvent vanished for " + std::to_string(max_attempts) + " choices");
    cert.x = K.inv(cert.b);
    IdealHNF X = principal_ideal(K, cert.x);
    for (auto& a : cov.automorphisms())
      if (!CK(cov).same_away_from_sigma(a.apply(K, X), X))
        fail(ErrorKind::ExactnessFailure, "resolvent ideal is not Galois stable");

    auto k = reach.express(r.h1.group.generator(i));
    if (!k) fail(ErrorKind::ExactnessFailure, "cocycle class is not reached from the capitulation kernel");
    cert.kernel_coords = *k;
    KernelGenerator ke = kernel_element(cov, vec_mul(*k, kj.kernel.generators()));
    Cochain ck = unit_cochain1(cov, coboundary_values(cov, ke.witness));
    auto t = coboundaries.express(r.h1.cochains.reduce(sub(rep, ck.values)));
    if (!t) fail(ErrorKind::ExactnessFailure, "cocycles from resolvent and kernel are not cohomologous");
    cert.t = UK(cov).evaluate(*t);
    auto cv = coboundary_values(cov, ke.witness);
    auto tv = coboundary_values(cov, cert.t);
    for (int d = 0; d < nd; ++d)
      if (K.mul(cv[d], tv[d]) != c[d]) fail(ErrorKind::ExactnessFailure, "coboundary certificate failed");
    auto beta = cov.descend(K.div(cert.x, K.mul(ke.witness, cert.t)));
    if (!beta) fail(ErrorKind::ExactnessFailure, "quotient of generators is not in F");
    cert.beta = *beta;
    IdealHNF a = ideal_mul(cov.base(), ke.ideal, principal_ideal(cov.base(), cert.beta));
    if (!CK(cov).same_away_from_sigma(cov.extend(a), X))
      fail(ErrorKind::ExactnessFailure, "descended ideal does not extend to (x)");
    om.set_row(i, *k);
    r.certificates.push_back(cert);
  }
  r.omega = FGAbHom(r.h1.group, kj.kernel.group(), om);
  r.orders_equal = r.h1.group.order() == kj.kernel.group().order();
  bool inverse = true;
  FGAbHom round = r.theta.then(r.omega);
  for (std::size_t i = 0; i < kj.kernel.num_generators(); ++i)
    inverse = inverse && kj.kernel.group().equal(round.apply(kj.kernel.group().generator(i)),
                                                 kj.kernel.group().generator(i));
  r.bijective = inverse && r.theta.is_isomorphism() && r.omega.is_isomorphism();
  return r;
}

FGAbHom map2_inclusion(const CoveringDatum& cov, const MuN& mu, const GModule& units, const H1Comparison& cmp) {
  check_equivariant(mu.inclusion, mu.module, units);
  CohomologyGroup h1mu = cohomology(mu.module, 1);
  return induced_cohomology_map(mu.inclusion, h1mu, cmp.h1, cov.delta().order()).then(cmp.omega);
}

FieldElement snake_unit(const CoveringDatum& cov, const FieldElement& x, const FieldElement& alpha, Convention c) {
  const NumberField& K = cov.top();
  FieldElement u = K.div(K.pow(x, cov.degree()), cov.embed(alpha));
  return c == Convention::Direct ? u : K.inv(u);
}

FGAbHom map3_snake(const CoveringDatum& cov, const CapitulationKernel& kj, const PsiData& psi, Convention c,
                   std::vector<SnakeWitness>* witnesses) {
  const NumberField& K = cov.top();
  const int n = cov.degree();
  IntMatrix rows(kj.generators.size(), psi.quotient.group.num_generators());
  for (std::size_t i = 0; i < kj.generators.size(); ++i) {
    const KernelGenerator& g = kj.generators[i];
    FieldElement alpha = CF(cov).principal_generator(CF(cov).representative(scaled(g.class_coords, n)));
    FieldElement u = snake_unit(cov, g.witness, alpha, c);
    if (!UK(cov).is_unit(u)) fail(ErrorKind::NotAUnit, "snake value " + u.str() + " is not a sigma-unit");
    for (auto& a : cov.automorphisms())
      if (!UK(cov).nth_root(K.div(u, a.apply(u)), n))
        fail(ErrorKind::ExactnessFailure, "snake value is not in Psi");
    rows.set_row(i, psi_class(cov, psi, u));
    if (witnesses) witnesses->push_back({g.witness, alpha, u});
  }
  return FGAbHom(kj.kernel.group(), psi.quotient.group, rows);
}

std::vector<FieldElement> transgression_witnesses(const CoveringDatum& cov, const FieldElement& u) {
  const NumberField& K = cov.top();
  std::vector<FieldElement> b;
  FieldElement ui = K.inv(u);
  for (std::size_t d = 0; d < cov.automorphisms().size(); ++d) {
    if (d == 0) {
      b.push_back(K.one());
      continue;
    }
    auto r = UK(cov).nth_root(K.mul(cov.automorphisms()[d].apply(u), ui), cov.degree());
    if (!r) fail(ErrorKind::NotAnNthPower, "delta(u)/u is not an n-th power for u = " + u.str());
    b.push_back(*r);
  }
  return b;
}

Cochain transgression_cocycle(const CoveringDatum& cov, const MuN& mu, const std::vector<FieldElement>& b,
                              Convention c) {
  const NumberField& K = cov.top();
  const int nd = cov.delta().order();
  Cochain z{2, {}};
  for (int d = 0; d < nd; ++d)
    for (int t = 0; t < nd; ++t) {
      FieldElement v = K.div(K.mul(b[d], cov.automorphisms()[d].apply(b[t])), b[cov.delta().mul(d, t)]);
      if (c == Convention::Inverse) v = K.inv(v);
      if (K.pow(v, cov.degree()) != K.one()) fail(ErrorKind::ExactnessFailure, "transgression value outside mu_n");
      auto a = mu_n_coordinate(cov, mu, v);
      if (!a) fail(ErrorKind::ExactnessFailure, "transgression value outside mu_n");
      z.values.push_back(*a);
    }
  return z;
}

FGAbHom map4_transgression(const CoveringDatum& cov, const PsiData& psi, const MuN& mu,
                           const CohomologyGroup& h2mu, Convention c) {
  IntMatrix rows(psi.psi.num_generators(), h2mu.group.num_generators());
  for (std::size_t i = 0; i < psi.psi.num_generators(); ++i) {
    FieldElement u = UK(cov).evaluate(psi.psi.generators().row(i));
    rows.set_row(i, class_of(h2mu, transgression_cocycle(cov, mu, transgression_witnesses(cov, u), c)).coords);
  }
  return FGAbHom(psi.quotient.group, h2mu.group, rows);
}

std::vector<RescoresEntry> rescores_check(const CoveringDatum& cov) {
  std::vector<RescoresEntry> out;
  const auto& fb = CF(cov).factor_base();
  for (std::size_t i = 0; i < fb.size(); ++i) {
    RescoresEntry e;
    e.prime = fb[i].label;
    IdealHNF N = cov.norm_to_base(cov.extend(fb[i].ideal));
    e.ideal_identity = N == ideal_pow(cov.base(), fb[i].ideal, cov.degree());
    IntVec unit = unit_vec(fb.size(), i);
    e.class_identity = CF(cov).dlog(N) == CF(cov).group().reduce(scaled(unit, cov.degree()));
    out.push_back(e);
  }
  return out;
}

std::vector<NormUnitEntry> norm_unit_check(const CoveringDatum& cov) {
  const NumberField& K = cov.top();
  std::vector<FieldElement> gens{UF(cov).torsion_generator()};
  gens.insert(gens.end(), UF(cov).free_generators().begin(), UF(cov).free_generators().end());
  std::vector<NormUnitEntry> out;
  for (auto& g : gens) {
    FieldElement u = cov.embed(g);
    FieldElement prod = K.one();
    for (auto& a : cov.automorphisms()) prod = K.mul(prod, a.apply(u));
    out.push_back({cov.base().power_str(g), prod == K.pow(u, cov.degree())});
  }
  return out;
}

FuzzResult fuzz_map3(const CoveringDatum& cov, const CapitulationKernel& kj, const PsiData& psi, Convention c,
                     std::mt19937_64& rng, int rounds) {
  const NumberField& F = cov.base();
  const NumberField& K = cov.top();
  const int n = cov.degree();
  FuzzResult r;
  std::vector<SnakeWitness> w;
  FGAbHom ref = map3_snake(cov, kj, psi, c, &w);
  for (std::size_t i = 0; i < kj.generators.size(); ++i) {
    const KernelGenerator& g = kj.generators[i];
    IntVec want = ref.matrix().row(i);
    for (int t = 0; t < rounds; ++t) {
      ++r.trials;
      FieldElement gamma = random_element(F, rng, 3);
      FieldElement v = UK(cov).evaluate(random_unit_coords(UK(cov), rng, 2));
      FieldElement wf = UF(cov).evaluate(random_unit_coords(UF(cov), rng, 2));
      IdealHNF a = ideal_mul(F, g.ideal, principal_ideal(F, gamma));
      FieldElement x = K.mul(K.mul(g.witness, cov.embed(gamma)), v);
      FieldElement alpha = F.mul(F.mul(w[i].alpha, F.pow(gamma, n)), wf);
      bool ok = CK(cov).same_away_from_sigma(principal_ideal(K, x), cov.extend(a)) &&
                CF(cov).same_away_from_sigma(principal_ideal(F, alpha), ideal_pow(F, a, n));
      if (ok) ok = psi.quotient.group.equal(psi_class(cov, psi, snake_unit(cov, x, alpha, c)), want);
      if (ok) ++r.stable;
    }
  }
  return r;
}

FuzzResult fuzz_map4(const CoveringDatum& cov, const PsiData& psi, const MuN& mu, const CohomologyGroup& h2mu,
                     Convention c, std::mt19937_64& rng, int rounds) {
  const NumberField& K = cov.top();
  const int n = cov.degree();
  FuzzResult r;
  FGAbHom ref = map4_transgression(cov, psi, mu, h2mu, c);
  long step = UK(cov).torsion_order() / mu.order;
  std::uniform_int_distribution<long> pick(0, mu.order - 1);
  for (std::size_t i = 0; i < psi.psi.num_generators(); ++i) {
    FieldElement u = UK(cov).evaluate(psi.psi.generators().row(i));
    IntVec want = ref.matrix().row(i);
    for (int t = 0; t < rounds; ++t) {
      ++r.trials;
      FieldElement y = UK(cov).evaluate(random_unit_coords(UK(cov), rng, 2));
      FieldElement f = cov.embed(UF(cov).evaluate(random_unit_coords(UF(cov), rng, 2)));
      FieldElement u2 = K.mul(K.mul(u, K.pow(y, n)), f);
      auto b = transgression_witnesses(cov, u2);
      for (std::size_t d = 1; d < b.size(); ++d) {
        IntVec z(1 + UK(cov).rank());
        z[0] = step * pick(rng);
        b[d] = K.mul(b[d], UK(cov).evaluate(z));
      }
      auto cls = class_of(h2mu, transgression_cocycle(cov, mu, b, c));
      if (h2mu.group.equal(cls.coords, want)) ++r.stable;
    }
  }
  return r;
}

bool SequenceReport::all_verified() const {
  bool ok = exact && kernel.killed_by_n && comparison.orders_equal && comparison.bijective;
  for (bool k : killed_by_n) ok = ok && k;
  if (corollary_applies) ok = ok && corollary_isomorphism && corollary_bound;
  for (auto& e : rescores) ok = ok && e.ideal_identity && e.class_identity;
  for (auto& e : norm_units) ok = ok && e.holds;
  return ok && fuzz3.passed() && fuzz4.passed();
}

SequenceReport verify_sequence(const CoveringDatum& cov, std::uint64_t seed) {
  SequenceReport rep;
  rep.seed = seed;
  rep.n = cov.degree();
  std::mt19937_64 rng(seed);
  GModule U = units_module(cov);
  MuN mu = mu_n(cov, U);
  CohomologyGroup h1mu = cohomology(mu.module, 1);
  CohomologyGroup h2mu = cohomology(mu.module, 2);
  rep.kernel = capitulation_kernel(cov);
  rep.psi = psi_group(cov);
  rep.t1 = term1(cov, rep.psi);
  FGAbHom m1 = map1_kummer(cov, rep.t1, mu, h1mu);
  rep.comparison = h1_units_and_comparison(cov, U, rep.kernel, rng);
  FGAbHom m2 = map2_inclusion(cov, mu, U, rep.comparison);

  FGAbHom m3, m4;
  for (Convention c : {Convention::Direct, Convention::Inverse}) {
    rep.convention = c;
    rep.inverse_tried = c == Convention::Inverse;
    rep.snake_witnesses.clear();
    m3 = map3_snake(cov, rep.kernel, rep.psi, c, &rep.snake_witnesses);
    m4 = map4_transgression(cov, rep.psi, mu, h2mu, c);
    FGAbHom m0 = FGAbHom::zero(FGAbGroup(), rep.t1.kernel.group());
    rep.verdicts = check_exact({m0, m1, m2, m3, m4});
    rep.exact = true;
    for (auto& v : rep.verdicts) rep.exact = rep.exact && v.exact();
    if (rep.exact) break;
  }
  rep.terms = {rep.t1.kernel.group(), h1mu.group, rep.kernel.kernel.group(), rep.psi.quotient.group, h2mu.group};
  rep.maps = {m1, m2, m3, m4};
  rep.term_names = {"(U_F cap U_K^n)/U_F^n", "H^1(Delta, mu_n)", "Ker j", "Psi/(U_F U_K^n)", "H^2(Delta, mu_n)"};
  rep.map_names = {"kummer", "inclusion", "snake", "transgression"};
  for (std::size_t i = 0; i < 5; ++i)
    rep.killed_by_n[i] = FGAbHom::multiplication(rep.terms[i], rep.n).is_zero();
  rep.corollary_applies = rep.n % 2 == 1 && mu.order == 1;
  if (rep.corollary_applies) {
    rep.corollary_isomorphism = m3.is_isomorphism();
    rep.corollary_bound = rep.kernel.kernel.group().order() <= rep.psi.index;
  }
  rep.rescores = rescores_check(cov);
  rep.norm_units = norm_unit_check(cov);
  rep.fuzz3 = fuzz_map3(cov, rep.kernel, rep.psi, rep.convention, rng);
  rep.fuzz4 = fuzz_map4(cov, rep.psi, mu, h2mu, rep.convention, rng);
  rep.precision_used = std::max(UK(cov).max_precision_used(), UF(cov).max_precision_used());
  return rep;
}

}  // namespace capk
