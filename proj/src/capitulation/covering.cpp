#include "capk/capitulation/covering.hpp"

#include <functional>

#include "capk/errors.hpp"

namespace capk {

namespace {

struct Collector {
  std::vector<CheckRecord>& log;
  std::vector<Error> failures;

  bool run(const std::string& name, const std::function<std::string()>& fn) {
    try {
      log.push_back({name, true, fn()});
      return true;
    } catch (const Error& e) {
      log.push_back({name, false, e.what()});
      failures.push_back(e);
      return false;
    }
  }

  void skip(const std::string& name, const std::string& why) { log.push_back({name, false, "skipped: " + why}); }
};

std::vector<Int> prime_divisors(Int n) {
  std::vector<Int> out;
  n = abs(n);
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::string join_labels(const std::vector<PrimeIdeal>& ps) {
  std::string s;
  for (auto& P : ps) s += (s.empty() ? "" : ", ") + P.label;
  return s.empty() ? "none" : s;
}

}  // namespace

std::vector<PrimeIdeal> primes_above(const NumberField& K, const Int& p, const std::vector<PrimeIdeal>& known) {
  std::vector<PrimeIdeal> mine;
  int sum = 0;
  for (auto& P : known)
    if (P.p == p) {
      bool dup = false;
      for (auto& Q : mine) dup = dup || Q == P;
      if (!dup) {
        mine.push_back(P);
        sum += P.e * P.f;
      }
    }
  if (sum == K.degree()) return mine;
  return factor_rational_prime(K, p);
}

std::optional<FieldElement> CoveringDatum::descend(const FieldElement& x) const {
  for (auto& a : autos_)
    if (a.apply(x) != x) return std::nullopt;
  RatMatrix E = to_rat(emb_.matrix());
  RatMatrix Et = E.transpose();
  RatVec xv(x.num.begin(), x.num.end());
  RatVec y = vec_mul(vec_mul(xv, Et), inverse(E * Et));
  if (vec_mul(y, E) != xv) return std::nullopt;
  Int den = 1;
  for (auto& q : y) den = lcm(den, q.get_den());
  IntVec num;
  for (auto& q : y) num.push_back(q.get_num() * (den / q.get_den()));
  return FieldElement(num, den * x.den);
}

IdealHNF CoveringDatum::norm_to_base(const IdealHNF& A) const {
  auto v = K_.classes->factor(A);
  if (!v) fail(ErrorKind::NotSmooth, "ideal " + A.str() + " does not factor over K's factor base");
  std::vector<PrimeIdeal> fall = F_.classes->factor_base();
  fall.insert(fall.end(), F_.sigma.begin(), F_.sigma.end());
  std::vector<long> e(fall.size(), 0);
  for (std::size_t i = 0; i < v->size(); ++i) e[below_[i].first] += below_[i].second * (*v)[i].get_si();
  return ideal_product(base(), fall, e);
}

CoveringDatum validate_covering(const CoveringInput& in, const CoveringOptions& opt, std::vector<CheckRecord>* log) {
  CoveringDatum c;
  Collector col{c.checks_, {}};
  const NumberField& F = *in.F.field;
  const NumberField& K = *in.K.field;
  c.F_.field = in.F.field;
  c.K_.field = in.K.field;

  bool shape = col.run("covering degree", [&] {
    if (K.degree() % F.degree() != 0) fail(ErrorKind::ValidationError, "[K:Q] is not a multiple of [F:Q]");
    c.n_ = K.degree() / F.degree();
    if (c.n_ < 2) fail(ErrorKind::ValidationError, "covering degree must be at least 2");
    c.delta_ = FiniteGroup(in.table);
    if (c.delta_.order() != c.n_)
      fail(ErrorKind::ValidationError, "|Delta| = " + std::to_string(c.delta_.order()) + " but [K:F] = " +
                                           std::to_string(c.n_));
    return "n = " + std::to_string(c.n_);
  });
  bool emb = col.run("embedding", [&] {
    c.emb_ = FieldEmbedding(F, K, in.embedding_image);
    return "image of F's generator: " + K.power_str(in.embedding_image);
  });
  bool autos = shape && emb && col.run("galois action", [&] {
    if (in.automorphisms.size() != static_cast<std::size_t>(c.n_))
      fail(ErrorKind::ValidationError, "expected " + std::to_string(c.n_) + " automorphisms");
    for (auto& im : in.automorphisms) c.autos_.emplace_back(K, im);
    if (!(c.autos_[0] == FieldAutomorphism(K, K.theta())))
      fail(ErrorKind::ValidationError, "automorphism 0 is not the identity");
    FieldElement gF = in.embedding_image;
    for (int i = 0; i < c.n_; ++i) {
      if (c.autos_[i].apply(gF) != gF)
        fail(ErrorKind::ValidationError, "automorphism " + std::to_string(i) + " moves the image of F");
      for (int j = 0; j < c.n_; ++j) {
        if (i < j && c.autos_[i] == c.autos_[j])
          fail(ErrorKind::ValidationError, "automorphisms " + std::to_string(i) + " and " + std::to_string(j) +
                                               " coincide");
        if (!(compose(c.autos_[j], c.autos_[i], K) == c.autos_[c.delta_.mul(i, j)]))
          fail(ErrorKind::ValidationError, "composition " + std::to_string(i) + "*" + std::to_string(j) +
                                               " disagrees with the group table");
      }
    }
    return std::to_string(c.n_) + " automorphisms fix F and match the table";
  });
  if (!shape) col.skip("galois action", "covering degree failed");

  bool sigma = emb && col.run("sigma", [&] {
    if (!in.archimedean_all) fail(ErrorKind::ValidationError, "sigma must contain all archimedean places");
    c.F_.sigma = in.sigma_F;
    for (auto& P : in.sigma_F) {
      IdealHNF ext = c.extend(P.ideal);
      for (auto& Q : primes_above(K, P.p, in.K.factor_base))
        if (valuation(K, Q, ext) > 0) c.K_.sigma.push_back(Q);
    }
    return "finite primes of F: " + join_labels(c.F_.sigma) + "; of K: " + join_labels(c.K_.sigma);
  });

  bool ram = autos && sigma && col.run("ramification inside sigma", [&] {
    Int dFn = 1;
    for (int i = 0; i < c.n_; ++i) dFn *= F.discriminant();
    if (K.discriminant() % dFn != 0)
      fail(ErrorKind::ValidationError, "disc(F)^n does not divide disc(K)");
    std::vector<PrimeIdeal> fknown = in.F.factor_base;
    fknown.insert(fknown.end(), in.sigma_F.begin(), in.sigma_F.end());
    std::string found;
    for (auto& p : prime_divisors(K.discriminant() / dFn)) {
      auto kp = primes_above(K, p, in.K.factor_base);
      for (auto& P : primes_above(F, p, fknown)) {
        IdealHNF ext = c.extend(P.ideal);
        bool ramified = false;
        for (auto& Q : kp) ramified = ramified || valuation(K, Q, ext) > 1;
        if (!ramified) continue;
        c.ramified_.push_back(p);
        found += (found.empty() ? "" : ", ") + P.label;
        bool in_sigma = false;
        for (auto& S : in.sigma_F) in_sigma = in_sigma || S == P;
        if (!in_sigma) fail(ErrorKind::ValidationError, "prime " + P.label + " ramifies in K but is not in sigma");
      }
    }
    bool real_ram = F.r1() > 0 && K.r1() < c.n_ * F.r1();
    c.inf_ram_ = real_ram ? "real" : "none";
    if (c.inf_ram_ != in.infinite_ramification)
      fail(ErrorKind::ValidationError, "declared infinite ramification '" + in.infinite_ramification +
                                           "' but computed '" + c.inf_ram_ + "'");
    return "ramified finite primes: " + (found.empty() ? std::string("none") : found) +
           "; real places ramified: " + (real_ram ? "yes" : "no");
  });
  (void)ram;

  bool cgF = sigma && col.run("class group F", [&] {
    c.F_.classes = std::make_shared<const ClassGroupData>(in.F.field, in.F.factor_base, in.F.relations,
                                                          in.F.witnesses, c.F_.sigma);
    return "Cl = " + c.F_.classes->group().structure() + ", witnesses and Minkowski coverage verified";
  });
  bool cgK = sigma && col.run("class group K", [&] {
    c.K_.classes = std::make_shared<const ClassGroupData>(in.K.field, in.K.factor_base, in.K.relations,
                                                          in.K.witnesses, c.K_.sigma);
    return "Cl = " + c.K_.classes->group().structure() + ", witnesses and Minkowski coverage verified";
  });
  if (cgF && cgK)
    col.run("factor base compatibility", [&] {
      for (auto& P : c.F_.classes->factor_base())
        if (!c.K_.classes->factor(c.extend(P.ideal)))
          fail(ErrorKind::ValidationError, "extension of " + P.label + " does not factor over K's factor base");
      std::vector<PrimeIdeal> fall = c.F_.classes->factor_base();
      fall.insert(fall.end(), c.F_.sigma.begin(), c.F_.sigma.end());
      std::vector<PrimeIdeal> kall = c.K_.classes->factor_base();
      kall.insert(kall.end(), c.K_.sigma.begin(), c.K_.sigma.end());
      for (auto& Q : kall) {
        bool found = false;
        for (std::size_t i = 0; i < fall.size() && !found; ++i) {
          if (fall[i].p != Q.p || valuation(K, Q, c.extend(fall[i].ideal)) == 0) continue;
          c.below_.emplace_back(i, Q.f / fall[i].f);
          found = true;
        }
        if (!found) fail(ErrorKind::ValidationError, "no listed prime of F lies below " + Q.label);
      }
      return "factor bases are closed under extension and contraction";
    });
  if (cgF)
    col.run("saturation sweep F", [&] {
      c.F_.saturation = validate_saturation(*c.F_.classes, opt.saturation);
      return "height " + std::to_string(c.F_.saturation.height) + ", " + std::to_string(c.F_.saturation.tested) +
             " elements, " + std::to_string(c.F_.saturation.smooth) + " smooth";
    });
  if (cgK)
    col.run("saturation sweep K", [&] {
      c.K_.saturation = validate_saturation(*c.K_.classes, opt.saturation);
      return "height " + std::to_string(c.K_.saturation.height) + ", " + std::to_string(c.K_.saturation.tested) +
             " elements, " + std::to_string(c.K_.saturation.smooth) + " smooth";
    });
  auto unit_check = [&](const char* name, FieldData& fd, const FieldInput& fi) {
    col.run(name, [&] {
      fd.units = std::make_shared<const SUnitLattice>(fi.field, fi.torsion, fi.torsion_order, fi.free_units,
                                                      fd.sigma, opt.units);
      std::string primes;
      for (auto& p : prime_divisors(Int(c.n_))) {
        fd.units->certify_saturation(p.get_si());
        primes += (primes.empty() ? "" : ",") + p.get_str();
      }
      return "w = " + std::to_string(fd.units->torsion_order()) + ", rank " + std::to_string(fd.units->rank()) +
             ", saturated at " + primes;
    });
  };
  if (sigma && shape) {
    unit_check("units F", c.F_, in.F);
    unit_check("units K", c.K_, in.K);
  }

  if (log) *log = c.checks_;
  if (col.failures.size() == 1) throw col.failures[0];
  if (!col.failures.empty()) {
    std::string msg;
    for (auto& e : col.failures) msg += (msg.empty() ? "" : "; ") + std::string(e.what());
    fail(ErrorKind::ValidationError, msg);
  }
  return c;
}

}  // namespace capk
