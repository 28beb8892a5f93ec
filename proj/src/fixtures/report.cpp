#include "capk/fixtures/report.hpp"

#include "capk/errors.hpp"

namespace capk {

namespace {

std::string str(const Int& x) { return x.get_str(); }
std::string str(long x) { return std::to_string(x); }

Json ints(const IntVec& v) {
  Json a = Json::array();
  for (auto& x : v) a.push_back(str(x));
  return a;
}

Json elem(const NumberField& K, const FieldElement& x) { return K.power_str(x); }

Json labels(const std::vector<PrimeIdeal>& ps) {
  Json a = Json::array();
  for (auto& P : ps) a.push_back(P.label);
  return a;
}

Json saturation_json(const SaturationReport& s) {
  Json j;
  j["requested_height"] = str(s.requested_height);
  j["height"] = str(s.height);
  j["capped"] = s.capped;
  j["tested"] = std::to_string(s.tested);
  j["smooth"] = std::to_string(s.smooth);
  j["passed"] = s.passed;
  return j;
}

Json field_json(const FieldData& fd) {
  const NumberField& K = *fd.field;
  Json j;
  j["label"] = K.label();
  j["degree"] = str(long(K.degree()));
  j["discriminant"] = str(K.discriminant());
  j["signature"] = Json::array({str(long(K.r1())), str(long(K.r2()))});
  j["sigma"] = labels(fd.sigma);
  j["class_group"] = group_json(fd.classes->group());
  j["class_number"] = str(fd.classes->group().order());
  j["torsion_order"] = str(fd.units->torsion_order());
  j["unit_rank"] = str(long(fd.units->rank()));
  j["saturation"] = saturation_json(fd.saturation);
  return j;
}

Json classgroup_json(const FieldData& fd) {
  const ClassGroupData& cg = *fd.classes;
  Json j;
  j["group"] = group_json(cg.group());
  j["factor_base"] = labels(cg.factor_base());
  j["relations"] = matrix_json(cg.relations());
  Json w = Json::array();
  for (auto& x : cg.witnesses()) w.push_back(elem(cg.field(), x));
  j["witnesses"] = w;
  j["minkowski_bound_squared"] = cg.minkowski_bound_squared().get_str();
  j["covered_rational_primes"] = ints(cg.covered_rational_primes());
  j["saturation"] = saturation_json(fd.saturation);
  return j;
}

Json units_json(const FieldData& fd, int n) {
  const SUnitLattice& U = *fd.units;
  Json j;
  j["torsion_generator"] = elem(U.field(), U.torsion_generator());
  j["torsion_order"] = str(U.torsion_order());
  Json f = Json::array();
  for (auto& u : U.free_generators()) f.push_back(elem(U.field(), u));
  j["free_generators"] = f;
  j["group"] = group_json(U.group());
  j["mod_n"] = group_json(U.mod_n(n));
  return j;
}

Json kernel_json(const CapitulationKernel& kj, const CoveringDatum& cov) {
  Json j;
  j["j_matrix"] = matrix_json(kj.j.matrix());
  j["kernel"] = group_json(kj.kernel.group());
  j["kernel_invariants"] = ints(kj.kernel.group().invariant_factors());
  Json g = Json::array();
  for (auto& k : kj.generators) {
    Json e;
    e["class"] = ints(k.class_coords);
    e["ideal"] = k.ideal.str();
    e["extended_ideal"] = cov.extend(k.ideal).str();
    e["witness"] = elem(cov.top(), k.witness);
    g.push_back(e);
  }
  j["generators"] = g;
  Json pw = Json::array();
  for (auto& k : kj.prime_witnesses)
    pw.push_back({{"ideal", k.ideal.str()}, {"witness", elem(cov.top(), k.witness)}});
  j["capitulating_primes"] = pw;
  j["killed_by_n"] = kj.killed_by_n;
  return j;
}

Json expectation(const std::string& key, const Json& expected, const Json& computed) {
  return Json{{"key", key}, {"expected", expected}, {"computed", computed}, {"matches", expected == computed}};
}

}  // namespace

std::optional<Command> command_from_name(const std::string& s) {
  for (Command c : {Command::Validate, Command::ClassGroup, Command::Units, Command::Capitulation,
                    Command::Cohomology, Command::VerifySequence})
    if (s == command_name(c)) return c;
  return std::nullopt;
}

const char* command_name(Command c) {
  switch (c) {
    case Command::Validate: return "validate";
    case Command::ClassGroup: return "classgroup";
    case Command::Units: return "units";
    case Command::Capitulation: return "capitulation";
    case Command::Cohomology: return "cohomology";
    case Command::VerifySequence: return "verify-sequence";
  }
  return "?";
}

int exit_code_for(ErrorKind k, bool during_validation) {
  if (k == ErrorKind::RecoveryFailure || k == ErrorKind::InternalOverflow) return kExitResource;
  return during_validation ? kExitValidation : kExitExactness;
}

Json group_json(const FGAbGroup& g) {
  Json j;
  j["structure"] = g.structure();
  j["invariants"] = ints(g.invariant_factors());
  j["free_rank"] = str(long(g.free_rank()));
  j["order"] = g.is_finite() ? str(g.order()) : "infinite";
  return j;
}

Json matrix_json(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(ints(m.row(i)));
  return a;
}

std::string render_sequence(const SequenceReport& r) {
  std::string s = "0 → " + r.terms[0].structure();
  for (std::size_t i = 0; i < 4; ++i) s += " →(" + r.map_names[i] + ") " + r.terms[i + 1].structure();
  return s;
}

Json sequence_json(const SequenceReport& r, const CoveringDatum& cov) {
  const NumberField& F = cov.base();
  const NumberField& K = cov.top();
  Json j;
  j["n"] = str(long(r.n));
  j["sequence"] = render_sequence(r);
  Json terms = Json::array();
  for (std::size_t i = 0; i < 5; ++i) {
    Json t{{"name", r.term_names[i]}};
    t.update(group_json(r.terms[i]));
    t["killed_by_n"] = r.killed_by_n[i];
    terms.push_back(t);
  }
  j["terms"] = terms;
  Json maps = Json::array();
  for (std::size_t i = 0; i < 4; ++i)
    maps.push_back({{"name", r.map_names[i]},
                    {"source", r.term_names[i]},
                    {"target", r.term_names[i + 1]},
                    {"matrix", matrix_json(r.maps[i].matrix())}});
  j["maps"] = maps;
  Json ex = Json::array();
  for (auto& v : r.verdicts)
    ex.push_back({{"node", r.term_names[v.node - 1]},
                  {"composition_zero", v.composition_zero},
                  {"kernel_equals_image", v.kernel_equals_image}});
  j["exactness"] = ex;
  j["exact"] = r.exact;
  j["convention"] = r.convention == Convention::Direct ? "direct" : "inverse";
  j["inverse_tried"] = r.inverse_tried;
  j["kernel_invariants"] = ints(r.kernel.kernel.group().invariant_factors());
  j["capitulation_kernel"] = kernel_json(r.kernel, cov);

  Json t1 = Json::array();
  for (std::size_t i = 0; i < r.t1.units.size(); ++i)
    t1.push_back({{"unit", elem(F, r.t1.units[i])}, {"root", elem(K, r.t1.roots[i])}});
  j["term1_roots"] = t1;

  Json psi;
  psi["units_mod_n"] = group_json(r.psi.units_mod_n);
  psi["psi"] = group_json(r.psi.psi.group());
  psi["psi_generators"] = matrix_json(r.psi.psi.generators());
  psi["psi_is_everything"] = r.psi.psi_is_everything;
  psi["quotient"] = group_json(r.psi.quotient.group);
  psi["index"] = str(r.psi.index);
  j["psi"] = psi;

  const H1Comparison& c = r.comparison;
  Json h1;
  h1["group"] = group_json(c.h1.group);
  h1["theta"] = matrix_json(c.theta.matrix());
  h1["omega"] = matrix_json(c.omega.matrix());
  h1["orders_equal"] = c.orders_equal;
  h1["bijective"] = c.bijective;
  Json certs = Json::array();
  for (auto& ce : c.certificates)
    certs.push_back({{"theta", elem(K, ce.theta)},
                     {"attempts", str(long(ce.attempts))},
                     {"resolvent", elem(K, ce.b)},
                     {"kernel_coords", ints(ce.kernel_coords)},
                     {"coboundary_unit", elem(K, ce.t)},
                     {"beta", elem(F, ce.beta)}});
  h1["certificates"] = certs;
  j["h1_units"] = h1;

  Json sw = Json::array();
  for (auto& w : r.snake_witnesses)
    sw.push_back({{"x", elem(K, w.x)}, {"alpha", elem(F, w.alpha)}, {"u", elem(K, w.u)}});
  j["snake_witnesses"] = sw;

  j["corollary"] = {{"applies", r.corollary_applies},
                    {"isomorphism", r.corollary_isomorphism},
                    {"bound", r.corollary_bound},
                    {"kernel_order", str(r.kernel.kernel.group().order())},
                    {"index", str(r.psi.index)}};
  Json rs = Json::array();
  for (auto& e : r.rescores)
    rs.push_back({{"prime", e.prime}, {"ideal_identity", e.ideal_identity}, {"class_identity", e.class_identity}});
  j["norm_of_extended_ideals"] = rs;
  Json nu = Json::array();
  for (auto& e : r.norm_units) nu.push_back({{"unit", e.unit}, {"holds", e.holds}});
  j["norm_of_base_units"] = nu;
  j["fuzz"] = {{"map3", {{"trials", std::to_string(r.fuzz3.trials)}, {"stable", std::to_string(r.fuzz3.stable)}}},
               {"map4", {{"trials", std::to_string(r.fuzz4.trials)}, {"stable", std::to_string(r.fuzz4.stable)}}}};
  j["open_questions"] = {{"hasse_principle", r.hasse_principle}};
  j["verified"] = r.all_verified();
  return j;
}

RunResult run_command(Command cmd, const std::string& path, const RunOptions& opt) {
  RunResult res;
  Json& rep = res.report;
  rep["format_version"] = std::to_string(kReportFormatVersion);
  rep["command"] = command_name(cmd);
  rep["fixture"] = path;
  Json provenance;
  provenance["tool_version"] = kToolVersion;
  provenance["height_bound"] = str(opt.height_bound);
  provenance["precision_ceiling"] = std::to_string(opt.precision_ceiling);

  auto finish = [&](int code, const std::string& why) {
    res.exit_code = code;
    res.first_failure = why;
    rep["provenance"] = provenance;
    rep["exit_code"] = std::to_string(code);
    return res;
  };

  FixtureFile file;
  try {
    file = load_fixture(path);
  } catch (const Error& e) {
    rep["validation"] = {{"status", "failed"}, {"error", e.what()}};
    return finish(exit_code_for(e.kind(), true), e.what());
  }
  std::uint64_t seed = opt.seed.value_or(file.seed);
  rep["name"] = file.name;
  provenance["seed"] = std::to_string(seed);

  CoveringOptions copt;
  copt.saturation.height = opt.height_bound;
  copt.units.precision_ceiling = opt.precision_ceiling;
  std::vector<CheckRecord> log;
  CoveringDatum cov;
  Json val;
  auto checks = [&] {
    Json a = Json::array();
    for (auto& c : log) a.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return a;
  };
  try {
    CoveringInput in = covering_input(file);
    cov = validate_covering(in, copt, &log);
  } catch (const Error& e) {
    if (log.empty()) log.push_back({"fields and primes", false, e.what()});
    val["status"] = "failed";
    val["checks"] = checks();
    val["error"] = e.what();
    rep["validation"] = val;
    return finish(exit_code_for(e.kind(), true), e.what());
  }
  val["status"] = "passed";
  val["checks"] = checks();
  val["n"] = str(long(cov.degree()));
  val["F"] = field_json(cov.F());
  val["K"] = field_json(cov.K());
  Json rp = Json::array();
  for (auto& p : cov.ramified_rational_primes()) rp.push_back(str(p));
  val["ramified_rational_primes"] = rp;
  val["infinite_ramification"] = cov.infinite_ramification();
  val["residual_risk"] = "saturation sweep refutes but cannot prove completeness of the relation lattices";
  rep["validation"] = val;

  Json comp;
  Json expect = Json::array();
  const Expectations& ex = file.expectations;
  if (ex.class_number_F) expect.push_back(expectation("class_number_F", str(*ex.class_number_F), val["F"]["class_number"]));
  if (ex.class_number_K) expect.push_back(expectation("class_number_K", str(*ex.class_number_K), val["K"]["class_number"]));
  if (ex.torsion_order_K)
    expect.push_back(expectation("torsion_order_K", str(*ex.torsion_order_K), val["K"]["torsion_order"]));
  if (ex.unit_rank_K) expect.push_back(expectation("unit_rank_K", str(*ex.unit_rank_K), val["K"]["unit_rank"]));

  int code = kExitOk;
  std::string why;
  try {
    switch (cmd) {
      case Command::Validate: break;
      case Command::ClassGroup:
        comp["F"] = classgroup_json(cov.F());
        comp["K"] = classgroup_json(cov.K());
        break;
      case Command::Units: {
        comp["F"] = units_json(cov.F(), cov.degree());
        comp["K"] = units_json(cov.K(), cov.degree());
        GModule U = units_module(cov);
        Json act = Json::array();
        for (int d = 0; d < cov.delta().order(); ++d) act.push_back(matrix_json(U.action(d)));
        comp["galois_action_on_K_units"] = act;
        break;
      }
      case Command::Capitulation: {
        CapitulationKernel kj = capitulation_kernel(cov);
        comp["capitulation_kernel"] = kernel_json(kj, cov);
        if (ex.kernel_invariants)
          expect.push_back(expectation("kernel_invariants", ints(*ex.kernel_invariants),
                                       ints(kj.kernel.group().invariant_factors())));
        break;
      }
      case Command::Cohomology: {
        GModule U = units_module(cov);
        MuN mu = mu_n(cov, U);
        comp["mu_n_order"] = str(mu.order);
        comp["H1_mu_n"] = group_json(cohomology(mu.module, 1).group);
        comp["H2_mu_n"] = group_json(cohomology(mu.module, 2).group);
        comp["H1_units"] = group_json(cohomology(U, 1).group);
        comp["H2_units"] = group_json(cohomology(U, 2).group);
        break;
      }
      case Command::VerifySequence: {
        SequenceReport r = verify_sequence(cov, seed);
        comp = sequence_json(r, cov);
        if (ex.kernel_invariants)
          expect.push_back(expectation("kernel_invariants", ints(*ex.kernel_invariants),
                                       ints(r.kernel.kernel.group().invariant_factors())));
        if (ex.term_orders) {
          IntVec got;
          for (auto& t : r.terms) got.push_back(t.order());
          expect.push_back(expectation("term_orders", ints(*ex.term_orders), ints(got)));
        }
        if (!r.all_verified()) {
          code = kExitExactness;
          why = r.exact ? "a cross-check failed" : "sequence is not exact";
        }
        provenance["precision_reached"] = std::to_string(r.precision_used);
        break;
      }
    }
  } catch (const Error& e) {
    comp["error"] = e.what();
    code = exit_code_for(e.kind(), false);
    why = e.what();
  }
  for (auto& e : expect)
    if (!e["matches"].get<bool>() && code == kExitOk) {
      code = kExitExactness;
      why = "expectation " + e["key"].get<std::string>() + " does not match";
    }
  if (!provenance.contains("precision_reached"))
    provenance["precision_reached"] = std::to_string(std::max(cov.K().units->max_precision_used(),
                                                              cov.F().units->max_precision_used()));
  comp["expectations"] = expect;
  rep["computation"] = comp;
  return finish(code, why);
}

namespace {

bool scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>() ? "yes" : "no";
  return j.dump();
}

bool flat(const Json& j) {
  if (!j.is_array()) return false;
  for (auto& x : j)
    if (!scalar(x)) return false;
  return true;
}

void render(const Json& j, const std::string& pad, std::string& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = j.is_object() ? it.key() : "-";
    const Json& v = *it;
    if (scalar(v)) {
      out += pad + key + ": " + scalar_text(v) + "\n";
    } else if (flat(v)) {
      std::string s;
      for (auto& x : v) s += (s.empty() ? "" : " ") + scalar_text(x);
      out += pad + key + ": [" + s + "]\n";
    } else if (v.is_array() && !v.empty() && flat(v[0])) {
      out += pad + key + ":\n";
      for (auto& row : v) {
        std::string s;
        for (auto& x : row) s += (s.empty() ? "" : " ") + scalar_text(x);
        out += pad + "  [" + s + "]\n";
      }
    } else if (!j.is_object() && v.is_object()) {
      std::string item;
      render(v, pad + "  ", item);
      out += pad + "- " + item.substr(pad.size() + 2);
    } else {
      out += pad + key + ":\n";
      render(v, pad + "  ", out);
    }
  }
}

}  // namespace

std::string emit_report(const Json& report, Format f) {
  if (f == Format::Structured) return report.dump(2) + "\n";
  std::string out;
  if (report.contains("computation") && report["computation"].contains("sequence"))
    out += report["computation"]["sequence"].get<std::string>() + "\n\n";
  render(report, "", out);
  return out;
}

}  // namespace capk
