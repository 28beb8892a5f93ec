#include <filesystem>
#include <fstream>
#include <regex>

#include "capk/errors.hpp"
#include "capk/fixtures/fixture.hpp"
#include "capk/fixtures/report.hpp"
#include "doctest.h"

using namespace capk;

namespace {

std::string dir() { return CAPK_FIXTURE_DIR; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string write_temp(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / ("capk_test_" + name + ".fix");
  std::ofstream(p) << text;
  return p.string();
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  auto i = s.find(from);
  REQUIRE(i != std::string::npos);
  return s.replace(i, from.size(), to);
}

// Message of the error thrown by fn, with its kind.
template <class Fn>
std::pair<std::optional<ErrorKind>, std::string> thrown(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return {e.kind(), e.what()};
  }
  return {std::nullopt, ""};
}

// Q -> Q(sqrt 5), Sigma = {5}; basis 1, (1 + sqrt 5)/2.
const char* kRealQuadratic = R"(format_version = 1
name = q-sqrt5
seed = 3

[field F]
label = Q
polynomial = 0 1
basis = 1
discriminant = 1
signature = 1 0

[field K]
label = Q(sqrt5)
polynomial = -5 0 1
basis = 1 0 | 1/2 1/2
discriminant = 5
signature = 2 0

[embedding]
image = 0 0

[galois]
order = 2
table = 0 1 | 1 0
automorphism = -1 2
automorphism = 1 -2

[sigma]
prime = 5 : 0
archimedean = all
infinite_ramification = none

[units F]
torsion = -1 : 2
free = 5

[units K]
torsion = -1 0 : 2
free = 0 1
free = -1 2
)";

void leaves(const Json& j, std::vector<std::string>& out) {
  if (j.is_string()) out.push_back(j.get<std::string>());
  else if (j.is_object() || j.is_array())
    for (auto& x : j) leaves(x, out);
}

}  // namespace

TEST_CASE("fixtures parse and round-trip") {
  for (auto name : {"q_qi", "fixture_a", "fixture_b", "corrupt_unit"}) {
    FixtureFile f = load_fixture(dir() + "/" + name + ".fix");
    std::string s = serialize_fixture(f);
    FixtureFile g = parse_fixture(s);
    CHECK(g == f);
    CHECK(serialize_fixture(g) == s);
  }
  FixtureFile a = load_fixture(dir() + "/fixture_a.fix");
  CHECK(a.name == "fixture-a");
  CHECK(a.seed == 20170401);
  CHECK(a.K.basis.rows() == 4);
  CHECK(a.automorphisms.size() == 2);
  CHECK(a.classgroup_F.relations.size() == 3);
  CHECK(a.expectations.kernel_invariants == std::optional<std::vector<Int>>(IntVec{2}));
  FixtureFile q = load_fixture(dir() + "/q_qi.fix");
  CHECK(q.expectations.kernel_invariants == std::optional<std::vector<Int>>(IntVec{}));
  CHECK(q.sigma.infinite_ramification == "real");
}

TEST_CASE("rational coordinates are kept exactly") {
  FixtureFile f = parse_fixture(kRealQuadratic);
  CHECK(f.K.basis(1, 0) == Rat(1, 2));
  FixtureFile g = parse_fixture(replace(kRealQuadratic, "free = 0 1", "free = 0 2/4"));
  CHECK(g.units_K.free[0][1] == Rat(1, 2));
  CHECK(element_from(g.units_K.free[0]) == FieldElement(IntVec{0, 1}, 2));
}

TEST_CASE("parse errors carry line and column") {
  std::string a = slurp(dir() + "/fixture_a.fix");
  struct Case {
    std::string text, where, what;
  };
  std::vector<Case> cases{
      {replace(a, "seed = 20170401", "sede = 20170401"), ":4:1:", "unknown top-level key"},
      {replace(a, "[embedding]", "[embeding]"), ":20:2:", "unknown section"},
      {replace(a, "image = 0 -1 0 2", "image = 0 -x 0 2"), ":21:11:", "expected a rational"},
      {replace(a, "discriminant = -20", "discriminant = -20\ndiscriminant = -20"), ":11:1:", "duplicate key"},
      {replace(a, "order = 2\n", "order = 2\ncolour = red\n"), ":25:1:", "unknown key 'colour'"},
      {replace(a, "prime = 2 : 1 1", "prime = 2 1 1"), ":34:8:", "expected 'left : right'"},
      {replace(a, "free = 0 0 1 0", "free = 0 0 1/0 0"), ":54:12:", "zero denominator"},
      {replace(a, "table = 0 1 | 1 0", "table = 0 1 | 1 0 |"), ":25:20:", "empty table row"},
      {replace(a, "[field K]", "[field F]"), ":13:1:", "duplicate section"},
      {replace(a, "format_version = 1\n", ""), ":1:1:", "missing format_version"},
      {replace(a, "[units F]\ntorsion = -1 0 : 2\n", ""), "", "missing section [units F]"},
      {replace(a, "term_orders = 2 2 2 4 2", "term_orders = 2 2"), ":57:14:", "five entries"},
  };
  for (auto& c : cases) {
    auto [kind, msg] = thrown([&] { parse_fixture(c.text, "a.fix"); });
    CAPTURE(msg);
    CHECK(kind == ErrorKind::ParseError);
    CHECK(msg.find("a.fix" + c.where) != std::string::npos);
    CHECK(msg.find(c.what) != std::string::npos);
  }
  CHECK(thrown([] { load_fixture("/nonexistent/x.fix"); }).first == ErrorKind::ParseError);
}

TEST_CASE("fixture A validates with its certificates") {
  LoadedFixture lf = parse_and_validate(dir() + "/fixture_a.fix");
  const CoveringDatum& c = lf.datum;
  CHECK(c.F().classes->group().order() == 2);
  CHECK(c.K().units->torsion_order() == 4);
  CHECK(c.K().units->rank() == 1);
  for (auto& r : c.checks()) CHECK(r.passed);
}

TEST_CASE("trivial covering validates with 2 ramified") {
  LoadedFixture lf = parse_and_validate(dir() + "/q_qi.fix");
  CHECK(lf.datum.ramified_rational_primes() == std::vector<Int>{2});
  CHECK(lf.datum.K().sigma.size() == 1);
}

TEST_CASE("real quadratic covering and a fake unit") {
  CoveringDatum c = validate_covering(covering_input(parse_fixture(kRealQuadratic)));
  CHECK(c.K().units->rank() == 2);
  CHECK(c.infinite_ramification() == "none");
  // 1 + sqrt 5 has norm -4
  std::string fake = replace(kRealQuadratic, "free = 0 1", "free = 0 2");
  auto [kind, msg] = thrown([&] { validate_covering(covering_input(parse_fixture(fake))); });
  CHECK(kind == ErrorKind::NotAUnit);
  CHECK(msg.find("1 + 1*t^1") != std::string::npos);
}

TEST_CASE("corrupted fixtures are rejected") {
  std::string q = slurp(dir() + "/q_qi.fix");
  std::string a = slurp(dir() + "/fixture_a.fix");
  auto check = [](const std::string& text, ErrorKind want, const std::string& fragment) {
    std::vector<CheckRecord> log;
    auto [kind, msg] = thrown([&] { validate_covering(covering_input(parse_fixture(text)), {}, &log); });
    CAPTURE(msg);
    CHECK(kind == want);
    CHECK(msg.find(fragment) != std::string::npos);
    return log;
  };
  check(replace(a, "free = 0 0 1 0", "free = 1 1 0 0"), ErrorKind::NotAUnit, "is not a sigma-unit");
  check(replace(q, "infinite_ramification = real", "infinite_ramification = none"), ErrorKind::ValidationError,
        "declared infinite ramification");
  check(replace(a, "archimedean = all", "archimedean = none"), ErrorKind::ValidationError, "archimedean");
  check(replace(a, "automorphism = 0 -1 0 1", "automorphism = 0 1 0 -1"), ErrorKind::ValidationError,
        "automorphism");
  check(replace(a, "relation = 2 0 0 : 2 0", "relation = 2 0 0 : 3 0"), ErrorKind::WitnessMismatch, "");
  check(replace(a, "torsion = 0 1 0 0 : 4", "torsion = 0 1 0 0 : 2"), ErrorKind::ValidationError, "");
  check(replace(a, "image = 0 -1 0 2", "image = 0 -1 0 3"), ErrorKind::ValidationError, "");
  // two independent failures are reported together
  auto log = check(replace(replace(q, "prime = 2 : 0\n", ""), "free = 1 1", "free = 0 1"), ErrorKind::ValidationError,
                   "ramifies in K but is not in sigma");
  int failed = 0;
  for (auto& r : log) failed += !r.passed;
  CHECK(failed >= 2);
}

TEST_CASE("run_command exit codes") {
  RunOptions opt;
  CHECK(run_command(Command::Validate, dir() + "/q_qi.fix", opt).exit_code == kExitOk);
  RunResult bad = run_command(Command::Validate, dir() + "/corrupt_unit.fix", opt);
  CHECK(bad.exit_code == kExitValidation);
  CHECK(bad.first_failure.find("NotAUnit") != std::string::npos);
  CHECK(bad.report["validation"]["status"] == "failed");
  std::string broken = write_temp("broken", "format_version = 1\n[nonsense]\n");
  CHECK(run_command(Command::Validate, broken, opt).exit_code == kExitValidation);

  std::string a = slurp(dir() + "/fixture_a.fix");
  std::string wrong = write_temp("wrong_expect", replace(a, "term_orders = 2 2 2 4 2", "term_orders = 2 2 2 2 2"));
  RunResult r = run_command(Command::VerifySequence, wrong, opt);
  CHECK(r.exit_code == kExitExactness);
  CHECK(r.first_failure.find("term_orders") != std::string::npos);
  bool found = false;
  for (auto& e : r.report["computation"]["expectations"])
    if (e["key"] == "term_orders") {
      found = true;
      CHECK(e["matches"] == false);
      CHECK(e["computed"] == Json::array({"2", "2", "2", "4", "2"}));
    }
  CHECK(found);

  CHECK(exit_code_for(ErrorKind::RecoveryFailure, true) == kExitResource);
  CHECK(exit_code_for(ErrorKind::InternalOverflow, false) == kExitResource);
  CHECK(exit_code_for(ErrorKind::NotAUnit, true) == kExitValidation);
  CHECK(exit_code_for(ErrorKind::ExactnessFailure, false) == kExitExactness);
}

TEST_CASE("every command runs on fixture A") {
  for (auto c : {Command::Validate, Command::ClassGroup, Command::Units, Command::Capitulation, Command::Cohomology,
                 Command::VerifySequence}) {
    CAPTURE(command_name(c));
    RunResult r = run_command(c, dir() + "/fixture_a.fix", {});
    CHECK(r.exit_code == kExitOk);
    CHECK(command_from_name(command_name(c)) == c);
  }
  Json coh = run_command(Command::Cohomology, dir() + "/fixture_a.fix", {}).report["computation"];
  CHECK(coh["H1_mu_n"]["order"] == "2");
  CHECK(coh["H2_mu_n"]["order"] == "2");
  CHECK(coh["H1_units"]["order"] == "2");
}

TEST_CASE("reports: structured and text carry the same data") {
  RunResult r = run_command(Command::VerifySequence, dir() + "/fixture_a.fix", {});
  std::string js = emit_report(r.report, Format::Structured);
  CHECK(js.find("\"kernel_invariants\": [\n      \"2\"\n    ]") != std::string::npos);
  CHECK(Json::parse(js) == r.report);
  std::string text = emit_report(r.report, Format::Text);
  CHECK(text.rfind("0 → Z/2 →(kummer) Z/2 →(inclusion) Z/2 →(snake) Z/2 x Z/2 →(transgression) Z/2\n", 0) == 0);
  std::vector<std::string> vals;
  leaves(r.report, vals);
  for (auto& v : vals) CHECK(text.find(v) != std::string::npos);
  // numbers are decimal strings throughout
  std::function<void(const Json&)> no_numbers = [&](const Json& j) {
    CHECK_FALSE(j.is_number());
    if (j.is_structured())
      for (auto& x : j) no_numbers(x);
  };
  no_numbers(r.report);
}

TEST_CASE("same seed gives byte-identical structured reports") {
  RunOptions opt;
  opt.seed = 12345;
  for (auto name : {"q_qi", "fixture_a"}) {
    auto a = emit_report(run_command(Command::VerifySequence, dir() + "/" + name + ".fix", opt).report,
                         Format::Structured);
    auto b = emit_report(run_command(Command::VerifySequence, dir() + "/" + name + ".fix", opt).report,
                         Format::Structured);
    CHECK(a == b);
  }
}
