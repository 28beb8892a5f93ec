#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "capk/capitulation/pipeline.hpp"
#include "capk/errors.hpp"
#include "capk/fixtures/fixture.hpp"

namespace capk {

inline constexpr const char* kToolVersion = "capkern 1.0.0";
inline constexpr int kReportFormatVersion = 1;

using Json = nlohmann::ordered_json;

enum class Command { Validate, ClassGroup, Units, Capitulation, Cohomology, VerifySequence };
enum class Format { Text, Structured };

std::optional<Command> command_from_name(const std::string& s);
const char* command_name(Command c);

struct RunOptions {
  std::optional<std::uint64_t> seed;  // defaults to the fixture's seed
  long height_bound = 12;
  mpfr_prec_t precision_ceiling = 1024;
};

enum ExitCode { kExitOk = 0, kExitValidation = 1, kExitExactness = 2, kExitResource = 3 };

struct RunResult {
  Json report;
  int exit_code = kExitOk;
  std::string first_failure;  // empty on success
};

int exit_code_for(ErrorKind k, bool during_validation);

RunResult run_command(Command cmd, const std::string& path, const RunOptions& opt);

// Text is rendered from the same Json, so both formats carry identical data.
std::string emit_report(const Json& report, Format f);
// "0 → A →(name) B ..." with invariant factors
std::string render_sequence(const SequenceReport& r);

Json group_json(const FGAbGroup& g);
Json matrix_json(const IntMatrix& m);
Json sequence_json(const SequenceReport& r, const CoveringDatum& cov);

}  // namespace capk
