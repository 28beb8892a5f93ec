// capkern: validate covering fixtures and verify the capitulation sequence.
#include <future>
#include <iostream>

#include <CLI11.hpp>

#include "capk/errors.hpp"
#include "capk/fixtures/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Capitulation kernels of Galois coverings of number fields"};
  app.require_subcommand(1);
  capk::RunOptions opt;
  std::uint64_t seed = 0;
  std::string format = "text";
  bool batch = false;
  std::vector<std::string> files;

  for (auto cmd : {capk::Command::Validate, capk::Command::ClassGroup, capk::Command::Units,
                   capk::Command::Capitulation, capk::Command::Cohomology, capk::Command::VerifySequence}) {
    auto* sub = app.add_subcommand(capk::command_name(cmd));
    sub->add_option("fixtures", files, "fixture file(s)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "seed for randomized steps (default: the fixture's seed)");
    sub->add_option("--height-bound", opt.height_bound, "saturation sweep height")->check(CLI::Range(0L, 1000L));
    sub->add_option("--precision-ceiling", opt.precision_ceiling, "largest working precision in bits")
        ->check(CLI::Range(2L, 1L << 20));
    sub->add_option("--format", format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    sub->add_flag("--batch", batch, "process several fixtures concurrently");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : capk::kExitValidation;
  }
  auto* sub = app.get_subcommands().front();
  auto cmd = *capk::command_from_name(sub->get_name());
  if (sub->count("--seed")) opt.seed = seed;
  if (files.size() > 1 && !batch) {
    std::cerr << "several fixtures given; pass --batch\n";
    return capk::kExitValidation;
  }
  auto fmt = format == "structured" ? capk::Format::Structured : capk::Format::Text;

  std::vector<std::future<capk::RunResult>> jobs;
  for (auto& f : files)
    jobs.push_back(std::async(files.size() > 1 ? std::launch::async : std::launch::deferred,
                              [&, f] { return capk::run_command(cmd, f, opt); }));
  int code = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    capk::RunResult r = jobs[i].get();
    std::cout << capk::emit_report(r.report, fmt);
    if (!r.first_failure.empty()) std::cerr << files[i] << ": " << r.first_failure << "\n";
    code = std::max(code, r.exit_code);
  }
  return code;
}
