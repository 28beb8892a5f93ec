// Times the saturation sweep: serial reference against the OpenMP kernel.
#include <chrono>
#include <cstdio>

#include <CLI11.hpp>
#include <omp.h>

#include "capk/fixtures/fixture.hpp"

int main(int argc, char** argv) {
  CLI::App app{"saturation sweep benchmark"};
  std::string path = std::string(CAPK_FIXTURE_DIR) + "/fixture_b.fix";
  std::string which = "K";
  long height = 5;
  int repeat = 1;
  app.add_option("--fixture", path)->check(CLI::ExistingFile);
  app.add_option("--field", which)->check(CLI::IsMember({"F", "K"}));
  app.add_option("--height", height)->check(CLI::Range(0L, 1000L));
  app.add_option("--repeat", repeat)->check(CLI::Range(1, 100));
  CLI11_PARSE(app, argc, argv);

  capk::CoveringOptions opt;
  opt.saturation.height = 0;  // skip validation-time sweeps
  auto lf = capk::parse_and_validate(path, opt);
  const capk::ClassGroupData& cg = which == "F" ? *lf.datum.F().classes : *lf.datum.K().classes;

  auto time = [&](bool parallel, capk::SaturationReport& out) {
    double best = 1e300;
    for (int i = 0; i < repeat; ++i) {
      auto t0 = std::chrono::steady_clock::now();
      out = capk::sweep_box(cg, height, parallel);
      best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
  };
  capk::SaturationReport serial, parallel;
  double ts = time(false, serial), tp = time(true, parallel);
  bool same = serial.tested == parallel.tested && serial.smooth == parallel.smooth &&
              serial.passed == parallel.passed && serial.violation == parallel.violation;
  std::printf("field %s  height %ld  threads %d\n", which.c_str(), height, omp_get_max_threads());
  std::printf("tested %llu  smooth %llu  passed %s\n", static_cast<unsigned long long>(serial.tested),
              static_cast<unsigned long long>(serial.smooth), serial.passed ? "yes" : "no");
  std::printf("serial   %.3f s\nparallel %.3f s  speedup %.2f\n", ts, tp, ts / tp);
  std::printf("reports agree: %s\n", same ? "yes" : "no");
  return same ? 0 : 1;
}
