// Acceptance runner: one pass/fail line per criterion, nonzero exit on any
// failure. The slow optimizer reproduction can be widened to orders 7..10
// with --extended.

#include <cstdio>
#include <cstring>
#include <string>

#include "quasibell/selftest.hpp"

int main(int argc, char** argv) {
  quasibell::SelftestOptions opts;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--extended") opts.extended_orders = true;
    if (arg == "--jobs" && i + 1 < argc) opts.jobs = std::atoi(argv[++i]);
    if (arg == "--restarts" && i + 1 < argc) opts.restarts = std::atoi(argv[++i]);
    if (arg == "--seed" && i + 1 < argc) opts.seed = std::strtoull(argv[++i], nullptr, 10);
  }

  const auto results = quasibell::run_acceptance_checks(opts);
  int failures = 0;
  for (const auto& r : results) {
    std::printf("[%s] %-22s (%6.2f s)  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.seconds, r.detail.c_str());
    if (!r.passed) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
              results.size());
  return failures == 0 ? 0 : 1;
}
