// Acceptance battery driver: one line per criterion, nonzero exit on any
// failure. The checks themselves live in the library so the CLI `verify`
// subcommand runs the identical battery.

#include <cstdio>

#include "rev/checks.hpp"

int main() {
  auto results = rev::run_all_checks();
  bool ok = true;
  int k = 0;
  for (const auto& r : results) {
    ++k;
    std::printf("[%2d/%zu] %s %s: %s\n", k, results.size(), r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    ok = ok && r.pass;
  }
  std::printf("%s\n", ok ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT");
  return ok ? 0 : 1;
}
