// Acceptance battery entry point. Runs every criterion at the scale the
// project pins (500 terms per calculus, size 25, seeds from 1, 500 pairs)
// and prints one PASS/FAIL line per criterion.

#include <cstring>
#include <iostream>

#include "lbx/suite.hpp"

int main(int argc, char** argv) {
  lbx::suite::SuiteOptions opt;  // defaults are the pinned scale
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--quick")) {
      opt.terms_per_calc = 60;
      opt.pairs = 60;
    }
  }
  auto report = lbx::suite::run_suite(opt, &std::cout);
  std::cout << "\n" << lbx::suite::report_table(report);
  return report.all_pass() ? 0 : 1;
}
