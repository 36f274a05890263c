// Acceptance suite: one pass/fail line per criterion, non-zero exit on any
// failure. Criterion ids may be passed as arguments to run a subset.

#include <cstdlib>
#include <iostream>

#include "dusff/verify.hpp"

int main(int argc, char** argv) {
  dusff::VerifyOptions opts;
  for (int i = 1; i < argc; ++i) {
    opts.criteria.push_back(std::atoi(argv[i]));
  }
  const auto results = dusff::run_verification(opts, &std::cout);
  bool all = true;
  for (const auto& r : results) all &= r.passed;
  std::cout << (all ? "ALL PASS" : "FAILURES PRESENT") << " ("
            << results.size() << " criteria)\n";
  return all ? 0 : 1;
}
