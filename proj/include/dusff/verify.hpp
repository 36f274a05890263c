#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dusff/types.hpp"

namespace dusff {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::vector<int> criteria;  // empty = all
  std::uint64_t seed = 20240901;
};

std::vector<int> all_criterion_ids();
std::string criterion_name(int id);

// Runs one criterion at its pinned tolerances.
CriterionResult run_criterion(int id, const VerifyOptions& opts);

// Runs the selected criteria, printing one pass/fail line each to `log`.
std::vector<CriterionResult> run_verification(const VerifyOptions& opts,
                                              std::ostream* log);

}  // namespace dusff
