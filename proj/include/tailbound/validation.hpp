#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tailbound::validation {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::string detail;
};

enum class Suite { quick, full };

/// Runs the acceptance criteria; on_result is called after each one.
std::vector<CriterionResult> run_suite(Suite suite, std::uint64_t seed,
                                       const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace tailbound::validation
