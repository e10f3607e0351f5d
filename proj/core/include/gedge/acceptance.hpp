#pragma once

// The acceptance suite: eleven end-to-end checks with fixed tolerances,
// shared by `gedge verify` and the acceptance test binary.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gedge {

enum class Tier { quick, full };

struct AcceptanceOptions {
  Tier tier = Tier::full;
  std::uint64_t seed = 20'201'107;
  unsigned workers = 0;  ///< 0 uses every hardware thread
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs every criterion in order, calling `on_result` (if set) as each one
/// finishes. A criterion that throws is reported as failed with the message.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& options,
    const std::function<void(const CriterionResult&)>& on_result = {});

/// One table row: id, PASS/FAIL, name, time and detail.
std::string format_result(const CriterionResult& r);

}  // namespace gedge
