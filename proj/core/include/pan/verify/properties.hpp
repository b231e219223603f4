#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pan::verify {

struct PropertyResult {
  std::string name;
  bool passed = false;
  /// Reported but never counted as a failure (e.g. a hypothesis that does not hold
  /// for the chosen parameters).
  bool informational = false;
  std::string detail;
};

struct VerifyOptions {
  double lambda1 = 5.0;
  double lambda2 = 0.5;
  std::uint64_t seed = 0;
};

std::vector<PropertyResult> run_properties(const VerifyOptions& options);

/// True iff every non-informational property passed.
bool all_passed(const std::vector<PropertyResult>& results);

}  // namespace pan::verify
