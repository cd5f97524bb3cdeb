#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace trireduce {

struct SuiteResult {
  std::string name;
  bool passed;
  // Largest residual observed and the tolerance it was held to.
  double worst;
  double tolerance;
};

inline constexpr std::uint64_t kDefaultCheckSeed = 20240917;

/// Runs the invariant suites of every module with a seeded generator.
/// Each tolerance is multiplied by `tolerance_scale`.
std::vector<SuiteResult> run_checks(std::uint64_t seed = kDefaultCheckSeed,
                                    double tolerance_scale = 1.0);

}  // namespace trireduce
