#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace htsgd {

struct AcceptanceResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  int threads = 1;
  /// Criterion ids to run; empty runs all of them.
  std::vector<int> only;
};

inline constexpr int kAcceptanceCount = 11;

AcceptanceResult run_acceptance_criterion(int id, const AcceptanceOptions& options);
std::vector<AcceptanceResult> run_acceptance(const AcceptanceOptions& options);

/// "[PASS] 3 small-step lower bound (0.4 s): detail"
std::string format_result(const AcceptanceResult& result);

}  // namespace htsgd
