#pragma once

// Seeded invariant suites behind `qcorr verify`.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace qcorr {

struct VerifyOptions {
  std::string suite = "all";  // core | measures | detector | all
  std::uint64_t seed = 1;
  double tolerance_scale = 1.0;  // multiplies every tolerance; a test hook
};

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Throws DomainError for an unknown suite name.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

/// Prints one line per check plus a summary; returns true when all passed.
bool report_verification(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace qcorr
