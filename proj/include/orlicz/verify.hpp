#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/record.hpp"

namespace orlicz {

struct VerifyConfig {
  std::uint64_t seed = 1;
  /// Threshold overrides; unset means the built-in default.
  std::optional<double> norm_tol;   // Luxemburg vs p-norm, relative to 1 + ‖f‖_p
  std::optional<double> gap_tol;    // duality gaps and AVaR oracle agreement
  std::optional<double> fatou_tol;  // liminf slack
  int max_iterations = 500;         // sweep cap for numeric ascent
  std::size_t truncation = 1024;    // atoms of the truncated countable space
};

struct CriterionResult {
  std::string key;
  std::string title;
  bool pass = false;
  /// Failed only because an override tightened a threshold below its default.
  bool tolerance_induced = false;
  long long cases = 0;
  Record metrics;
};

struct VerifySummary {
  std::vector<CriterionResult> criteria;
  bool all_pass = false;
  Record to_record() const;
};

/// Runs the desk-scale verification suite (ten property checks with
/// independent oracles). Deterministic for a fixed config.
VerifySummary verify_all(const VerifyConfig& config);

}  // namespace orlicz
