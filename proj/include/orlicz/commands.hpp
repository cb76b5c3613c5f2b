#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orlicz/convergence.hpp"
#include "orlicz/measure.hpp"
#include "orlicz/orlicz_function.hpp"
#include "orlicz/record.hpp"
#include "orlicz/risk.hpp"

namespace orlicz {

struct RunConfig {
  /// Applies to every tolerance kind that has no specific override.
  std::optional<double> tol;
  std::optional<double> bisection_tol;
  std::optional<double> gap_tol;
  std::optional<double> fatou_tol;
  std::uint64_t seed = 1;
  int max_iterations = 500;
  std::size_t truncation = 1024;
  Format format = Format::Json;

  double bisection() const { return bisection_tol ? *bisection_tol : tol.value_or(1e-10); }
  double gap() const { return gap_tol ? *gap_tol : tol.value_or(1e-6); }
  double fatou() const { return fatou_tol ? *fatou_tol : tol.value_or(1e-9); }
  /// Throws DomainError on negative tolerances or nonpositive caps.
  void check() const;
};

/// A finished command: its report plus the soft exit status (0 success,
/// 3 numeric target missed, 5 property violation found). Hard failures are
/// thrown as orlicz::Error.
struct CommandResult {
  Record record;
  int exit_code = 0;
};

CommandResult cmd_norm(const Rv& f, const OrliczFunction& phi, const RunConfig& cfg);
CommandResult cmd_represent(const Rv& f, const RiskFunctional& risk, const OrliczFunction& phi, bool force_numeric,
                            const RunConfig& cfg);
CommandResult cmd_conjugate(const OrliczFunction& phi, double s_max, std::size_t points, const RunConfig& cfg);
CommandResult cmd_classify(const OrliczFunction& phi, bool finite_measure, const RunConfig& cfg);
/// Families without a limit are taken to converge to `limit`.
CommandResult cmd_fatou(const RiskFunctional& risk, std::vector<SequenceFamily> families, const Rv& limit,
                        const RunConfig& cfg);
CommandResult cmd_extract(const SequenceFamily& family, const Rv& f, const OrliczFunction& phi, const RunConfig& cfg);
/// On success `sequence` (when given) receives the hull sequence.
CommandResult cmd_closure(std::span<const Rv> vertices, const Rv& f, const OrliczFunction& phi, std::size_t length,
                          const RunConfig& cfg, std::vector<Rv>* sequence = nullptr);
CommandResult cmd_verify_all(const RunConfig& cfg);

/// Truncated countable space on atoms 1..n with weights 1/(k(k+1)).
SpacePtr harmonic_truncation(std::size_t n);

}  // namespace orlicz
