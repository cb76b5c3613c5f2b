#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orlicz/measure.hpp"
#include "orlicz/orlicz_function.hpp"
#include "orlicz/risk.hpp"

namespace orlicz {

enum class SequenceMode { NormConvergent, TravelingSpike, OrderConvergent, EscapingSpike, Custom };

const char* to_string(SequenceMode mode) noexcept;
/// `norm_convergent`, `traveling_spike`, `order_convergent`, `escaping_spike`, `custom`.
SequenceMode parse_sequence_mode(std::string_view text);

struct SequenceFamily {
  std::vector<Rv> terms;
  /// sup of the terms' Luxemburg norms.
  double norm_bound = 0.0;
  SequenceMode mode = SequenceMode::Custom;
  /// False for families built to escape every norm bound as the
  /// truncation grows; checks that need boundedness refuse them.
  bool declared_bounded = true;
  std::optional<Rv> limit;
};

/// Wraps explicit terms, computing the norm bound under Φ.
SequenceFamily make_family(std::vector<Rv> terms, const OrliczFunction& phi, std::optional<Rv> limit = std::nullopt,
                           SequenceMode mode = SequenceMode::Custom, bool declared_bounded = true);

/// Generated families (n = 1..length):
///   norm_convergent   f + 2⁻ⁿ·ξₙ, ξₙ uniform on [−1, 1] per atom
///   traveling_spike   f + c·χ_{atom n} while n ≤ N, then f
///   order_convergent  f + 2⁻ⁿ·F, F fixed with values in [1/2, 3/2]
///   escaping_spike    f + n·χ_{atom n mod N}, declared unbounded
SequenceFamily generate_sequence(const SpacePtr& space, const OrliczFunction& phi, const Rv& f, SequenceMode mode,
                                 std::size_t length, std::uint64_t seed, double spike_height = 1.0);

struct ExtractionOptions {
  /// Fewer selected levels than this is treated as a stalled pairing.
  std::size_t min_levels = 8;
  double ae_tol = 1e-9;
};

struct ExtractionReport {
  bool success = false;
  /// 0-based term indices α₁ < α₂ < ….
  std::vector<std::size_t> indices;
  std::vector<double> pairings;  // ⟨|f_k − f|, g₀⟩ for every input term
  std::vector<double> trace;     // tₙ over the selected subsequence
  bool trace_bound_ok = false;
  /// max over n of tₙ − 2⁻⁽ⁿ⁻¹⁾ (the bound holds when this is ≤ 1e-12).
  double worst_trace_excess = 0.0;
  bool pointwise_ok = false;
  AeReport ae;
  /// First level n with no qualifying term, and the index scanning stopped at.
  std::size_t stalled_level = 0;
  std::size_t stalled_index = 0;
  std::string reason;
};

ExtractionReport extract_ae_subsequence(const SequenceFamily& seq, const Rv& f, const Rv& g0, const Rv& f0,
                                        const ExtractionOptions& opts = {});

struct WstarReport {
  bool converges = false;
  double worst_tail = 0.0;
  std::size_t worst_test = 0;
  /// Per test function: max over the last quarter of |⟨fₙ − f, g⟩|.
  std::vector<double> tail_max;
  /// Per test function, over the last quarter: max ⟨(|fₙ−f| − f₀)⁺, |g|⟩
  /// and max ⟨|fₙ−f| ∧ f₀, |g|⟩.
  std::vector<double> truncation_tail;
  std::vector<double> dominated;
};

struct WstarOptions {
  double tol = 1e-8;
  /// Truncation level for the diagnostic; the constant 1 when absent.
  std::optional<Rv> f0;
};

/// Test functions must lie in the heart of Ψ (PreconditionError otherwise).
WstarReport wstar_limit_check(const SequenceFamily& seq, const Rv& f, std::span<const Rv> tests,
                              const OrliczFunction& psi, const WstarOptions& opts = {});

struct FatouReport {
  bool ok = true;
  int violations = 0;
  /// min over families of liminf φ(fₙ) − φ(f).
  double worst_margin = 0.0;
  std::size_t worst_family = 0;
  std::vector<double> margins;
  std::vector<double> liminf;
  std::vector<double> limit_value;
};

/// liminf is the minimum over the last quarter of the recorded terms.
FatouReport fatou_check(const RiskFunctional& phi, std::span<const SequenceFamily> families, double tol,
                        double ae_tol = 1e-9);

struct ClosureOptions {
  double hull_tol = 1e-9;
  int max_iterations = 10000;
  std::size_t length = 64;
  ExtractionOptions extraction{};
};

struct ClosureDemo {
  std::vector<double> barycentric;
  std::vector<double> projection;
  /// Luxemburg distance from f to its hull projection.
  double distance = 0.0;
  int projection_sweeps = 0;
  SequenceFamily family;
  /// ‖fₙ − f‖ per term and whether each meets (1 + 1/n)·dist + 1/n.
  std::vector<double> distances;
  bool distance_bound_ok = false;
  ExtractionReport extraction;
  bool certified = false;
};

/// Builds hull points fₙ → f for f in the closed convex hull of the vertices.
/// Refuses (PreconditionError, with the margin) when f is farther than
/// hull_tol from the hull.
ClosureDemo closure_demo(std::span<const Rv> vertices, const Rv& f, const OrliczFunction& phi,
                         const ClosureOptions& opts = {});

/// Family CSV: header `term_index,atom_id,value`, one row per atom per term.
std::vector<Rv> load_family_csv(const SpacePtr& space, const std::string& path);
void save_family_csv(std::span<const Rv> terms, const std::string& path);

}  // namespace orlicz
