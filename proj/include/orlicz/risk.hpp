#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orlicz/measure.hpp"

namespace orlicz {

using Values = std::span<const double>;

/// Slack used when testing membership in density sets (Σ w g = 1, bounds).
inline constexpr double kDensityTol = 1e-9;

/// A proper convex increasing functional φ: L_Φ(μ) → (−∞, ∞] on a discrete
/// space. Arguments are losses (larger is worse). The value kernels work on
/// raw coordinate spans aligned with the space's atom order.
class RiskFunctional {
public:
  explicit RiskFunctional(SpacePtr space) : space_(std::move(space)) {}
  virtual ~RiskFunctional() = default;

  virtual std::string name() const = 0;
  virtual double evaluate(Values f) const = 0;

  virtual bool declared_monotone() const { return true; }
  virtual bool declared_convex() const { return true; }
  /// A point with finite value.
  virtual std::vector<double> proper_witness() const { return std::vector<double>(space_->size(), 0.0); }

  /// φ*(g) = sup_f ⟨f, g⟩ − φ(f) when known in closed form.
  virtual std::optional<double> closed_form_conjugate(Values g) const;
  virtual bool has_closed_form_conjugate() const { return false; }
  /// A nonnegative g attaining φ(f) = ⟨f, g⟩ − φ*(g), when known.
  virtual std::optional<std::vector<double>> closed_form_maximizer(Values f) const;

  const MeasureSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }

  double operator()(const Rv& f) const;

private:
  SpacePtr space_;
};

using RiskPtr = std::shared_ptr<const RiskFunctional>;

/// (1/β) log Σ w e^{βf}; conjugate (1/β) Σ w g log g on densities.
RiskPtr entropic(double beta, SpacePtr space);
/// sup{⟨f, g⟩ : 0 ≤ g ≤ 1/α, Σ w g = 1}, evaluated by the greedy fill.
RiskPtr average_value_at_risk(double alpha, SpacePtr space);
/// max_i f_i; conjugate is the indicator of densities.
RiskPtr worst_case(SpacePtr space);
/// Σ w f; conjugate is the indicator of {g ≡ 1}.
RiskPtr expectation(SpacePtr space);
/// Σ w f², convex but not increasing. Negative control for validation.
RiskPtr non_monotone_control(SpacePtr space);
/// φ + c.
RiskPtr shifted(RiskPtr base, double c);
/// φ plus `jump` at exactly one point (and nowhere else). With jump > 0 the
/// result is not lower semicontinuous at that point.
RiskPtr point_jump(RiskPtr base, std::vector<double> at, double jump);

/// `entropic:beta=1`, `avar:alpha=0.05`, `worst_case`, `expectation`, `control:square`.
RiskPtr parse_risk_spec(std::string_view spec, SpacePtr space);

struct ValidationReport {
  bool monotone_ok = true;
  bool convex_ok = true;
  bool proper_ok = true;
  int monotone_violations = 0;
  int convex_violations = 0;
  /// Worst violation seen and the points that exhibit it (f ≤ h for
  /// monotonicity; the two endpoints for convexity).
  double worst_monotone_violation = 0.0;
  double worst_convex_violation = 0.0;
  std::vector<double> monotone_witness_low;
  std::vector<double> monotone_witness_high;
  std::vector<double> convex_witness_a;
  std::vector<double> convex_witness_b;
  bool ok() const noexcept { return monotone_ok && convex_ok && proper_ok; }
};

/// Samples ordered pairs f ≤ h and convex combinations; violations are
/// reported with witnesses, never thrown.
ValidationReport validate(const RiskFunctional& phi, int trials, std::uint64_t seed);

}  // namespace orlicz
