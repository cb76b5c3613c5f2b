#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace orlicz {

enum class OrliczKind { Power, ScaledPower, Linear, ExpYoung, LInfinityStep, Custom };

/// An Orlicz function Φ: [0,∞) → [0,∞], convex, increasing, left-continuous,
/// Φ(0) = 0 and not identically 0 or ∞. Immutable value type.
///
/// Catalog members:
///   power(p)          t^p, p > 1
///   scaled_power(p,c) c·t^p (c defaults to 1/p, the family closed under conjugation)
///   linear            t
///   exp_young         e^t − t − 1
///   linf_step         0 on [0,1], +∞ after (its space is L∞)
/// Custom functions carry an evaluator and a finiteness horizon T: values
/// beyond T are +∞ regardless of the evaluator.
class OrliczFunction {
public:
  using Evaluator = std::function<double(double)>;

  static OrliczFunction power(double p);
  static OrliczFunction scaled_power(double p, double c);
  static OrliczFunction scaled_power(double p);
  static OrliczFunction linear();
  static OrliczFunction exp_young();
  static OrliczFunction linf_step();
  static OrliczFunction custom(std::string label, Evaluator evaluator, double horizon);

  OrliczKind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return exponent_; }
  double coefficient() const noexcept { return coefficient_; }
  /// Sup of the set where Φ is finite (+inf when finite everywhere).
  double horizon() const noexcept { return horizon_; }
  const std::string& label() const noexcept { return label_; }
  bool is_catalog() const noexcept { return kind_ != OrliczKind::Custom; }

  /// Φ(t) without the domain check; t must be ≥ 0.
  double operator()(double t) const;

private:
  OrliczFunction() = default;

  OrliczKind kind_ = OrliczKind::Linear;
  double exponent_ = 1.0;
  double coefficient_ = 1.0;
  double horizon_ = 0.0;
  std::string label_;
  std::shared_ptr<const Evaluator> evaluator_;
};

/// Φ(t); throws DomainError for negative or NaN t.
double evaluate(const OrliczFunction& phi, double t);

/// The Young conjugate Ψ(s) = sup_{t≥0} (ts − Φ(t)). Closed forms for the
/// catalog; Custom functions get a Custom conjugate that evaluates
/// conjugate_value pointwise.
OrliczFunction conjugate(const OrliczFunction& phi);

/// Numeric sup_{t≥0} (st − Φ(t)) by bracket expansion and golden section.
/// Returns +inf when the objective keeps growing for 40 consecutive doublings.
double conjugate_value(const OrliczFunction& phi, double s);

enum class Verdict { Holds, Fails, Inconclusive };
const char* to_string(Verdict v) noexcept;

/// Conjunction over verdicts: any failure fails, else any inconclusive.
Verdict combine(Verdict a, Verdict b) noexcept;

enum class Delta2Regime { AtZero, AtInfinity };

struct Delta2Report {
  Verdict verdict = Verdict::Inconclusive;
  /// Estimated constant k with Φ(2u) ≤ k·Φ(u) in the regime (when it holds).
  double k = 0.0;
  /// A point u where the ratio blew up (when it fails).
  double witness_u = 0.0;
  /// True for catalog kinds, whose answer is known in closed form.
  bool exact = false;
  std::vector<double> grid;
  std::vector<double> ratios;
};

/// Δ₂ condition Φ(2u) ≤ k·Φ(u) for u ≥ u₀ (AtInfinity) or u ≤ u₀ (AtZero).
/// Exact for catalog kinds; a grid heuristic for Custom ones.
Delta2Report check_delta2(const OrliczFunction& phi, Delta2Regime regime, int sample_count = 64);

/// inf{t ≥ 0 : Φ(t) ≥ y} to absolute tolerance 1e-12.
double generalized_inverse(const OrliczFunction& phi, double y);

struct SlopeClass {
  double limit_slope = 0.0;  // lim Φ(t)/t, +inf allowed
  bool is_infinite_slope = false;
  bool estimated = false;
};

SlopeClass limit_slope(const OrliczFunction& phi);

struct SpaceClassification {
  Verdict reflexive = Verdict::Inconclusive;
  Verdict order_continuous = Verdict::Inconclusive;
  Verdict c_property_for_sigma_n = Verdict::Inconclusive;
  /// The C-property theorem applies: the conjugate satisfies Δ₂ in the
  /// regimes relevant to the measure.
  Verdict conjugate_delta2 = Verdict::Inconclusive;
  bool finite_measure = true;
};

/// Reflexivity, order continuity and C-property verdicts for L_Φ(μ) from
/// the Δ₂ behaviour of Φ and its conjugate. Infinite measures check both
/// regimes, finite measures only the one at infinity.
SpaceClassification classify_space(const OrliczFunction& phi, bool finite_measure);

struct ShapeReport {
  bool zero_at_origin = true;
  bool monotone = true;
  bool midpoint_convex = true;
  bool nontrivial = true;
  double worst_violation = 0.0;
  double witness_t = 0.0;
  bool ok() const noexcept { return zero_at_origin && monotone && midpoint_convex && nontrivial; }
};

/// Samples the Orlicz-function invariants on a mixed linear/geometric grid.
ShapeReport validate_shape(const OrliczFunction& phi, int samples = 200, double tol = 1e-9);

/// Parses `power:p=2`, `scaled_power:p=2[,c=0.5]`, `linear`, `exp_young`,
/// `linf_step`, `custom:file=<path>`.
OrliczFunction parse_orlicz_spec(std::string_view spec);

/// Canonical spec string (custom functions report their label).
std::string to_spec(const OrliczFunction& phi);

/// Loads a two-column table `t,phi` (optional header). Between rows with
/// positive values log Φ is interpolated linearly in t, otherwise Φ itself
/// is; the final row may hold `inf`, which sets the horizon at the previous
/// row. Past the last row the final segment's rule is extrapolated.
OrliczFunction load_custom_table(const std::string& path);

/// Builds the same interpolant from in-memory rows.
OrliczFunction custom_from_table(std::string label, std::vector<double> t, std::vector<double> values);

}  // namespace orlicz
