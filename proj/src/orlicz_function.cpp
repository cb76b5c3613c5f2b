#include "orlicz/orlicz_function.hpp"

#include <algorithm>
#include <cmath>

#include "orlicz/error.hpp"
#include "orlicz/extended_real.hpp"
#include "orlicz/optimize.hpp"
#include "text_util.hpp"

namespace orlicz {

namespace {

constexpr int kMaxDoublings = 64;
constexpr int kUnboundedDoublings = 40;

double exp_young_value(double t) {
  if (t < 1e-4) return t * t * (0.5 + t * (1.0 / 6.0 + t / 24.0));
  const double v = std::expm1(t) - t;
  return std::isfinite(v) ? v : kInfinity;
}

// (1+s)log(1+s) − s, the conjugate of e^t − t − 1.
double exp_young_conjugate_value(double s) {
  if (s < 1e-4) return s * s * (0.5 - s * (1.0 / 6.0 - s / 12.0));
  return (1.0 + s) * std::log1p(s) - s;
}

double conjugate_exponent(double p) { return p / (p - 1.0); }

}  // namespace

OrliczFunction OrliczFunction::power(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("power Orlicz function needs p > 1");
  OrliczFunction f;
  f.kind_ = OrliczKind::Power;
  f.exponent_ = p;
  f.coefficient_ = 1.0;
  f.horizon_ = kInfinity;
  f.label_ = "power:p=" + detail::format_double(p);
  return f;
}

OrliczFunction OrliczFunction::scaled_power(double p, double c) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("scaled power Orlicz function needs p > 1");
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scaled power Orlicz function needs c > 0");
  OrliczFunction f;
  f.kind_ = OrliczKind::ScaledPower;
  f.exponent_ = p;
  f.coefficient_ = c;
  f.horizon_ = kInfinity;
  f.label_ = "scaled_power:p=" + detail::format_double(p) + ",c=" + detail::format_double(c);
  return f;
}

OrliczFunction OrliczFunction::scaled_power(double p) {
  if (!(p > 1.0)) throw DomainError("scaled power Orlicz function needs p > 1");
  return scaled_power(p, 1.0 / p);
}

OrliczFunction OrliczFunction::linear() {
  OrliczFunction f;
  f.kind_ = OrliczKind::Linear;
  f.horizon_ = kInfinity;
  f.label_ = "linear";
  return f;
}

OrliczFunction OrliczFunction::exp_young() {
  OrliczFunction f;
  f.kind_ = OrliczKind::ExpYoung;
  f.horizon_ = kInfinity;
  f.label_ = "exp_young";
  return f;
}

OrliczFunction OrliczFunction::linf_step() {
  OrliczFunction f;
  f.kind_ = OrliczKind::LInfinityStep;
  f.horizon_ = 1.0;
  f.label_ = "linf_step";
  return f;
}

OrliczFunction OrliczFunction::custom(std::string label, Evaluator evaluator, double horizon) {
  if (!evaluator) throw DomainError("custom Orlicz function needs an evaluator");
  if (!(horizon > 0.0)) throw DomainError("custom Orlicz function needs a positive finiteness horizon");
  const double at_zero = evaluator(0.0);
  if (at_zero != 0.0) throw DomainError("custom Orlicz function must vanish at 0");
  if (std::isfinite(horizon)) {
    // Left-continuity at the horizon: only a finite jump is detectable.
    const double at_t = evaluator(horizon);
    const double near_t = evaluator(horizon * (1.0 - 1e-9));
    if (std::isfinite(at_t) && std::isfinite(near_t) &&
        std::abs(at_t - near_t) > 1e-6 * (1.0 + std::abs(at_t)))
      throw DomainError("custom Orlicz function is not left-continuous at its horizon");
  }
  OrliczFunction f;
  f.kind_ = OrliczKind::Custom;
  f.horizon_ = horizon;
  f.label_ = std::move(label);
  f.evaluator_ = std::make_shared<const Evaluator>(std::move(evaluator));
  return f;
}

double OrliczFunction::operator()(double t) const {
  switch (kind_) {
    case OrliczKind::Power:
      return std::pow(t, exponent_);
    case OrliczKind::ScaledPower:
      return coefficient_ * std::pow(t, exponent_);
    case OrliczKind::Linear:
      return t;
    case OrliczKind::ExpYoung:
      return exp_young_value(t);
    case OrliczKind::LInfinityStep:
      return t <= 1.0 ? 0.0 : kInfinity;
    case OrliczKind::Custom:
      if (t > horizon_) return kInfinity;
      return (*evaluator_)(t);
  }
  return kInfinity;
}

double evaluate(const OrliczFunction& phi, double t) {
  if (!(t >= 0.0)) throw DomainError("Orlicz functions are defined on [0, inf); got t = " + detail::format_double(t));
  return phi(t);
}

double conjugate_value(const OrliczFunction& phi, double s) {
  if (!(s >= 0.0)) throw DomainError("conjugate is evaluated on [0, inf); got s = " + detail::format_double(s));
  if (std::isinf(s)) return kInfinity;
  auto objective = [&](double t) {
    const double v = phi(t);
    if (!std::isfinite(v)) return -kInfinity;
    return s * t - v;
  };

  optimize::GoldenOptions golden;
  golden.rel_tol = 1e-10;
  golden.abs_floor = 1e-14;

  const double horizon = phi.horizon();
  if (std::isfinite(horizon)) {
    const auto best = optimize::golden_section_max(objective, 0.0, horizon, golden);
    return std::max(best.value, 0.0);
  }

  // Expand along t = 2^k until the concave objective stops increasing.
  double before = 0.0;
  double t = 1.0;
  double value = objective(t);
  double lo = 0.0, hi = 1.0;
  if (value > 0.0) {
    int growth = 0;
    bool bracketed = false;
    for (int k = 1; k <= kMaxDoublings; ++k) {
      const double next = 2.0 * t;
      const double next_value = objective(next);
      if (next_value > value) {
        if (++growth >= kUnboundedDoublings) return kInfinity;
        before = t;
        t = next;
        value = next_value;
        continue;
      }
      lo = before;
      hi = next;
      bracketed = true;
      break;
    }
    if (!bracketed) return kInfinity;
  }
  const auto best = optimize::golden_section_max(objective, lo, hi, golden);
  return std::max(best.value, 0.0);
}

OrliczFunction conjugate(const OrliczFunction& phi) {
  switch (phi.kind()) {
    case OrliczKind::LInfinityStep:
      return OrliczFunction::linear();
    case OrliczKind::Linear:
      return OrliczFunction::linf_step();
    case OrliczKind::Power:
    case OrliczKind::ScaledPower: {
      // c·t^p ↦ (1/q)(pc)^{1−q} s^q with 1/p + 1/q = 1.
      const double p = phi.exponent();
      const double q = conjugate_exponent(p);
      const double pc = p * phi.coefficient();
      return OrliczFunction::scaled_power(q, std::pow(pc, 1.0 - q) / q);
    }
    case OrliczKind::ExpYoung:
      return OrliczFunction::custom("exp_young_conjugate", exp_young_conjugate_value, kInfinity);
    case OrliczKind::Custom: {
      const SlopeClass slope = limit_slope(phi);
      const double horizon = slope.is_infinite_slope ? kInfinity : slope.limit_slope;
      OrliczFunction base = phi;
      return OrliczFunction::custom(
          "conjugate(" + phi.label() + ")", [base](double s) { return conjugate_value(base, s); },
          horizon);
    }
  }
  throw DomainError("unknown Orlicz kind");
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Fails:
      return "fails";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Verdict combine(Verdict a, Verdict b) noexcept {
  if (a == Verdict::Fails || b == Verdict::Fails) return Verdict::Fails;
  if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
  return Verdict::Holds;
}

namespace {

Delta2Report exact_delta2(Verdict v, double k, double witness) {
  Delta2Report r;
  r.verdict = v;
  r.k = k;
  r.witness_u = witness;
  r.exact = true;
  return r;
}

Delta2Report grid_delta2(const OrliczFunction& phi, Delta2Regime regime, int sample_count) {
  Delta2Report r;
  const int n = std::min(sample_count, 1000);
  if (regime == Delta2Regime::AtInfinity && std::isfinite(phi.horizon())) {
    // Φ(2u) = ∞ while Φ(u) < ∞ just below the horizon.
    r.verdict = Verdict::Fails;
    r.witness_u = phi.horizon();
    return r;
  }
  for (int j = 0; j < n; ++j) {
    const double u = regime == Delta2Regime::AtInfinity ? std::ldexp(1.0, std::min(j, 500))
                                                        : std::ldexp(1.0, -std::min(j, 500));
    const double base = phi(u);
    const double doubled = phi(2.0 * u);
    if (!std::isfinite(base)) break;
    double ratio;
    if (base == 0.0)
      ratio = doubled == 0.0 ? 1.0 : kInfinity;
    else
      ratio = std::isfinite(doubled) ? doubled / base : kInfinity;
    r.grid.push_back(u);
    r.ratios.push_back(ratio);
    if (!std::isfinite(ratio)) {
      r.verdict = Verdict::Fails;
      r.witness_u = u;
      return r;
    }
  }
  const int m = static_cast<int>(r.ratios.size());
  if (m < 16) {
    r.verdict = Verdict::Inconclusive;
    return r;
  }
  const int q = m / 4;
  const double max_ratio = *std::max_element(r.ratios.begin(), r.ratios.end());
  const double d_prev = r.ratios[m - 1 - q] - r.ratios[m - 1 - 2 * q];
  const double d_last = r.ratios[m - 1] - r.ratios[m - 1 - q];
  const double scale = std::max(1.0, std::abs(r.ratios[m - 1]));
  if (d_last <= 1e-12 * scale) {
    r.verdict = Verdict::Holds;
    r.k = max_ratio;
  } else if (d_last <= 0.5 * d_prev) {
    r.verdict = Verdict::Holds;
    r.k = max_ratio + d_last;
  } else if (d_last >= d_prev && d_prev > 0.0) {
    r.verdict = Verdict::Fails;
    auto it = std::max_element(r.ratios.begin(), r.ratios.end());
    r.witness_u = r.grid[static_cast<size_t>(it - r.ratios.begin())];
  } else {
    r.verdict = Verdict::Inconclusive;
  }
  return r;
}

}  // namespace

Delta2Report check_delta2(const OrliczFunction& phi, Delta2Regime regime, int sample_count) {
  if (sample_count < 16) throw DomainError("check_delta2 needs sample_count >= 16");
  const bool at_inf = regime == Delta2Regime::AtInfinity;
  switch (phi.kind()) {
    case OrliczKind::Power:
    case OrliczKind::ScaledPower:
      return exact_delta2(Verdict::Holds, std::pow(2.0, phi.exponent()), 0.0);
    case OrliczKind::Linear:
      return exact_delta2(Verdict::Holds, 2.0, 0.0);
    case OrliczKind::ExpYoung:
      if (at_inf) return exact_delta2(Verdict::Fails, 0.0, 1.0);
      // Φ(2u)/Φ(u) increases in u, so u₀ = 1 gives the constant.
      return exact_delta2(Verdict::Holds, exp_young_value(2.0) / exp_young_value(1.0), 0.0);
    case OrliczKind::LInfinityStep:
      // At infinity: Φ(2u) = ∞ with Φ(u) = 0 for u ∈ (1/2, 1]. At zero the
      // function vanishes on [0, 1] and 0 ≤ k·0 holds with k = 1.
      if (at_inf) return exact_delta2(Verdict::Fails, 0.0, 1.0);
      return exact_delta2(Verdict::Holds, 1.0, 0.0);
    case OrliczKind::Custom:
      return grid_delta2(phi, regime, sample_count);
  }
  return {};
}

double generalized_inverse(const OrliczFunction& phi, double y) {
  if (!(y >= 0.0)) throw DomainError("generalized inverse needs y >= 0");
  if (y == 0.0) return 0.0;
  double hi;
  const double horizon = phi.horizon();
  if (std::isfinite(horizon)) {
    if (phi(horizon) < y) return horizon;  // Φ jumps to +∞ past the horizon.
    hi = horizon;
  } else {
    if (std::isinf(y)) throw DomainError("generalized inverse: y = inf is never reached by a finite Orlicz function");
    hi = 1.0;
    int k = 0;
    while (phi(hi) < y) {
      hi *= 2.0;
      if (++k > kMaxDoublings) throw DomainError("generalized inverse: y exceeds sup of the Orlicz function");
    }
  }
  const auto r = optimize::bisect_switch([&](double t) { return phi(t) >= y; }, 0.0, hi, 0.0,
                                         std::max(1e-12, 4.0 * std::numeric_limits<double>::epsilon() * hi));
  return r.hi;
}

SlopeClass limit_slope(const OrliczFunction& phi) {
  switch (phi.kind()) {
    case OrliczKind::Power:
    case OrliczKind::ScaledPower:
    case OrliczKind::ExpYoung:
    case OrliczKind::LInfinityStep:
      return {kInfinity, true, false};
    case OrliczKind::Linear:
      return {1.0, false, false};
    case OrliczKind::Custom:
      break;
  }
  if (std::isfinite(phi.horizon())) return {kInfinity, true, false};
  std::vector<double> ratios;
  for (int k = 0; k <= kMaxDoublings; ++k) {
    const double t = std::ldexp(1.0, k);
    const double v = phi(t);
    if (!std::isfinite(v)) return {kInfinity, true, true};
    ratios.push_back(v / t);
  }
  const double last = ratios.back();
  const double earlier = ratios[ratios.size() - 9];
  if (last > 1e12 || last - earlier > 1e-6 * std::max(last, 1e-300)) return {kInfinity, true, true};
  return {last, false, true};
}

SpaceClassification classify_space(const OrliczFunction& phi, bool finite_measure) {
  SpaceClassification c;
  c.finite_measure = finite_measure;
  const OrliczFunction psi = conjugate(phi);
  std::vector<Delta2Regime> regimes{Delta2Regime::AtInfinity};
  if (!finite_measure) regimes.push_back(Delta2Regime::AtZero);

  Verdict phi_d2 = Verdict::Holds;
  Verdict psi_d2 = Verdict::Holds;
  for (auto regime : regimes) {
    phi_d2 = combine(phi_d2, check_delta2(phi, regime).verdict);
    psi_d2 = combine(psi_d2, check_delta2(psi, regime).verdict);
  }
  c.order_continuous = phi_d2;
  c.reflexive = combine(phi_d2, psi_d2);
  c.conjugate_delta2 = psi_d2;
  c.c_property_for_sigma_n = psi_d2 == Verdict::Holds ? c.reflexive : Verdict::Inconclusive;
  return c;
}

ShapeReport validate_shape(const OrliczFunction& phi, int samples, double tol) {
  ShapeReport r;
  std::vector<double> grid;
  grid.push_back(0.0);
  for (int i = 1; i <= samples; ++i) grid.push_back(10.0 * i / samples);
  for (int k = -20; k <= 20; ++k) grid.push_back(std::ldexp(1.0, k));
  if (std::isfinite(phi.horizon())) {
    grid.push_back(phi.horizon());
    grid.push_back(phi.horizon() * (1.0 - 1e-6));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  auto note = [&](double violation, double t) {
    if (violation > r.worst_violation) {
      r.worst_violation = violation;
      r.witness_t = t;
    }
  };

  if (phi(0.0) != 0.0) {
    r.zero_at_origin = false;
    note(std::abs(phi(0.0)), 0.0);
  }
  bool finite_positive_t = false;
  bool nonzero = false;
  std::vector<double> values(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    values[i] = phi(grid[i]);
    if (grid[i] > 0.0 && std::isfinite(values[i])) finite_positive_t = true;
    if (values[i] != 0.0) nonzero = true;
  }
  r.nontrivial = finite_positive_t && nonzero;
  for (size_t i = 1; i < grid.size(); ++i) {
    if (values[i] < values[i - 1] - tol) {
      r.monotone = false;
      note(values[i - 1] - values[i], grid[i]);
    }
  }
  for (size_t i = 0; i < grid.size(); ++i) {
    for (size_t j = i + 1; j < grid.size(); j += 7) {
      if (!std::isfinite(values[i]) || !std::isfinite(values[j])) continue;
      const double mid = 0.5 * (grid[i] + grid[j]);
      const double lhs = phi(mid);
      const double rhs = 0.5 * (values[i] + values[j]);
      const double slack = tol * (1.0 + std::abs(rhs));
      if (lhs > rhs + slack) {
        r.midpoint_convex = false;
        note(lhs - rhs, mid);
      }
    }
  }
  return r;
}

}  // namespace orlicz
