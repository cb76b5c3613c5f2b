#include "ascent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orlicz/optimize.hpp"

namespace orlicz::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Feasible t-range keeping touched coordinates nonnegative.
void clamp_range(const std::vector<double>& x, const Move& m, double& lo, double& hi) {
  if (m.all) {
    double smallest = kInf;
    for (double v : x) smallest = std::min(smallest, v);
    lo = std::max(lo, -smallest);
    return;
  }
  auto apply = [&](int k, double c) {
    if (k < 0 || c == 0.0) return;
    if (c > 0.0)
      lo = std::max(lo, -x[k] / c);
    else
      hi = std::min(hi, x[k] / -c);
  };
  apply(m.i, m.ci);
  apply(m.j, m.cj);
}

// Feasible t-range keeping touched coordinates inside [-box, box].
void box_range(const std::vector<double>& x, const Move& m, double box, double& lo, double& hi) {
  auto apply = [&](double xk, double c) {
    if (c == 0.0) return;
    double a = (-box - xk) / c, b = (box - xk) / c;
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  };
  if (m.all) {
    for (double v : x) apply(v, 1.0);
    return;
  }
  apply(x[m.i], m.ci);
  if (m.j >= 0) apply(x[m.j], m.cj);
}

double step_scale(const std::vector<double>& x, const Move& m) {
  if (m.all) return 0.5;
  double s = std::abs(x[m.i] * (m.ci != 0.0 ? 1.0 / std::abs(m.ci) : 0.0));
  if (m.j >= 0 && m.cj != 0.0) s += std::abs(x[m.j] / m.cj);
  return std::max(0.25 * s, 1e-3);
}

}  // namespace

AscentResult coordinate_ascent(const Objective& objective, std::vector<double>& x, double value,
                               const MovePlan& plan, const AscentOptions& opts) {
  AscentResult out{value, 0};
  std::vector<double> trial = x;
  optimize::ExpansionOptions eo;
  eo.golden.rel_tol = opts.golden_rel_tol;
  eo.golden.abs_floor = 1e-15;
  eo.parabolic = opts.parabolic;

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    const double before = out.value;
    for (const Move& m : plan(sweep)) {
      double lo = -kInf, hi = kInf;
      if (opts.nonnegative) clamp_range(x, m, lo, hi);
      if (std::isfinite(opts.box)) box_range(x, m, opts.box, lo, hi);
      if (!(hi > lo) || (lo == 0.0 && hi == 0.0)) continue;

      auto along = [&](double t) {
        if (m.all) {
          for (size_t k = 0; k < x.size(); ++k) trial[k] = x[k] + t;
        } else {
          trial[m.i] = x[m.i] + t * m.ci;
          if (m.j >= 0) trial[m.j] = x[m.j] + t * m.cj;
        }
        const double v = objective(trial);
        return v;
      };
      eo.initial_step = step_scale(x, m);
      // Probe a tiny step each way. Concavity means no gain is possible when
      // neither side improves, and directions that leave the domain both ways
      // are skipped outright.
      {
        const double up = std::min(hi, eo.initial_step * 1e-6);
        const double down = std::max(lo, -eo.initial_step * 1e-6);
        const double vu = up > 0.0 ? along(up) : -kInf;
        const double vd = down < 0.0 ? along(down) : -kInf;
        const double noise = 1e-14 * (1.0 + std::abs(out.value));
        if (!(vu > out.value + noise) && !(vd > out.value + noise)) {
          trial = x;
          continue;
        }
      }
      const auto best = optimize::maximize_concave(along, 0.0, lo, hi, eo);
      if (best.value > out.value && best.arg != 0.0) {
        if (m.all) {
          for (double& v : x) v += best.arg;
        } else {
          x[m.i] += best.arg * m.ci;
          if (m.j >= 0) x[m.j] += best.arg * m.cj;
          if (opts.nonnegative) {
            x[m.i] = std::max(x[m.i], 0.0);
            if (m.j >= 0) x[m.j] = std::max(x[m.j], 0.0);
          }
        }
        out.value = objective(x);
      }
      trial = x;
    }
    out.sweeps = sweep + 1;
    if (out.value - before <= opts.sweep_tol * (1.0 + std::abs(out.value))) break;
  }
  return out;
}

}  // namespace orlicz::detail
