#include "orlicz/norms.hpp"

#include <algorithm>
#include <cmath>

#include "orlicz/error.hpp"
#include "orlicz/extended_real.hpp"
#include "orlicz/optimize.hpp"

namespace orlicz {

double modular(std::span<const double> weights, std::span<const double> values, double lambda,
               const OrliczFunction& phi) {
  if (!(lambda > 0.0)) throw DomainError("modular needs lambda > 0");
  double sum = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0.0) continue;
    const double v = phi(std::abs(values[i]) / lambda);
    if (!std::isfinite(v)) return kInfinity;
    sum += weighted(weights[i], v);
  }
  return sum;
}

double modular(const Rv& f, double lambda, const OrliczFunction& phi) {
  return modular(f.space().weights(), f.values(), lambda, phi);
}

NormReport luxemburg_norm(std::span<const double> weights, std::span<const double> values,
                          const OrliczFunction& phi, const NormOptions& opts) {
  NormReport r;
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  if (m == 0.0) return r;

  auto feasible = [&](double lambda) { return modular(weights, values, lambda, phi) <= 1.0; };
  double lo, hi;
  int expansions = 0;
  if (feasible(m)) {
    hi = m;
    lo = 0.5 * m;
    while (feasible(lo)) {
      hi = lo;
      lo *= 0.5;
      if (++expansions > 2100) throw NumericError("Luxemburg norm bracket collapsed to 0");
    }
  } else {
    lo = m;
    hi = 2.0 * m;
    while (!feasible(hi)) {
      lo = hi;
      hi *= 2.0;
      if (++expansions > 2100 || !std::isfinite(hi)) throw NumericError("Luxemburg norm bracket diverged");
    }
  }
  const auto b = optimize::bisect_switch(feasible, lo, hi, opts.rel_tol, opts.abs_floor);
  r.value = b.hi;
  r.iterations = b.iterations + expansions;
  r.bracket_lo = b.lo;
  r.bracket_hi = b.hi;
  r.modular_at_value = modular(weights, values, b.hi, phi);
  return r;
}

NormReport luxemburg_norm(const Rv& f, const OrliczFunction& phi, const NormOptions& opts) {
  return luxemburg_norm(f.space().weights(), f.values(), phi, opts);
}

NormReport amemiya_norm(const Rv& f, const OrliczFunction& phi) {
  NormReport r;
  if (f.is_zero()) return r;
  const auto weights = f.space().weights();
  const auto values = f.values();
  auto objective = [&](double u) {  // −(1 + Σ w Φ(e^u |f|)) / e^u
    const double k = std::exp(u);
    if (!(k > 0.0) || !std::isfinite(k)) return -kInfinity;
    const double mod = modular(weights, values, 1.0 / k, phi);
    if (!std::isfinite(mod)) return -kInfinity;
    return -(1.0 + mod) / k;
  };
  const double start = -std::log(luxemburg_norm(weights, values, phi).value);
  optimize::ExpansionOptions opts;
  opts.initial_step = 0.5;
  opts.golden.rel_tol = 1e-12;
  opts.golden.abs_floor = 1e-13;
  const auto best = optimize::maximize_concave(objective, start, -kInfinity, kInfinity, opts);
  r.value = -best.value;
  r.iterations = best.evaluations;
  r.bracket_lo = r.bracket_hi = std::exp(best.arg);
  r.modular_at_value = modular(weights, values, 1.0 / std::exp(best.arg), phi);
  return r;
}

bool heart_member(const Rv& f, const OrliczFunction& phi) {
  if (std::isinf(phi.horizon())) return true;
  // With every atom of positive mass, a nonzero coordinate makes the modular
  // infinite once λ < |f_i| / horizon.
  return f.is_zero();
}

double dual_pairing(std::span<const double> weights, std::span<const double> f, std::span<const double> g) {
  double sum = 0.0;
  for (size_t i = 0; i < f.size(); ++i) sum += weights[i] * f[i] * g[i];
  return sum;
}

double dual_pairing(const Rv& f, const Rv& g) {
  require_same_space(f, g);
  return dual_pairing(f.space().weights(), f.values(), g.values());
}

}  // namespace orlicz
