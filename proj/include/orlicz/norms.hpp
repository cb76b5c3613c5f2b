#pragma once

#include <span>

#include "orlicz/measure.hpp"
#include "orlicz/orlicz_function.hpp"

namespace orlicz {

struct NormReport {
  double value = 0.0;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  /// Modular at the returned value (≤ 1 for the Luxemburg norm).
  double modular_at_value = 0.0;
};

struct NormOptions {
  double rel_tol = 1e-10;
  double abs_floor = 1e-14;
};

/// Σ w_i Φ(|f_i| / λ); +inf as soon as one term is infinite.
double modular(const Rv& f, double lambda, const OrliczFunction& phi);
double modular(std::span<const double> weights, std::span<const double> values, double lambda,
               const OrliczFunction& phi);

/// inf{λ > 0 : modular(f, λ) ≤ 1}, by bracket expansion from max|f_i| and
/// bisection to relative width rel_tol (default 1e-10, absolute floor
/// 1e-14). The returned value is always on the feasible side of the bracket.
NormReport luxemburg_norm(const Rv& f, const OrliczFunction& phi, const NormOptions& opts = {});
NormReport luxemburg_norm(std::span<const double> weights, std::span<const double> values,
                          const OrliczFunction& phi, const NormOptions& opts = {});

/// Orlicz norm through the Amemiya formula inf_{k>0} (1 + Σ w Φ(k|f|)) / k,
/// minimized by golden section over log k.
NormReport amemiya_norm(const Rv& f, const OrliczFunction& phi);

/// f belongs to the heart: modular(f, λ) < ∞ for every λ > 0.
bool heart_member(const Rv& f, const OrliczFunction& phi);

/// ⟨f, g⟩ = Σ w_i f_i g_i.
double dual_pairing(const Rv& f, const Rv& g);
double dual_pairing(std::span<const double> weights, std::span<const double> f, std::span<const double> g);

}  // namespace orlicz
