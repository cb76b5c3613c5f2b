#pragma once

// Reference computations written independently of the library, used as
// ground truth by the test suites. Everything here is deliberately naive.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// (Σ wᵢ|fᵢ|ᵖ)^{1/p}, accumulated in long double.
inline double weighted_p_norm(const std::vector<double>& w, const std::vector<double>& f, double p) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < w.size(); ++i) acc += (long double)w[i] * std::pow((long double)std::abs(f[i]), (long double)p);
  return (double)std::pow(acc, 1.0L / (long double)p);
}

/// sup over a uniform grid of t in [0, t_max] of s·t − Φ(t).
inline double grid_conjugate(const std::function<double(double)>& phi, double s, double t_max, int steps) {
  double best = -inf;
  for (int k = 0; k <= steps; ++k) {
    const double t = t_max * k / steps;
    const double v = phi(t);
    if (std::isinf(v)) continue;
    best = std::max(best, s * t - v);
  }
  return best;
}

/// Same grid sup, followed by a local refinement on a 1000× finer grid
/// around the best node.
inline double refined_grid_conjugate(const std::function<double(double)>& phi, double s, double t_max, int steps) {
  double best = -inf, best_t = 0.0;
  const double h = t_max / steps;
  for (int k = 0; k <= steps; ++k) {
    const double t = h * k;
    const double v = phi(t);
    if (std::isinf(v)) continue;
    if (s * t - v > best) best = s * t - v, best_t = t;
  }
  const double lo = std::max(0.0, best_t - h);
  for (int k = 0; k <= 2000; ++k) {
    const double t = lo + 2.0 * h * k / 2000.0;
    const double v = phi(t);
    if (!std::isinf(v)) best = std::max(best, s * t - v);
  }
  return best;
}

/// log Σ wᵢ e^{βfᵢ} / β in long double without max-shifting.
inline double naive_entropic(const std::vector<double>& w, const std::vector<double>& f, double beta) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < w.size(); ++i) acc += (long double)w[i] * std::exp((long double)beta * f[i]);
  return (double)(std::log(acc) / (long double)beta);
}

/// Gibbs density g ∝ e^{βf} normalised so Σ w g = 1.
inline std::vector<double> gibbs_density(const std::vector<double>& w, const std::vector<double>& f, double beta) {
  long double z = 0.0L;
  for (std::size_t i = 0; i < w.size(); ++i) z += (long double)w[i] * std::exp((long double)beta * f[i]);
  std::vector<double> g(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) g[i] = (double)(std::exp((long double)beta * f[i]) / z);
  return g;
}

/// Relative entropy Σ w g log g with 0 log 0 = 0 (probability w, Σ w g = 1).
inline double relative_entropy(const std::vector<double>& w, const std::vector<double>& g) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (g[i] > 0.0) acc += (long double)w[i] * g[i] * std::log((long double)g[i]);
  return (double)acc;
}

/// AVaR_α(f) = sup{Σ w g f : 0 ≤ g ≤ 1/α, Σ w g = 1} by enumerating every
/// assignment of each atom to {0, cap, free}; feasible vertices have at most
/// one free coordinate, whose value is pinned by the mass constraint.
inline double avar_by_enumeration(const std::vector<double>& w, const std::vector<double>& f, double alpha) {
  const std::size_t n = w.size();
  const double cap = 1.0 / alpha;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  double best = -inf;
  std::vector<int> state(n);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    int free_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = int(c % 3);
      c /= 3;
      if (state[i] == 2) ++free_count;
    }
    if (free_count > 1) continue;
    double mass = 0.0, value = 0.0;
    std::size_t free_i = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (state[i] == 1) mass += w[i] * cap, value += w[i] * cap * f[i];
      if (state[i] == 2) free_i = i;
    }
    if (free_i < n) {
      const double gi = (1.0 - mass) / w[free_i];
      if (gi < -1e-12 || gi > cap + 1e-12) continue;
      value += w[free_i] * gi * f[free_i];
    } else if (std::abs(mass - 1.0) > 1e-12) {
      continue;
    }
    best = std::max(best, value);
  }
  return best;
}

/// Indicator norm ‖χ_A‖ = 1/Φ⁻¹(1/μ(A)) for an invertible Φ.
inline double indicator_norm(const std::function<double(double)>& phi_inverse, double mass) {
  return 1.0 / phi_inverse(1.0 / mass);
}

/// Luxemburg norm by plain bisection in long double on λ with Σ w Φ(|f|/λ) ≤ 1.
inline double luxemburg_bisection(const std::vector<double>& w, const std::vector<double>& f,
                                  const std::function<double(double)>& phi) {
  auto mod = [&](long double lam) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double v = phi(double(std::abs(f[i]) / lam));
      if (std::isinf(v)) return (long double)inf;
      acc += w[i] * v;
    }
    return acc;
  };
  long double lo = 0.0L, hi = 1.0L;
  while (mod(hi) > 1.0L) hi *= 2.0L;
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    if (mid == lo || mid == hi) break;
    (mod(mid) > 1.0L ? lo : hi) = mid;
  }
  return double(hi);
}

/// Amemiya norm inf_{k>0} (1 + Σ w Φ(k|f|))/k on a dense geometric grid.
inline double amemiya_grid(const std::vector<double>& w, const std::vector<double>& f,
                           const std::function<double(double)>& phi) {
  double best = inf;
  for (int j = -6000; j <= 6000; ++j) {
    const double k = std::pow(10.0, j / 1000.0);
    long double acc = 1.0L;
    bool finite = true;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double v = phi(k * std::abs(f[i]));
      if (std::isinf(v)) { finite = false; break; }
      acc += w[i] * v;
    }
    if (finite) best = std::min(best, double(acc / k));
  }
  return best;
}

/// Small deterministic generator helpers for property tests.
struct Gen {
  std::mt19937_64 eng;
  explicit Gen(std::uint64_t seed) : eng(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng); }
  std::vector<double> vec(std::size_t n, double a, double b) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(a, b);
    return v;
  }
  std::vector<double> weights(std::size_t n) { return vec(n, 0.1, 2.0); }
  std::vector<double> probability(std::size_t n) {
    auto v = weights(n);
    double s = 0.0;
    for (double x : v) s += x;
    for (auto& x : v) x /= s;
    return v;
  }
};

inline bool close(double a, double b, double rel, double abs_tol = 0.0) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= abs_tol + rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace oracle
