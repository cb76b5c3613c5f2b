#pragma once

#include <cmath>
#include <limits>

namespace orlicz {

// Extended reals use IEEE +inf as the +∞ sentinel. Sums follow ∞ + x = ∞.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool is_infinite(double x) noexcept { return x == kInfinity; }
inline bool is_finite(double x) noexcept { return std::isfinite(x); }

/// Weighted contribution w·v with the modular convention 0·∞ = 0.
inline double weighted(double w, double v) noexcept {
  if (w == 0.0) return 0.0;
  return w * v;
}

}  // namespace orlicz
