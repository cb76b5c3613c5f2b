#pragma once

#include <functional>

namespace orlicz::optimize {

/// Result of a one-dimensional search.
struct ScalarOptimum {
  double arg = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

struct GoldenOptions {
  double rel_tol = 1e-10;
  double abs_floor = 1e-14;
  int max_iterations = 400;
};

/// Golden-section maximization of a unimodal function on [a, b]. The
/// function may return -inf on part of the interval (outside its domain);
/// ties at -inf move toward whichever endpoint has the better value.
/// Endpoints are included in the candidate set.
ScalarOptimum golden_section_max(const std::function<double(double)>& f, double a, double b,
                                 const GoldenOptions& opts = {});

/// Brent's method: parabolic interpolation with golden-section fallback.
/// Same contract as golden_section_max; converges superlinearly on smooth
/// unimodal functions. Stops once the bracket is below
/// rel_tol·(b − a) + abs_floor, measured against the initial width.
ScalarOptimum brent_max(const std::function<double(double)>& f, double a, double b, const GoldenOptions& opts = {});

struct ExpansionOptions {
  double initial_step = 1.0;
  double growth = 2.0;
  int max_expansions = 64;
  GoldenOptions golden{};
  /// Refine the bracket with brent_max instead of golden_section_max.
  bool parabolic = false;
};

/// Maximizes a concave function on [lo, hi] starting from a point x0 where
/// it is finite. Brackets the maximizer by geometric step expansion in
/// whichever direction improves, then refines by golden section. `hi` and
/// `lo` may be infinite. Never returns a point worse than x0.
ScalarOptimum maximize_concave(const std::function<double(double)>& f, double x0, double lo,
                               double hi, const ExpansionOptions& opts = {});

struct BisectionResult {
  double lo = 0.0;  // predicate false here
  double hi = 0.0;  // predicate true here
  int iterations = 0;
};

/// Shrinks [lo, hi] around the switch point of a monotone predicate that is
/// false at lo and true at hi, until hi - lo <= max(rel_tol * |hi|, abs_floor).
BisectionResult bisect_switch(const std::function<bool(double)>& pred, double lo, double hi,
                              double rel_tol, double abs_floor, int max_iterations = 400);

}  // namespace orlicz::optimize
