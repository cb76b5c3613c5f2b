#pragma once

// Derivative-free coordinate ascent shared by the primal and dual searches.

#include <functional>
#include <limits>
#include <vector>

namespace orlicz::detail {

/// Direction x_i += t·ci, x_j += t·cj. j < 0 means a single coordinate;
/// `all` moves every coordinate by t instead.
struct Move {
  int i = 0;
  int j = -1;
  double ci = 1.0;
  double cj = 0.0;
  bool all = false;
};

struct AscentOptions {
  int max_sweeps = 500;
  double sweep_tol = 1e-12;
  bool nonnegative = false;
  double golden_rel_tol = 1e-10;
  bool parabolic = false;
  /// Keeps every coordinate within [-box, box].
  double box = std::numeric_limits<double>::infinity();
};

struct AscentResult {
  double value = 0.0;
  int sweeps = 0;
};

using Objective = std::function<double(const std::vector<double>&)>;
using MovePlan = std::function<std::vector<Move>(int sweep)>;

/// Improves x in place; `value` must be objective(x) on entry.
AscentResult coordinate_ascent(const Objective& objective, std::vector<double>& x, double value,
                               const MovePlan& plan, const AscentOptions& opts);

}  // namespace orlicz::detail
