#include "orlicz/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orlicz::optimize {

namespace {

constexpr double kInvPhi = 0.6180339887498948482;  // 1/φ
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double guarded(const std::function<double(double)>& f, double x) {
  const double v = f(x);
  return std::isnan(v) ? kNegInf : v;
}

}  // namespace

ScalarOptimum golden_section_max(const std::function<double(double)>& f, double a, double b,
                                 const GoldenOptions& opts) {
  if (b < a) std::swap(a, b);
  ScalarOptimum best;
  double fa = guarded(f, a);
  double fb = guarded(f, b);
  best.evaluations = 2;
  best.arg = fa >= fb ? a : b;
  best.value = std::max(fa, fb);
  auto consider = [&](double x, double v) {
    if (v > best.value) {
      best.value = v;
      best.arg = x;
    }
  };

  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = guarded(f, c);
  double fd = guarded(f, d);
  best.evaluations += 2;
  consider(c, fc);
  consider(d, fd);

  for (int it = 0; it < opts.max_iterations; ++it) {
    const double width = b - a;
    const double scale = std::max(std::abs(a), std::abs(b));
    if (width <= std::max(opts.rel_tol * scale, opts.abs_floor)) break;
    bool keep_left;
    if (fc == kNegInf && fd == kNegInf)
      keep_left = fa >= fb;
    else
      keep_left = fc >= fd;
    if (keep_left) {
      b = d;
      fb = fd;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = guarded(f, c);
      consider(c, fc);
    } else {
      a = c;
      fa = fc;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = guarded(f, d);
      consider(d, fd);
    }
    ++best.evaluations;
  }
  return best;
}

ScalarOptimum brent_max(const std::function<double(double)>& f, double a, double b, const GoldenOptions& opts) {
  if (b < a) std::swap(a, b);
  constexpr double kGolden = 1.0 - kInvPhi;  // 0.381966...
  ScalarOptimum best;
  const double fa = guarded(f, a);
  const double fb = guarded(f, b);
  best.evaluations = 2;
  best.arg = fa >= fb ? a : b;
  best.value = std::max(fa, fb);
  const double tol = opts.rel_tol * (b - a) + opts.abs_floor;

  // Minimizes -f, following the classical layout: x best, w second, v previous w.
  double x = a + kGolden * (b - a);
  double fx = -guarded(f, x);
  ++best.evaluations;
  double w = x, v = x, fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double m = 0.5 * (a + b);
    const double tol1 = tol;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool golden = true;
    if (std::abs(e) > tol1 && std::isfinite(fx) && std::isfinite(fw) && std::isfinite(fv)) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        e = d;
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = x < m ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x >= m ? a : b) - x;
      d = kGolden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = -guarded(f, u);
    ++best.evaluations;
    if (fu <= fx) {
      if (u >= x)
        a = x;
      else
        b = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x)
        a = u;
      else
        b = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  if (-fx > best.value) {
    best.value = -fx;
    best.arg = x;
  }
  return best;
}

ScalarOptimum maximize_concave(const std::function<double(double)>& f, double x0, double lo,
                               double hi, const ExpansionOptions& opts) {
  ScalarOptimum start{x0, guarded(f, x0), 1};
  int evals = 1;

  // Returns the bracket end reached and whether any improvement was seen.
  auto expand = [&](double direction, double limit, double& prev, double& last,
                    double& last_value) -> bool {
    double step = opts.initial_step;
    prev = x0;
    double prev_value = start.value;
    bool improved = false;
    double before_prev = x0;
    for (int k = 0; k < opts.max_expansions; ++k) {
      double x = x0 + direction * step;
      bool clipped = false;
      if ((direction > 0 && x >= limit) || (direction < 0 && x <= limit)) {
        x = limit;
        clipped = true;
      }
      const double v = guarded(f, x);
      ++evals;
      if (v > prev_value) {
        improved = true;
        before_prev = prev;
        prev = x;
        prev_value = v;
        if (clipped) {
          last = x;
          last_value = v;
          prev = before_prev;
          return true;
        }
        step *= opts.growth;
        continue;
      }
      last = x;
      last_value = v;
      prev = before_prev;
      return improved;
    }
    last = prev;
    last_value = prev_value;
    prev = before_prev;
    return improved;
  };

  double prev = x0, last = x0, last_value = start.value;
  bool up = false;
  if (hi > x0) up = expand(+1.0, hi, prev, last, last_value);
  double a, b;
  if (up) {
    a = prev;
    b = last;
  } else {
    double prev_l = x0, last_l = x0, last_value_l = start.value;
    bool down = false;
    if (lo < x0) down = expand(-1.0, lo, prev_l, last_l, last_value_l);
    if (!down) {
      // x0 is (numerically) a local maximizer on the probed scale; refine
      // both sides once at the initial step.
      a = std::max(lo, x0 - opts.initial_step);
      b = std::min(hi, x0 + opts.initial_step);
      if (!(b > a)) {
        start.evaluations = evals;
        return start;
      }
    } else {
      a = last_l;
      b = prev_l;
    }
  }
  ScalarOptimum refined = opts.parabolic ? brent_max(f, a, b, opts.golden) : golden_section_max(f, a, b, opts.golden);
  refined.evaluations += evals;
  if (refined.value > start.value) return refined;
  start.evaluations = refined.evaluations;
  return start;
}

BisectionResult bisect_switch(const std::function<bool(double)>& pred, double lo, double hi,
                              double rel_tol, double abs_floor, int max_iterations) {
  BisectionResult r{lo, hi, 0};
  while (r.iterations < max_iterations) {
    const double width = r.hi - r.lo;
    if (width <= std::max(rel_tol * std::abs(r.hi), abs_floor)) break;
    const double mid = r.lo + 0.5 * width;
    if (mid <= r.lo || mid >= r.hi) break;
    if (pred(mid))
      r.hi = mid;
    else
      r.lo = mid;
    ++r.iterations;
  }
  return r;
}

}  // namespace orlicz::optimize
