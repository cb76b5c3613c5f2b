#include "orlicz/duality.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ascent.hpp"
#include "orlicz/error.hpp"
#include "orlicz/extended_real.hpp"
#include "orlicz/norms.hpp"
#include "rng.hpp"
#include "text_util.hpp"

namespace orlicz {

namespace {

constexpr double kProbeThreshold = 1e10;
constexpr int kProbeDecades = 6;

double pairing(Values w, Values f, Values g) {
  double s = 0.0;
  for (size_t i = 0; i < f.size(); ++i) s += w[i] * f[i] * g[i];
  return s;
}

void require_size(const RiskFunctional& phi, size_t n, const char* what) {
  if (n != phi.space().size()) throw StructureError(std::string(what) + " has the wrong number of atoms");
}

// Primal objective ⟨f, g⟩ − φ(f); +inf values of φ map to −inf.
double primal(const RiskFunctional& phi, Values w, Values f, Values g) {
  const double v = phi.evaluate(f);
  if (is_infinite(v)) return v > 0 ? -kInfinity : kInfinity;
  return pairing(w, f, g) - v;
}

struct RayVerdict {
  bool diverges = false;
  std::vector<double> trace;
};

// Concave trace along base + λd for λ = 10^1..10^6.
RayVerdict probe_ray(const RiskFunctional& phi, Values w, Values g, const std::vector<double>& base,
                     const std::vector<double>& d) {
  RayVerdict out;
  std::vector<double> f(base.size());
  std::vector<double> lambdas;
  for (int k = 1; k <= kProbeDecades; ++k) {
    const double lambda = std::pow(10.0, k);
    for (size_t i = 0; i < f.size(); ++i) f[i] = base[i] + lambda * d[i];
    out.trace.push_back(primal(phi, w, f, g));
    lambdas.push_back(lambda);
  }
  const double last = out.trace.back();
  if (last == kInfinity || last > kProbeThreshold) {
    out.diverges = true;
    return out;
  }
  // A positive recession slope that has stabilized means linear growth.
  double scale = 1.0;
  for (size_t i = 0; i < g.size(); ++i) scale += w[i] * std::abs(g[i]);
  const double floor = 1e-9 * scale;
  const size_t m = out.trace.size();
  const double s_prev = (out.trace[m - 2] - out.trace[m - 3]) / (lambdas[m - 2] - lambdas[m - 3]);
  const double s_last = (out.trace[m - 1] - out.trace[m - 2]) / (lambdas[m - 1] - lambdas[m - 2]);
  if (std::isfinite(s_last) && s_last > floor && s_prev > floor && s_last >= 0.9 * s_prev) out.diverges = true;
  return out;
}

std::vector<detail::Move> primal_plan(size_t n) {
  std::vector<detail::Move> moves;
  for (size_t i = 0; i < n; ++i) moves.push_back({static_cast<int>(i), -1, 1.0, 0.0, false});
  moves.push_back({0, -1, 1.0, 0.0, true});
  return moves;
}

}  // namespace

ConjugateResult fenchel_conjugate(const RiskFunctional& phi, Values g, const ConjugateOptions& opts) {
  require_size(phi, g.size(), "dual variable");
  ConjugateResult out;
  if (opts.method == ConjugateMethod::Auto && phi.has_closed_form_conjugate()) {
    if (auto v = phi.closed_form_conjugate(g)) {
      out.value = *v;
      return out;
    }
  }
  out.numeric = true;
  const auto w = phi.space().weights();
  const size_t n = g.size();
  const std::vector<double> base = phi.proper_witness();

  auto try_ray = [&](std::vector<double> d, std::string label) {
    auto r = probe_ray(phi, w, g, base, d);
    if (r.diverges) {
      out.value = kInfinity;
      out.divergent_probe = true;
      out.probe = std::move(label);
      out.probe_trace = std::move(r.trace);
      out.best_f = base;
      return true;
    }
    return false;
  };
  // Negative singleton rays first: they are the ones that expose g_i < 0.
  for (double sign : {-1.0, 1.0})
    for (size_t i = 0; i < n; ++i) {
      std::vector<double> d(n, 0.0);
      d[i] = sign;
      if (try_ray(d, (sign < 0 ? "-e[" : "+e[") + std::to_string(phi.space().atoms()[i].id) + "]")) return out;
    }
  if (try_ray(std::vector<double>(n, 1.0), "+1")) return out;
  if (try_ray(std::vector<double>(n, -1.0), "-1")) return out;

  const auto moves = primal_plan(n);
  detail::Objective objective = [&](const std::vector<double>& f) { return primal(phi, w, f, g); };
  detail::AscentOptions ao;
  ao.max_sweeps = opts.max_sweeps;
  // Past the probe scale only rounding noise can grow, e.g. along the
  // constant direction when Σ w g misses 1 by an ulp.
  ao.box = 1e7;

  double best = -kInfinity;
  for (int s = 0; s < std::max(1, opts.restarts); ++s) {
    std::vector<double> f = base;
    if (s > 0) {
      std::mt19937_64 rng(detail::derive_seed(opts.seed, static_cast<std::uint64_t>(s)));
      std::normal_distribution<double> normal(0.0, 1.0);
      for (double& v : f) v += normal(rng);
    }
    const double start = objective(f);
    if (start == -kInfinity) continue;
    auto res = detail::coordinate_ascent(objective, f, start, [&](int) { return moves; }, ao);
    if (res.value > best) {
      best = res.value;
      out.best_f = f;
      out.start_index = s;
      out.iterations = res.sweeps;
    }
  }
  if (best == -kInfinity) throw NumericError("no restart produced a finite primal value");
  out.value = best;
  return out;
}

double fenchel_conjugate_value(const RiskFunctional& phi, const Rv& g, const ConjugateOptions& opts) {
  return fenchel_conjugate(phi, g.values(), opts).value;
}

PositivityEvidence positivity_evidence(const RiskFunctional& phi, const Rv& g) {
  require_size(phi, g.size(), "dual variable");
  const auto w = phi.space().weights();
  const auto gv = g.values();
  size_t atom = gv.size();
  double most_negative = 0.0;
  for (size_t i = 0; i < gv.size(); ++i) {
    const double m = w[i] * gv[i];
    if (m < most_negative) {
      most_negative = m;
      atom = i;
    }
  }
  if (atom == gv.size()) throw PreconditionError("g is nonnegative; there is no negative part to probe");

  PositivityEvidence ev;
  ev.atom = atom;
  ev.atom_id = phi.space().atoms()[atom].id;
  const std::vector<double> base = phi.proper_witness();
  const double base_pairing = pairing(w, base, gv);
  std::vector<double> f = base;
  for (int k = 1; k <= kProbeDecades; ++k) {
    const double lambda = -std::pow(10.0, k);
    f[atom] = base[atom] + lambda;
    const double v = lambda * w[atom] * gv[atom] + base_pairing - phi.evaluate(f);
    ev.lambdas.push_back(lambda);
    ev.trace.push_back(v);
  }
  ev.strictly_increasing = true;
  for (size_t k = 1; k < ev.trace.size(); ++k)
    if (!(ev.trace[k] > ev.trace[k - 1])) ev.strictly_increasing = false;
  ev.exceeds_threshold = ev.trace.back() > 1e4;
  return ev;
}

DualCertificate maximize_dual(const RiskFunctional& phi, Values f, bool nonnegative, const ReconstructOptions& opts) {
  require_size(phi, f.size(), "random variable");
  const auto w = phi.space().weights();
  const size_t n = f.size();
  ConjugateOptions co;
  co.seed = opts.seed;
  co.restarts = opts.restarts;
  co.max_sweeps = opts.max_sweeps;

  auto conj = [&](Values g) { return fenchel_conjugate(phi, g, co).value; };
  detail::Objective objective = [&](const std::vector<double>& g) {
    const double c = conj(g);
    if (c == kInfinity) return -kInfinity;
    return pairing(w, f, g) - c;
  };

  auto plan = [&](int sweep) {
    std::vector<detail::Move> moves;
    for (size_t i = 0; i < n; ++i) moves.push_back({static_cast<int>(i), -1, 1.0, 0.0, false});
    if (n > 1) {
      const size_t shift = 1 + static_cast<size_t>(sweep) % (n - 1);
      for (size_t i = 0; i < n; ++i) {
        const size_t j = (i + shift) % n;
        moves.push_back({static_cast<int>(i), static_cast<int>(j), 1.0 / w[i], -1.0 / w[j], false});
      }
    }
    return moves;
  };
  auto all_pairs = [&](int) {
    std::vector<detail::Move> moves;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        moves.push_back({static_cast<int>(i), static_cast<int>(j), 1.0 / w[i], -1.0 / w[j], false});
    return moves;
  };
  detail::AscentOptions ao;
  ao.max_sweeps = opts.max_sweeps;
  ao.sweep_tol = opts.sweep_tol;
  ao.golden_rel_tol = opts.line_tol;
  ao.parabolic = true;
  ao.nonnegative = nonnegative;

  DualCertificate cert;
  cert.method = "numeric";
  double best = -kInfinity;
  const double total = phi.space().total_mass();
  for (int s = 0; s < std::max(1, opts.restarts); ++s) {
    std::vector<double> g(n, 1.0 / total);
    if (s > 0) {
      std::mt19937_64 rng(detail::derive_seed(opts.seed, 1000 + static_cast<std::uint64_t>(s)));
      std::exponential_distribution<double> expo(1.0);
      double mass = 0.0;
      for (size_t i = 0; i < n; ++i) {
        g[i] = expo(rng);
        mass += w[i] * g[i];
      }
      for (double& v : g) v /= mass;
    }
    const double start = objective(g);
    if (start == -kInfinity) continue;
    auto res = detail::coordinate_ascent(objective, g, start, plan, ao);
    // The rotating plan can stall before it has paired every two atoms, so
    // confirm with one pass over all pairs and resume if that still gains.
    while (n > 2 && res.sweeps < opts.max_sweeps) {
      detail::AscentOptions once = ao;
      once.max_sweeps = 1;
      const auto closure = detail::coordinate_ascent(objective, g, res.value, all_pairs, once);
      const bool gained = closure.value - res.value > 100.0 * ao.sweep_tol * (1.0 + std::abs(closure.value));
      res.value = closure.value;
      res.sweeps += 1;
      if (!gained) break;
      const auto more = detail::coordinate_ascent(objective, g, res.value, plan, ao);
      res.value = more.value;
      res.sweeps += more.sweeps;
    }
    if (res.value > best) {
      best = res.value;
      cert.g = g;
      cert.start_index = s;
      cert.iterations = res.sweeps;
    }
  }
  if (best == -kInfinity) throw NumericError("no dual start has a finite conjugate value");
  cert.conjugate_value = conj(cert.g);
  cert.achieved = pairing(w, f, cert.g) - cert.conjugate_value;
  cert.value = phi.evaluate(f);
  cert.gap = cert.value - cert.achieved;
  cert.nonnegative_ok = std::all_of(cert.g.begin(), cert.g.end(), [](double v) { return v >= 0.0; });
  return cert;
}

DualCertificate reconstruct(const RiskFunctional& phi, const Rv& f, const OrliczFunction& orlicz,
                            const ReconstructOptions& opts) {
  require_size(phi, f.size(), "random variable");
  const SlopeClass slope = limit_slope(orlicz);
  if (!slope.is_infinite_slope)
    throw HypothesisError("the representation needs lim Phi(t)/t = inf, but " + to_spec(orlicz) +
                          " has limit slope " + detail::format_double(slope.limit_slope));
  const ValidationReport vr = validate(phi, opts.validation_trials, opts.seed);
  if (!vr.ok()) {
    std::string why;
    if (!vr.monotone_ok) why += " not increasing (worst violation " + detail::format_double(vr.worst_monotone_violation) + ")";
    if (!vr.convex_ok) why += " not convex (worst violation " + detail::format_double(vr.worst_convex_violation) + ")";
    if (!vr.proper_ok) why += " not proper";
    throw PreconditionError(phi.name() + " failed validation:" + why);
  }

  const auto fv = f.values();
  DualCertificate cert;
  std::optional<std::vector<double>> exact;
  if (!opts.force_numeric) exact = phi.closed_form_maximizer(fv);
  if (exact) {
    const auto w = phi.space().weights();
    cert.g = std::move(*exact);
    cert.method = "closed_form";
    cert.value = phi.evaluate(fv);
    cert.conjugate_value = fenchel_conjugate(phi, cert.g).value;
    cert.achieved = pairing(w, fv, cert.g) - cert.conjugate_value;
    cert.gap = cert.value - cert.achieved;
    cert.nonnegative_ok = std::all_of(cert.g.begin(), cert.g.end(), [](double v) { return v >= 0.0; });
  } else {
    cert = maximize_dual(phi, fv, true, opts);
  }

  const OrliczFunction psi = conjugate(orlicz);
  cert.heart_vacuous = is_infinite(psi.horizon());
  cert.heart_ok = heart_member(Rv(phi.space_ptr(), cert.g), psi);
  return cert;
}

BiconjugateReport biconjugate_check(const RiskFunctional& phi, std::span<const Rv> probes,
                                    const ReconstructOptions& opts) {
  BiconjugateReport rep;
  double worst = -1.0;
  for (size_t k = 0; k < probes.size(); ++k) {
    const auto fv = probes[k].values();
    const double value = phi.evaluate(fv);
    const double free = maximize_dual(phi, fv, false, opts).achieved;
    const double pos = maximize_dual(phi, fv, true, opts).achieved;
    rep.phi_values.push_back(value);
    rep.unrestricted.push_back(free);
    rep.restricted.push_back(pos);
    const double dev = std::abs(free - value);
    rep.max_deviation = std::max(rep.max_deviation, dev);
    rep.max_restricted_deviation = std::max(rep.max_restricted_deviation, std::abs(pos - value));
    rep.max_route_disagreement = std::max(rep.max_route_disagreement, std::abs(pos - free));
    if (dev > worst) {
      worst = dev;
      rep.worst_probe = k;
    }
  }
  return rep;
}

LevelSetVerdict level_set_probe(const RiskFunctional& phi, double level, const Rv& limit,
                                std::span<const Rv> approx_seq, const OrliczFunction& orlicz, double ae_tol) {
  if (approx_seq.empty()) throw PreconditionError("level-set probe needs a nonempty sequence");
  LevelSetVerdict out;
  out.level = level;
  for (size_t n = 0; n < approx_seq.size(); ++n) {
    const double v = phi(approx_seq[n]);
    if (v > level + 1e-12)
      throw PreconditionError("sequence term " + std::to_string(n) + " has value " + detail::format_double(v) +
                              " above the level " + detail::format_double(level));
    out.norm_bound = std::max(out.norm_bound, luxemburg_norm(approx_seq[n], orlicz).value);
  }
  if (!std::isfinite(out.norm_bound)) throw PreconditionError("sequence is not norm bounded");

  const AeReport ae = ae_converges(approx_seq, limit, ae_tol);
  out.slowest_atom = ae.slowest_atom;
  out.limit_value = phi(limit);
  out.margin = level - out.limit_value;
  if (!ae.converges) {
    out.verdict = Verdict::Inconclusive;
    out.reason = "sequence does not converge a.e. to the proposed limit (atom " +
                 std::to_string(ae.slowest_atom_id) + ")";
    return out;
  }
  if (out.limit_value <= level + 1e-9) {
    out.verdict = Verdict::Holds;
    out.reason = "limit stays in the level set";
  } else {
    out.verdict = Verdict::Fails;
    out.reason = "limit value " + detail::format_double(out.limit_value) + " exceeds the level";
  }
  return out;
}

}  // namespace orlicz
