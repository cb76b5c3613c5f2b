#include "orlicz/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "orlicz/convergence.hpp"
#include "orlicz/duality.hpp"
#include "orlicz/error.hpp"
#include "orlicz/extended_real.hpp"
#include "orlicz/norms.hpp"
#include "orlicz/orlicz_function.hpp"
#include "orlicz/risk.hpp"
#include "rng.hpp"

namespace orlicz {

namespace {

using Rng = std::mt19937_64;

Rng stream(const VerifyConfig& cfg, std::uint64_t id) { return Rng(detail::derive_seed(cfg.seed, id)); }

std::vector<double> normal_vector(Rng& rng, std::size_t n, double sd = 1.0) {
  std::normal_distribution<double> d(0.0, sd);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

std::vector<double> probability_weights(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> w(n);
  double s = 0.0;
  for (double& x : w) s += (x = u(rng));
  for (double& x : w) x /= s;
  return w;
}

// Passing requires measured ≤ threshold; a failure counts as induced by the
// override when the default threshold would have passed.
void judge(CriterionResult& r, double measured, double threshold, double default_threshold) {
  r.pass = measured <= threshold;
  r.tolerance_induced = !r.pass && threshold < default_threshold && measured <= default_threshold;
}

double weighted_p_norm(std::span<const double> w, std::span<const double> f, double p) {
  double s = 0.0;
  for (size_t i = 0; i < f.size(); ++i) s += w[i] * std::pow(std::abs(f[i]), p);
  return std::pow(s, 1.0 / p);
}

// max ⟨f, g⟩ over the vertices of {0 ≤ g ≤ 1/α, Σ w g = 1}: every vertex has
// all but at most one coordinate at a bound.
double avar_vertex_oracle(std::span<const double> w, std::span<const double> f, double alpha) {
  const size_t n = f.size();
  const double cap = 1.0 / alpha;
  double best = -kInfinity;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double mass = 0.0, value = 0.0;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        mass += w[i] * cap;
        value += w[i] * cap * f[i];
      }
    if (std::abs(mass - 1.0) <= 1e-12) best = std::max(best, value);
    for (size_t j = 0; j < n; ++j) {
      if (mask & (1u << j)) continue;
      const double gj = (1.0 - mass) / w[j];
      if (gj < -1e-12 || gj > cap + 1e-12) continue;
      best = std::max(best, value + w[j] * gj * f[j]);
    }
  }
  return best;
}

CriterionResult norm_oracle(const VerifyConfig& cfg) {
  CriterionResult r{"c01_norm_oracle", "Luxemburg norm matches the weighted p-norm", false, false, 0, {}};
  Rng rng = stream(cfg, 1);
  std::uniform_real_distribution<double> weight(0.1, 2.0);
  double worst = 0.0;
  for (double p : {1.5, 2.0, 3.0}) {
    const auto phi = OrliczFunction::power(p);
    for (int c = 0; c < 200; ++c) {
      std::vector<double> w(20);
      for (double& x : w) x = weight(rng);
      const auto f = normal_vector(rng, 20, 3.0);
      const double lux = luxemburg_norm(w, f, phi).value;
      const double ref = weighted_p_norm(w, f, p);
      worst = std::max(worst, std::abs(lux - ref) / (1.0 + ref));
      ++r.cases;
    }
  }
  const double threshold = cfg.norm_tol.value_or(1e-8);
  judge(r, worst, threshold, 1e-8);
  r.metrics.set("worst_relative_error", worst);
  r.metrics.set("threshold", threshold);
  return r;
}

CriterionResult conjugate_roundtrip(const VerifyConfig&) {
  CriterionResult r{"c02_conjugate_roundtrip", "numeric Young conjugate matches s^q/q; L-infinity step pairs with s", false,
                    false, 0, {}};
  double worst = 0.0;
  bool identity_exact = true;
  const auto step = OrliczFunction::linf_step();
  const auto step_conj = conjugate(step);
  for (double p : {1.5, 2.0, 3.0}) {
    const double q = p / (p - 1.0);
    const auto phi = OrliczFunction::scaled_power(p);
    for (int k = 0; k < 50; ++k) {
      const double s = 10.0 * k / 49.0;
      worst = std::max(worst, std::abs(conjugate_value(phi, s) - std::pow(s, q) / q));
      ++r.cases;
    }
  }
  for (int k = 0; k < 50; ++k) {
    const double s = 10.0 * k / 49.0;
    if (step_conj(s) != s || conjugate_value(step, s) != s) identity_exact = false;
  }
  r.pass = worst <= 1e-6 && identity_exact;
  r.metrics.set("worst_abs_error", worst);
  r.metrics.set("linf_step_identity_exact", identity_exact);
  return r;
}

CriterionResult young_sweep(const VerifyConfig& cfg) {
  CriterionResult r{"c03_young_inequality", "ts <= Phi(t) + Psi(s) on random pairs", false, false, 0, {}};
  Rng rng = stream(cfg, 3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  const std::vector<OrliczFunction> catalog = {
      OrliczFunction::power(1.5),       OrliczFunction::power(2.0),  OrliczFunction::power(3.0),
      OrliczFunction::scaled_power(2.5), OrliczFunction::linear(),   OrliczFunction::exp_young(),
      OrliczFunction::linf_step()};
  long long violations = 0;
  double worst = -kInfinity;
  for (const auto& phi : catalog) {
    const auto psi = conjugate(phi);
    for (int k = 0; k < 10000; ++k) {
      const double t = u(rng), s = u(rng);
      const double a = phi(t), b = psi(s);
      ++r.cases;
      if (is_infinite(a) || is_infinite(b)) continue;
      const double excess = t * s - a - b;
      worst = std::max(worst, excess);
      if (excess > 1e-9) ++violations;
    }
  }
  r.pass = violations == 0;
  r.metrics.set("violations", violations);
  r.metrics.set("worst_excess", worst);
  return r;
}

CriterionResult representation(const VerifyConfig& cfg) {
  CriterionResult r{"c04_entropic_representation", "entropic risk equals its dual representation", false, false, 0, {}};
  Rng rng = stream(cfg, 4);
  const std::size_t sizes[] = {2, 5, 10, 20, 35, 50};
  const auto orlicz = OrliczFunction::power(2.0);
  ReconstructOptions numeric;
  numeric.force_numeric = true;
  numeric.seed = cfg.seed;
  numeric.max_sweeps = cfg.max_iterations;
  double worst_closed = 0.0, worst_numeric = 0.0;
  bool feasible = true;
  const double betas[] = {0.5, 1.0, 2.0};
  for (int k = 0; k < 50; ++k) {
    const double beta = betas[k % 3];
    const std::size_t n = sizes[(k / 3) % 6];
    const auto space = share(MeasureSpace::finite(probability_weights(rng, n)));
    const auto phi = entropic(beta, space);
    const Rv f(space, normal_vector(rng, n));
    const auto exact = reconstruct(*phi, f, orlicz);
    const auto num = reconstruct(*phi, f, orlicz, numeric);
    worst_closed = std::max(worst_closed, std::abs(exact.gap));
    worst_numeric = std::max(worst_numeric, std::abs(num.gap));
    feasible = feasible && exact.nonnegative_ok && exact.heart_ok && num.nonnegative_ok && num.heart_ok;
    ++r.cases;
  }
  const double closed_tol = cfg.gap_tol.value_or(1e-6);
  const double numeric_tol = cfg.gap_tol.value_or(1e-4);
  r.pass = worst_closed <= closed_tol && worst_numeric <= numeric_tol && feasible;
  r.tolerance_induced = !r.pass && feasible && worst_closed <= 1e-6 && worst_numeric <= 1e-4;
  r.metrics.set("worst_gap_closed_form", worst_closed);
  r.metrics.set("worst_gap_numeric", worst_numeric);
  r.metrics.set("feasible", feasible);
  return r;
}

CriterionResult avar_oracle(const VerifyConfig& cfg) {
  CriterionResult r{"c05_avar_vertex_oracle", "greedy AVaR equals LP vertex enumeration", false, false, 0, {}};
  Rng rng = stream(cfg, 5);
  double worst = 0.0;
  for (double alpha : {0.25, 0.5, 0.75})
    for (int c = 0; c < 100; ++c) {
      const std::size_t n = 2 + static_cast<std::size_t>(c % 5);
      const auto w = probability_weights(rng, n);
      const auto space = share(MeasureSpace::finite(w));
      const auto phi = average_value_at_risk(alpha, space);
      const auto f = normal_vector(rng, n);
      worst = std::max(worst, std::abs(phi->evaluate(f) - avar_vertex_oracle(w, f, alpha)));
      ++r.cases;
    }
  const double threshold = cfg.gap_tol.value_or(1e-10);
  judge(r, worst, threshold, 1e-10);
  r.metrics.set("worst_abs_error", worst);
  return r;
}

// Nonnegative g from the functional's conjugate domain.
std::vector<double> feasible_dual(const std::string& kind, Rng& rng, std::span<const double> w) {
  const size_t n = w.size();
  std::exponential_distribution<double> e(1.0);
  std::vector<double> g(n, 1.0);
  if (kind == "expectation") return g;
  double mass = 0.0;
  for (size_t i = 0; i < n; ++i) mass += w[i] * (g[i] = e(rng));
  for (double& x : g) x /= mass;
  if (kind == "avar") {
    // Mix toward 1 until g ≤ 1/α = 2.
    double top = *std::max_element(g.begin(), g.end());
    if (top > 1.9) {
      const double theta = 0.9 / (top - 1.0);
      for (double& x : g) x = 1.0 + theta * (x - 1.0);
    }
  }
  return g;
}

CriterionResult dual_positivity(const VerifyConfig& cfg) {
  CriterionResult r{"c06_dual_positivity", "negative duals have infinite conjugate; feasible duals finite", false, false,
                    0, {}};
  Rng rng = stream(cfg, 6);
  const auto space = share(MeasureSpace::uniform_probability(5));
  const auto w = space->weights();
  const std::vector<std::pair<std::string, RiskPtr>> catalog = {{"entropic", entropic(1.0, space)},
                                                               {"avar", average_value_at_risk(0.5, space)},
                                                               {"worst_case", worst_case(space)},
                                                               {"expectation", expectation(space)}};
  ConjugateOptions numeric;
  numeric.method = ConjugateMethod::Numeric;
  numeric.seed = cfg.seed;
  numeric.max_sweeps = cfg.max_iterations;
  long long missed = 0, false_alarm = 0;
  std::normal_distribution<double> nd(0.5, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, 4);
  for (const auto& [kind, phi] : catalog) {
    for (int c = 0; c < 50; ++c) {
      std::vector<double> g(5);
      for (double& x : g) x = nd(rng);
      const std::size_t neg = pick(rng);
      g[neg] = -0.1 - std::abs(g[neg]);
      const auto res = fenchel_conjugate(*phi, g, numeric);
      if (!(is_infinite(res.value) && res.divergent_probe && res.probe.rfind("-e[", 0) == 0)) ++missed;
      ++r.cases;
    }
    for (int c = 0; c < 50; ++c) {
      const auto g = feasible_dual(kind, rng, w);
      const auto res = fenchel_conjugate(*phi, g, numeric);
      if (!std::isfinite(res.value)) ++false_alarm;
      ++r.cases;
    }
  }
  r.pass = missed == 0 && false_alarm == 0;
  r.metrics.set("negative_not_detected", missed);
  r.metrics.set("feasible_reported_infinite", false_alarm);
  return r;
}

CriterionResult fatou(const VerifyConfig& cfg) {
  CriterionResult r{"c07_fatou", "phi(f) <= liminf phi(f_n) on bounded a.e.-convergent families", false, false, 0, {}};
  Rng rng = stream(cfg, 7);
  const std::size_t n = 8;
  const auto space = share(MeasureSpace::uniform_probability(n));
  const auto orlicz = OrliczFunction::power(2.0);
  std::vector<SequenceFamily> families;
  for (auto mode : {SequenceMode::NormConvergent, SequenceMode::TravelingSpike, SequenceMode::OrderConvergent})
    for (int c = 0; c < 100; ++c) {
      const Rv f(space, normal_vector(rng, n));
      families.push_back(generate_sequence(space, orlicz, f, mode, 64, rng(), 1.0));
    }
  const std::vector<RiskPtr> catalog = {entropic(1.0, space), average_value_at_risk(0.5, space), worst_case(space),
                                        expectation(space)};
  const double tol = cfg.fatou_tol.value_or(1e-9);
  long long violations = 0;
  double worst_violation = 0.0;
  for (const auto& phi : catalog) {
    const auto rep = fatou_check(*phi, families, tol);
    violations += rep.violations;
    worst_violation = std::max(worst_violation, -rep.worst_margin);
    r.cases += static_cast<long long>(families.size());
  }

  // A jump up at the limit point breaks lower semicontinuity there.
  const Rv hat(space, normal_vector(rng, n));
  const auto control = point_jump(entropic(1.0, space), std::vector<double>(hat.values().begin(), hat.values().end()), 1.0);
  const SequenceFamily approach = generate_sequence(space, orlicz, hat, SequenceMode::NormConvergent, 64, rng(), 1.0);
  const auto caught = fatou_check(*control, std::span<const SequenceFamily>(&approach, 1), tol);
  const bool control_caught = caught.violations == 1 && caught.worst_margin < -0.5;

  r.pass = violations == 0 && control_caught;
  r.tolerance_induced = !r.pass && control_caught && tol < 1e-9 && worst_violation <= 1e-9;
  r.metrics.set("violations", violations);
  r.metrics.set("worst_violation", worst_violation);
  r.metrics.set("control_caught", control_caught);
  r.metrics.set("control_margin", caught.worst_margin);
  return r;
}

CriterionResult extraction(const VerifyConfig& cfg) {
  CriterionResult r{"c08_subsequence_extraction", "a.e.-convergent subsequence with the telescoped trace bound", false,
                    false, 0, {}};
  Rng rng = stream(cfg, 8);
  const std::size_t N = cfg.truncation;
  const auto space = share(MeasureSpace::truncated_countable(
      N, [](long long k) { return 1.0 / (static_cast<double>(k) * static_cast<double>(k + 1)); },
      "weights 1/(k(k+1)) on the positive integers"));
  const auto phi = OrliczFunction::power(2.0);
  const auto psi = conjugate(phi);
  const Rv g0 = strictly_positive_witness(space, psi);
  const Rv f0 = strictly_positive_witness(space, phi);
  const Rv f(space, normal_vector(rng, N));
  bool ok = true;
  double worst_excess = -kInfinity;
  for (auto [mode, length] : {std::pair{SequenceMode::NormConvergent, std::size_t{64}},
                              std::pair{SequenceMode::TravelingSpike, N + 64}}) {
    const auto fam = generate_sequence(space, phi, f, mode, length, rng(), 1.0);
    const auto rep = extract_ae_subsequence(fam, f, g0, f0);
    ok = ok && rep.success && rep.trace_bound_ok && rep.pointwise_ok;
    worst_excess = std::max(worst_excess, rep.worst_trace_excess);
    r.metrics.set(std::string(to_string(mode)) + ".selected", rep.indices.size());
    ++r.cases;
  }
  r.pass = ok;
  r.metrics.set("worst_trace_excess", worst_excess);
  r.metrics.set("atoms", N);
  return r;
}

CriterionResult biconjugation(const VerifyConfig& cfg) {
  CriterionResult r{"c09_biconjugation", "phi** = phi for entropic risk, restricted and unrestricted", false, false, 0,
                    {}};
  Rng rng = stream(cfg, 9);
  const auto space = share(MeasureSpace::finite(probability_weights(rng, 3)));
  const auto phi = entropic(1.0, space);
  std::vector<Rv> probes;
  for (int k = 0; k < 100; ++k) probes.emplace_back(space, normal_vector(rng, 3));
  ReconstructOptions opts;
  opts.seed = cfg.seed;
  opts.max_sweeps = cfg.max_iterations;
  const auto rep = biconjugate_check(*phi, probes, opts);
  r.cases = 100;
  r.pass = rep.max_deviation <= 1e-5 && rep.max_route_disagreement <= 1e-6;
  r.metrics.set("max_deviation", rep.max_deviation);
  r.metrics.set("max_route_disagreement", rep.max_route_disagreement);
  return r;
}

CriterionResult classification(const VerifyConfig&) {
  CriterionResult r{"c10_classification", "reflexive for t^2; not for the L-infinity step or exp Young", false, false, 3,
                    {}};
  const auto p2 = classify_space(OrliczFunction::power(2.0), true);
  const auto step = classify_space(OrliczFunction::linf_step(), true);
  const auto ey = classify_space(OrliczFunction::exp_young(), true);
  r.pass = p2.reflexive == Verdict::Holds && step.reflexive == Verdict::Fails && ey.reflexive == Verdict::Fails;
  r.metrics.set("power_2.reflexive", to_string(p2.reflexive));
  r.metrics.set("linf_step.reflexive", to_string(step.reflexive));
  r.metrics.set("exp_young.reflexive", to_string(ey.reflexive));
  return r;
}

}  // namespace

Record VerifySummary::to_record() const {
  Record rec;
  for (const auto& c : criteria) {
    rec.set(c.key + ".pass", c.pass);
    rec.set(c.key + ".tolerance_induced", c.tolerance_induced);
    rec.set(c.key + ".cases", c.cases);
    rec.set(c.key + ".title", c.title);
    rec.merge(c.key + ".", c.metrics);
  }
  rec.set("all_pass", all_pass);
  rec.set("criteria", criteria.size());
  return rec;
}

VerifySummary verify_all(const VerifyConfig& cfg) {
  for (const auto& t : {cfg.norm_tol, cfg.gap_tol, cfg.fatou_tol})
    if (t && !(*t >= 0.0)) throw DomainError("tolerance overrides must be nonnegative");
  if (cfg.max_iterations < 1) throw DomainError("max_iterations must be positive");
  if (cfg.truncation < 2) throw DomainError("truncation must be at least 2");
  VerifySummary s;
  s.criteria.push_back(norm_oracle(cfg));
  s.criteria.push_back(conjugate_roundtrip(cfg));
  s.criteria.push_back(young_sweep(cfg));
  s.criteria.push_back(representation(cfg));
  s.criteria.push_back(avar_oracle(cfg));
  s.criteria.push_back(dual_positivity(cfg));
  s.criteria.push_back(fatou(cfg));
  s.criteria.push_back(extraction(cfg));
  s.criteria.push_back(biconjugation(cfg));
  s.criteria.push_back(classification(cfg));
  s.all_pass = std::all_of(s.criteria.begin(), s.criteria.end(), [](const auto& c) { return c.pass; });
  return s;
}

}  // namespace orlicz
