#include "orlicz/commands.hpp"

#include <algorithm>
#include <cmath>

#include "orlicz/duality.hpp"
#include "orlicz/error.hpp"
#include "orlicz/extended_real.hpp"
#include "orlicz/norms.hpp"
#include "orlicz/verify.hpp"

namespace orlicz {

namespace {

std::vector<long long> atom_ids(const MeasureSpace& space) {
  std::vector<long long> ids;
  for (const auto& a : space.atoms()) ids.push_back(a.id);
  return ids;
}

void describe_space(Record& rec, const MeasureSpace& space) {
  rec.set("space.atoms", space.size());
  rec.set("space.total_mass", space.total_mass());
  rec.set("space.kind", space.kind() == SpaceKind::Finite ? "finite" : "truncated_countable");
  if (space.kind() == SpaceKind::TruncatedCountable) rec.set("space.scope", "on the truncation: " + space.tail_note());
}

}  // namespace

void RunConfig::check() const {
  for (const auto& t : {tol, bisection_tol, gap_tol, fatou_tol})
    if (t && !(*t >= 0.0 && std::isfinite(*t))) throw DomainError("tolerances must be finite and nonnegative");
  if (max_iterations < 1) throw DomainError("max_iterations must be positive");
  if (truncation < 2) throw DomainError("truncation must be at least 2");
}

SpacePtr harmonic_truncation(std::size_t n) {
  return share(MeasureSpace::truncated_countable(
      n, [](long long k) { return 1.0 / (static_cast<double>(k) * static_cast<double>(k + 1)); },
      "weights 1/(k(k+1)) on the positive integers"));
}

CommandResult cmd_norm(const Rv& f, const OrliczFunction& phi, const RunConfig& cfg) {
  cfg.check();
  NormOptions opts;
  opts.rel_tol = cfg.bisection();
  const auto lux = luxemburg_norm(f, phi, opts);
  const auto am = amemiya_norm(f, phi);
  CommandResult out;
  auto& rec = out.record;
  rec.set("command", "norm");
  rec.set("orlicz", to_spec(phi));
  describe_space(rec, f.space());
  rec.set("luxemburg", lux.value);
  rec.set("luxemburg.iterations", lux.iterations);
  rec.set("luxemburg.modular_at_value", lux.modular_at_value);
  rec.set("amemiya", am.value);
  rec.set("amemiya.k", am.bracket_hi);
  const double slack = 1e-9 * (1.0 + lux.value);
  const bool sandwich = lux.value <= am.value + slack && am.value <= 2.0 * lux.value + slack;
  rec.set("sandwich_ok", sandwich);
  if (!std::isfinite(lux.value) || !std::isfinite(am.value)) throw NumericError("norm evaluation produced a non-finite value");
  if (!sandwich) out.exit_code = 5;
  return out;
}

CommandResult cmd_represent(const Rv& f, const RiskFunctional& risk, const OrliczFunction& phi, bool force_numeric,
                            const RunConfig& cfg) {
  cfg.check();
  ReconstructOptions opts;
  opts.force_numeric = force_numeric;
  opts.seed = cfg.seed;
  opts.max_sweeps = cfg.max_iterations;
  const auto cert = reconstruct(risk, f, phi, opts);
  CommandResult out;
  auto& rec = out.record;
  rec.set("command", "represent");
  rec.set("risk", risk.name());
  rec.set("orlicz", to_spec(phi));
  describe_space(rec, f.space());
  rec.set("value", cert.value);
  rec.set("gap", cert.gap);
  rec.set("gap_tol", cfg.gap());
  rec.set("gap_ok", cert.gap <= cfg.gap());
  rec.set("achieved", cert.achieved);
  rec.set("conjugate_value", cert.conjugate_value);
  rec.set("g", cert.g);
  rec.set("atom_ids", atom_ids(f.space()));
  rec.set("feasibility.nonnegative_ok", cert.nonnegative_ok);
  rec.set("feasibility.heart_ok", cert.heart_ok);
  rec.set("feasibility.heart_vacuous", cert.heart_vacuous);
  rec.set("method", cert.method);
  rec.set("start_index", cert.start_index);
  rec.set("iterations", cert.iterations);
  if (!(cert.gap <= cfg.gap())) out.exit_code = 3;
  if (!cert.nonnegative_ok || !cert.heart_ok || cert.gap < -1e-7) out.exit_code = 5;
  return out;
}

CommandResult cmd_conjugate(const OrliczFunction& phi, double s_max, std::size_t points, const RunConfig& cfg) {
  cfg.check();
  if (!(s_max >= 0.0) || !std::isfinite(s_max)) throw DomainError("grid end must be finite and nonnegative");
  if (points < 2) throw DomainError("the grid needs at least two points");
  const auto psi = conjugate(phi);
  std::vector<double> s, closed, numeric;
  double worst = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double x = s_max * static_cast<double>(k) / static_cast<double>(points - 1);
    s.push_back(x);
    closed.push_back(psi(x));
    numeric.push_back(conjugate_value(phi, x));
    const double a = closed.back(), b = numeric.back();
    if (is_infinite(a) != is_infinite(b))
      worst = kInfinity;
    else if (!is_infinite(a))
      worst = std::max(worst, std::abs(a - b));
  }
  CommandResult out;
  auto& rec = out.record;
  rec.set("command", "conjugate");
  rec.set("orlicz", to_spec(phi));
  rec.set("conjugate", to_spec(psi));
  rec.set("s", s);
  rec.set("psi", closed);
  rec.set("psi_numeric", numeric);
  rec.set("max_abs_difference", worst);
  return out;
}

CommandResult cmd_classify(const OrliczFunction& phi, bool finite_measure, const RunConfig& cfg) {
  cfg.check();
  const auto psi = conjugate(phi);
  const auto cls = classify_space(phi, finite_measure);
  const auto slope = limit_slope(phi);
  CommandResult out;
  auto& rec = out.record;
  rec.set("command", "classify");
  rec.set("orlicz", to_spec(phi));
  rec.set("conjugate", to_spec(psi));
  rec.set("measure", finite_measure ? "finite" : "infinite_sigma_finite");
  rec.set("reflexive", to_string(cls.reflexive));
  rec.set("order_continuous", to_string(cls.order_continuous));
  rec.set("c_property_for_sigma_n", to_string(cls.c_property_for_sigma_n));
  rec.set("conjugate_delta2", to_string(cls.conjugate_delta2));
  rec.set("limit_slope", slope.limit_slope);
  rec.set("limit_slope_infinite", slope.is_infinite_slope);
  for (auto [name, fn] : {std::pair{"phi", &phi}, std::pair{"psi", &psi}})
    for (auto [rname, regime] : {std::pair{"at_zero", Delta2Regime::AtZero}, std::pair{"at_infinity", Delta2Regime::AtInfinity}}) {
      const auto d = check_delta2(*fn, regime);
      const std::string key = std::string("delta2.") + name + "." + rname;
      rec.set(key, to_string(d.verdict));
      if (d.verdict == Verdict::Holds) rec.set(key + ".k", d.k);
      if (d.verdict == Verdict::Fails) rec.set(key + ".witness_u", d.witness_u);
    }
  return out;
}

CommandResult cmd_fatou(const RiskFunctional& risk, std::vector<SequenceFamily> families, const Rv& limit,
                        const RunConfig& cfg) {
  cfg.check();
  if (families.empty()) throw PreconditionError("no families to check");
  for (auto& fam : families)
    if (!fam.limit) fam.limit = limit;
  const auto rep = fatou_check(risk, families, cfg.fatou());
  CommandResult out;
  auto& rec = out.record;
  rec.set("command", "fatou-test");
  rec.set("risk", risk.name());
  describe_space(rec, risk.space());
  rec.set("families", families.size());
  rec.set("tol", cfg.fatou());
  rec.set("violations", rep.violations);
  rec.set("worst_margin", rep.worst_margin);
  rec.set("worst_family", rep.worst_family);
  rec.set("worst_family.liminf", rep.liminf[rep.worst_family]);
  rec.set("worst_family.limit_value", rep.limit_value[rep.worst_family]);
  rec.set("ok", rep.ok);
  if (!rep.ok) out.exit_code = 5;
  return out;
}

CommandResult cmd_extract(const SequenceFamily& family, const Rv& f, const OrliczFunction& phi, const RunConfig& cfg) {
  cfg.check();
  const auto psi = conjugate(phi);
  const Rv g0 = strictly_positive_witness(f.space_ptr(), psi);
  const Rv f0 = strictly_positive_witness(f.space_ptr(), phi);
  const auto rep = extract_ae_subsequence(family, f, g0, f0);
  CommandResult out;
  auto& rec = out.record;
  rec.set("command", "extract-subseq");
  rec.set("orlicz", to_spec(phi));
  describe_space(rec, f.space());
  rec.set("terms", family.terms.size());
  rec.set("norm_bound", family.norm_bound);
  const bool stalled = rep.trace.empty();
  rec.set("verdict", rep.success ? "holds" : (stalled ? "inconclusive" : "fails"));
  rec.set("indices", rep.indices);
  rec.set("trace", rep.trace);
  rec.set("trace_bound_ok", rep.trace_bound_ok);
  rec.set("worst_trace_excess", stalled ? 0.0 : rep.worst_trace_excess);
  rec.set("pointwise_ok", rep.pointwise_ok);
  rec.set("reason", rep.reason);
  if (stalled) {
    rec.set("stalled_level", rep.stalled_level);
    rec.set("stalled_index", rep.stalled_index);
  }
  if (!rep.success && !stalled) out.exit_code = 5;
  return out;
}

CommandResult cmd_closure(std::span<const Rv> vertices, const Rv& f, const OrliczFunction& phi, std::size_t length,
                          const RunConfig& cfg, std::vector<Rv>* sequence) {
  cfg.check();
  ClosureOptions opts;
  opts.length = length;
  opts.max_iterations = std::max(cfg.max_iterations, 10000);
  if (cfg.tol) opts.hull_tol = *cfg.tol;
  const auto demo = closure_demo(vertices, f, phi, opts);
  CommandResult out;
  auto& rec = out.record;
  rec.set("command", "closure-demo");
  rec.set("orlicz", to_spec(phi));
  describe_space(rec, f.space());
  rec.set("vertices", vertices.size());
  rec.set("barycentric", demo.barycentric);
  rec.set("distance", demo.distance);
  rec.set("projection_sweeps", demo.projection_sweeps);
  rec.set("terms", demo.family.terms.size());
  rec.set("distance_bound_ok", demo.distance_bound_ok);
  rec.set("extraction.success", demo.extraction.success);
  rec.set("extraction.selected", demo.extraction.indices.size());
  rec.set("final_residual", demo.family.terms.empty() ? 0.0 : (demo.family.terms.back() - f).max_abs());
  rec.set("certified", demo.certified);
  rec.set("note", "finite space: weak-star closure equals norm closure");
  if (sequence) *sequence = demo.family.terms;
  if (!demo.certified) out.exit_code = 5;
  return out;
}

CommandResult cmd_verify_all(const RunConfig& cfg) {
  cfg.check();
  VerifyConfig vc;
  vc.seed = cfg.seed;
  vc.max_iterations = cfg.max_iterations;
  vc.truncation = cfg.truncation;
  if (cfg.bisection_tol || cfg.tol) vc.norm_tol = cfg.bisection_tol ? *cfg.bisection_tol : *cfg.tol;
  if (cfg.gap_tol || cfg.tol) vc.gap_tol = cfg.gap_tol ? *cfg.gap_tol : *cfg.tol;
  if (cfg.fatou_tol || cfg.tol) vc.fatou_tol = cfg.fatou_tol ? *cfg.fatou_tol : *cfg.tol;
  const auto summary = verify_all(vc);
  CommandResult out;
  out.record = summary.to_record();
  out.record.set("command", "verify-all");
  out.record.set("seed", std::to_string(cfg.seed));
  out.exit_code = summary.all_pass ? 0 : 5;
  return out;
}

}  // namespace orlicz
