#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "orlicz/measure.hpp"
#include "orlicz/orlicz_function.hpp"
#include "orlicz/risk.hpp"

namespace orlicz {

enum class ConjugateMethod { Auto, Numeric };

struct ConjugateOptions {
  ConjugateMethod method = ConjugateMethod::Auto;
  int restarts = 8;
  int max_sweeps = 500;
  std::uint64_t seed = 0;
};

/// φ*(g) with provenance. `numeric` results carry the best f found.
struct ConjugateResult {
  double value = 0.0;
  bool numeric = false;
  /// +inf was established by a divergence probe ray.
  bool divergent_probe = false;
  /// The diverging ray, e.g. "-e[3]" or "+1".
  std::string probe;
  std::vector<double> probe_trace;
  std::vector<double> best_f;
  int start_index = -1;
  int iterations = 0;
};

/// φ*(g) = sup_f ⟨f, g⟩ − φ(f). Uses the closed form when one exists (unless
/// the numeric method is forced). The numeric route first runs divergence
/// probes along ±10ᵏ e_i and ±10ᵏ·1 (k = 1..6); a ray whose value passes
/// 1e10, or whose secant slope stays positive and stable, gives +inf.
/// Otherwise it runs multi-start coordinate ascent with golden-section line
/// searches.
ConjugateResult fenchel_conjugate(const RiskFunctional& phi, Values g, const ConjugateOptions& opts = {});
double fenchel_conjugate_value(const RiskFunctional& phi, const Rv& g, const ConjugateOptions& opts = {});

/// Divergence trace of λ⟨χ_A, g⟩ + ⟨f̃, g⟩ − φ(λχ_A + f̃) for λ = −10ᵏ,
/// k = 1..6, where A is the atom with the most negative w·g and f̃ is the
/// functional's proper witness.
struct PositivityEvidence {
  std::size_t atom = 0;
  long long atom_id = 0;
  std::vector<double> lambdas;
  std::vector<double> trace;
  bool strictly_increasing = false;
  /// Final trace value exceeds 1e4.
  bool exceeds_threshold = false;
};

/// Throws PreconditionError when g ≥ 0.
PositivityEvidence positivity_evidence(const RiskFunctional& phi, const Rv& g);

struct DualCertificate {
  std::vector<double> g;
  double value = 0.0;            // φ(f)
  double conjugate_value = 0.0;  // φ*(g)
  double achieved = 0.0;         // ⟨f, g⟩ − φ*(g)
  double gap = 0.0;              // φ(f) − achieved
  bool nonnegative_ok = false;
  bool heart_ok = false;
  /// Heart membership is automatic (Ψ finite everywhere).
  bool heart_vacuous = false;
  std::string method;  // "closed_form" or "numeric"
  int start_index = 0;
  int iterations = 0;
};

struct ReconstructOptions {
  bool force_numeric = false;
  int restarts = 8;
  int max_sweeps = 500;
  std::uint64_t seed = 0;
  int validation_trials = 200;
  /// Stop once a full sweep gains at most sweep_tol·(1 + |value|).
  double sweep_tol = 1e-10;
  /// Relative width at which each golden-section line search stops.
  double line_tol = 1e-7;
};

/// The representation φ(f) = sup_{g ∈ H_Ψ, g ≥ 0} ⟨f, g⟩ − φ*(g). Requires
/// lim Φ(t)/t = ∞ (HypothesisError otherwise) and a functional that passes
/// validation (PreconditionError otherwise).
DualCertificate reconstruct(const RiskFunctional& phi, const Rv& f, const OrliczFunction& orlicz,
                            const ReconstructOptions& opts = {});

/// Numeric sup_g ⟨f, g⟩ − φ*(g) by multi-start coordinate and pairwise
/// mass-exchange ascent; `nonnegative` restricts to g ≥ 0.
DualCertificate maximize_dual(const RiskFunctional& phi, Values f, bool nonnegative, const ReconstructOptions& opts);

struct BiconjugateReport {
  double max_deviation = 0.0;             // max |φ**(f) − φ(f)|, g unrestricted
  double max_restricted_deviation = 0.0;  // same with g ≥ 0
  double max_route_disagreement = 0.0;    // max |restricted − unrestricted|
  std::size_t worst_probe = 0;
  std::vector<double> phi_values;
  std::vector<double> unrestricted;
  std::vector<double> restricted;
};

BiconjugateReport biconjugate_check(const RiskFunctional& phi, std::span<const Rv> probes,
                                    const ReconstructOptions& opts = {});

struct LevelSetVerdict {
  Verdict verdict = Verdict::Inconclusive;
  double level = 0.0;
  double limit_value = 0.0;
  /// level − φ(limit); negative on failure.
  double margin = 0.0;
  double norm_bound = 0.0;
  std::size_t slowest_atom = 0;
  std::string reason;
};

/// A.e. limits of norm-bounded sequences from {φ ≤ level} stay in the set.
LevelSetVerdict level_set_probe(const RiskFunctional& phi, double level, const Rv& limit,
                                std::span<const Rv> approx_seq, const OrliczFunction& orlicz,
                                double ae_tol = 1e-9);

}  // namespace orlicz
