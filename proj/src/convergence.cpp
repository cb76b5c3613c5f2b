#include "orlicz/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include "csv.hpp"
#include "orlicz/error.hpp"
#include "orlicz/extended_real.hpp"
#include "orlicz/norms.hpp"
#include "rng.hpp"
#include "text_util.hpp"

namespace orlicz {

namespace {

// First index of the final quarter (at least one term).
std::size_t tail_start(std::size_t length) { return length - (length + 3) / 4; }

double abs_pairing(const Rv& x, const Rv& f, const Rv& g) {
  const auto w = f.space().weights();
  double s = 0.0;
  for (size_t i = 0; i < f.size(); ++i) s += w[i] * std::abs(x[i] - f[i]) * g[i];
  return s;
}

bool strictly_positive(const Rv& x) {
  for (size_t i = 0; i < x.size(); ++i)
    if (!(x[i] > 0.0)) return false;
  return true;
}

}  // namespace

const char* to_string(SequenceMode mode) noexcept {
  switch (mode) {
    case SequenceMode::NormConvergent: return "norm_convergent";
    case SequenceMode::TravelingSpike: return "traveling_spike";
    case SequenceMode::OrderConvergent: return "order_convergent";
    case SequenceMode::EscapingSpike: return "escaping_spike";
    case SequenceMode::Custom: return "custom";
  }
  return "custom";
}

SequenceMode parse_sequence_mode(std::string_view text) {
  for (auto m : {SequenceMode::NormConvergent, SequenceMode::TravelingSpike, SequenceMode::OrderConvergent,
                 SequenceMode::EscapingSpike, SequenceMode::Custom})
    if (text == to_string(m)) return m;
  if (text == "ae_only_traveling_spike") return SequenceMode::TravelingSpike;
  throw ParseError("unknown sequence mode '" + std::string(text) + "'");
}

SequenceFamily make_family(std::vector<Rv> terms, const OrliczFunction& phi, std::optional<Rv> limit,
                           SequenceMode mode, bool declared_bounded) {
  if (terms.empty()) throw PreconditionError("a sequence family needs at least one term");
  SequenceFamily fam;
  for (const auto& t : terms) {
    require_same_space(terms.front(), t);
    fam.norm_bound = std::max(fam.norm_bound, luxemburg_norm(t, phi).value);
  }
  if (limit) require_same_space(terms.front(), *limit);
  fam.terms = std::move(terms);
  fam.limit = std::move(limit);
  fam.mode = mode;
  fam.declared_bounded = declared_bounded;
  return fam;
}

SequenceFamily generate_sequence(const SpacePtr& space, const OrliczFunction& phi, const Rv& f, SequenceMode mode,
                                 std::size_t length, std::uint64_t seed, double spike_height) {
  if (length == 0) throw PreconditionError("sequence length must be at least 1");
  if (f.space_ptr() != space && !(f.space() == *space)) throw StructureError("f lives on a different space");
  const size_t n_atoms = space->size();
  std::mt19937_64 rng(detail::derive_seed(seed, static_cast<std::uint64_t>(mode)));
  std::vector<Rv> terms;
  terms.reserve(length);
  bool bounded = true;

  switch (mode) {
    case SequenceMode::NormConvergent: {
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (size_t n = 1; n <= length; ++n) {
        std::vector<double> v(f.values().begin(), f.values().end());
        const double scale = std::ldexp(1.0, -static_cast<int>(std::min<size_t>(n, 2000)));
        for (double& x : v) x += scale * u(rng);
        terms.emplace_back(space, std::move(v));
      }
      break;
    }
    case SequenceMode::TravelingSpike:
      for (size_t n = 1; n <= length; ++n) {
        std::vector<double> v(f.values().begin(), f.values().end());
        if (n <= n_atoms) v[n - 1] += spike_height;
        terms.emplace_back(space, std::move(v));
      }
      break;
    case SequenceMode::OrderConvergent: {
      std::uniform_real_distribution<double> u(0.5, 1.5);
      std::vector<double> dominator(n_atoms);
      for (double& x : dominator) x = u(rng);
      for (size_t n = 1; n <= length; ++n) {
        std::vector<double> v(f.values().begin(), f.values().end());
        const double scale = std::ldexp(1.0, -static_cast<int>(std::min<size_t>(n, 2000)));
        for (size_t i = 0; i < n_atoms; ++i) v[i] += scale * dominator[i];
        terms.emplace_back(space, std::move(v));
      }
      break;
    }
    case SequenceMode::EscapingSpike:
      bounded = false;
      for (size_t n = 1; n <= length; ++n) {
        std::vector<double> v(f.values().begin(), f.values().end());
        v[(n - 1) % n_atoms] += static_cast<double>(n);
        terms.emplace_back(space, std::move(v));
      }
      break;
    case SequenceMode::Custom:
      throw PreconditionError("custom families are built from explicit terms, not generated");
  }
  std::optional<Rv> limit;
  if (mode != SequenceMode::EscapingSpike) limit = f;
  return make_family(std::move(terms), phi, std::move(limit), mode, bounded);
}

ExtractionReport extract_ae_subsequence(const SequenceFamily& seq, const Rv& f, const Rv& g0, const Rv& f0,
                                        const ExtractionOptions& opts) {
  if (seq.terms.empty()) throw PreconditionError("empty sequence");
  require_same_space(seq.terms.front(), f);
  require_same_space(f, g0);
  require_same_space(f, f0);
  if (!strictly_positive(g0) || !strictly_positive(f0))
    throw PreconditionError("g0 and f0 must be strictly positive at every atom");

  ExtractionReport rep;
  const size_t len = seq.terms.size();
  for (const auto& t : seq.terms) rep.pairings.push_back(abs_pairing(t, f, g0));

  // Level n takes the first later term whose pairing is at most 2^-n.
  size_t level = 1;
  for (size_t k = 0; k < len; ++k) {
    if (rep.pairings[k] <= std::ldexp(1.0, -static_cast<int>(std::min<size_t>(level, 2000)))) {
      rep.indices.push_back(k);
      ++level;
    }
  }
  rep.stalled_level = level;
  rep.stalled_index = len;
  const size_t required = std::min(opts.min_levels, len);
  if (rep.indices.size() < required) {
    rep.reason = "pairing with g0 does not decay: level " + std::to_string(level) + " found no term up to index " +
                 std::to_string(len - 1);
    return rep;
  }

  // tₙ = ⟨sup_{m≥n} (|f_{αₘ} − f| ∧ f₀), g₀⟩ via a backward running max.
  const auto w = f.space().weights();
  const size_t levels = rep.indices.size();
  std::vector<double> envelope(f.size(), 0.0);
  rep.trace.assign(levels, 0.0);
  for (size_t n = levels; n-- > 0;) {
    const Rv& term = seq.terms[rep.indices[n]];
    double t = 0.0;
    for (size_t i = 0; i < f.size(); ++i) {
      envelope[i] = std::max(envelope[i], std::min(std::abs(term[i] - f[i]), f0[i]));
      t += w[i] * envelope[i] * g0[i];
    }
    rep.trace[n] = t;
  }
  rep.worst_trace_excess = -kInfinity;
  for (size_t n = 0; n < levels; ++n) {
    // Levels are 1-based in the bound: tₙ ≤ 2^{-(n-1)}.
    const double bound = std::ldexp(1.0, -static_cast<int>(std::min<size_t>(n, 2000)));
    rep.worst_trace_excess = std::max(rep.worst_trace_excess, rep.trace[n] - bound);
  }
  rep.trace_bound_ok = rep.worst_trace_excess <= 1e-12;

  std::vector<Rv> sub;
  sub.reserve(levels);
  for (size_t k : rep.indices) sub.push_back(seq.terms[k]);
  rep.ae = ae_converges(sub, f, opts.ae_tol);
  rep.pointwise_ok = rep.ae.converges;
  rep.success = rep.trace_bound_ok && rep.pointwise_ok;
  if (!rep.trace_bound_ok)
    rep.reason = "diagnostic trace exceeds its telescoped bound";
  else if (!rep.pointwise_ok)
    rep.reason = "selected subsequence does not settle at atom " + std::to_string(rep.ae.slowest_atom_id);
  else
    rep.reason = "subsequence converges at every atom of the truncation";
  return rep;
}

WstarReport wstar_limit_check(const SequenceFamily& seq, const Rv& f, std::span<const Rv> tests,
                              const OrliczFunction& psi, const WstarOptions& opts) {
  if (!seq.declared_bounded || !std::isfinite(seq.norm_bound))
    throw PreconditionError("the weak-star check needs a norm-bounded family");
  if (seq.terms.empty()) throw PreconditionError("empty sequence");
  require_same_space(seq.terms.front(), f);
  for (size_t k = 0; k < tests.size(); ++k) {
    require_same_space(f, tests[k]);
    if (!heart_member(tests[k], psi))
      throw PreconditionError("test function " + std::to_string(k) + " is not in the heart of " + to_spec(psi));
  }
  const Rv f0 = opts.f0 ? *opts.f0 : Rv::constant(f.space_ptr(), 1.0);
  require_same_space(f, f0);

  const auto w = f.space().weights();
  WstarReport rep;
  const size_t start = tail_start(seq.terms.size());
  for (size_t k = 0; k < tests.size(); ++k) {
    const Rv& g = tests[k];
    double tail = 0.0, trunc = 0.0, dom = 0.0;
    for (size_t n = start; n < seq.terms.size(); ++n) {
      const Rv& t = seq.terms[n];
      double p = 0.0, a = 0.0, b = 0.0;
      for (size_t i = 0; i < f.size(); ++i) {
        const double r = t[i] - f[i];
        p += w[i] * r * g[i];
        a += w[i] * std::max(std::abs(r) - f0[i], 0.0) * std::abs(g[i]);
        b += w[i] * std::min(std::abs(r), f0[i]) * std::abs(g[i]);
      }
      tail = std::max(tail, std::abs(p));
      trunc = std::max(trunc, a);
      dom = std::max(dom, b);
    }
    rep.tail_max.push_back(tail);
    rep.truncation_tail.push_back(trunc);
    rep.dominated.push_back(dom);
    if (tail > rep.worst_tail || k == 0) {
      rep.worst_tail = tail;
      rep.worst_test = k;
    }
  }
  rep.converges = rep.worst_tail <= opts.tol;
  return rep;
}

FatouReport fatou_check(const RiskFunctional& phi, std::span<const SequenceFamily> families, double tol,
                        double ae_tol) {
  FatouReport rep;
  rep.worst_margin = kInfinity;
  for (size_t k = 0; k < families.size(); ++k) {
    const auto& fam = families[k];
    const std::string which = "family " + std::to_string(k);
    if (!fam.declared_bounded || !std::isfinite(fam.norm_bound))
      throw PreconditionError(which + " is not norm bounded");
    if (!fam.limit) throw PreconditionError(which + " has no declared limit");
    if (fam.terms.empty()) throw PreconditionError(which + " is empty");
    const AeReport ae = ae_converges(fam.terms, *fam.limit, ae_tol);
    if (!ae.converges)
      throw PreconditionError(which + " does not converge a.e. to its limit (atom " +
                              std::to_string(ae.slowest_atom_id) + ")");
    double liminf = kInfinity;
    for (size_t n = tail_start(fam.terms.size()); n < fam.terms.size(); ++n) liminf = std::min(liminf, phi(fam.terms[n]));
    const double at_limit = phi(*fam.limit);
    const double margin = liminf - at_limit;
    rep.liminf.push_back(liminf);
    rep.limit_value.push_back(at_limit);
    rep.margins.push_back(margin);
    if (margin < -tol) ++rep.violations;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_family = k;
    }
  }
  if (families.empty()) rep.worst_margin = 0.0;
  rep.ok = rep.violations == 0;
  return rep;
}

ClosureDemo closure_demo(std::span<const Rv> vertices, const Rv& f, const OrliczFunction& phi,
                         const ClosureOptions& opts) {
  if (vertices.empty()) throw PreconditionError("the polytope needs at least one vertex");
  for (const auto& v : vertices) require_same_space(f, v);
  const size_t m = vertices.size();
  const size_t n = f.size();
  const auto w = f.space().weights();
  ClosureDemo out;
  out.barycentric.assign(m, 1.0 / static_cast<double>(m));

  size_t exact_vertex = m;
  for (size_t j = 0; j < m && exact_vertex == m; ++j)
    if (vertices[j] == f) exact_vertex = j;

  if (exact_vertex < m) {
    std::fill(out.barycentric.begin(), out.barycentric.end(), 0.0);
    out.barycentric[exact_vertex] = 1.0;
  } else {
    // Pairwise barycentric exchange with exact weighted least-squares steps.
    std::vector<double> p(n, 0.0);
    for (size_t j = 0; j < m; ++j)
      for (size_t i = 0; i < n; ++i) p[i] += out.barycentric[j] * vertices[j][i];
    for (int sweep = 0; sweep < opts.max_iterations; ++sweep) {
      double largest = 0.0;
      for (size_t j = 0; j < m; ++j)
        for (size_t k = 0; k < m; ++k) {
          if (j == k) continue;
          double num = 0.0, den = 0.0;
          for (size_t i = 0; i < n; ++i) {
            const double d = vertices[j][i] - vertices[k][i];
            num += w[i] * (p[i] - f[i]) * d;
            den += w[i] * d * d;
          }
          if (!(den > 0.0)) continue;
          double t = std::clamp(-num / den, -out.barycentric[j], out.barycentric[k]);
          if (t == 0.0) continue;
          out.barycentric[j] += t;
          out.barycentric[k] -= t;
          for (size_t i = 0; i < n; ++i) p[i] += t * (vertices[j][i] - vertices[k][i]);
          largest = std::max(largest, std::abs(t));
        }
      out.projection_sweeps = sweep + 1;
      if (largest < 1e-17) break;
    }
  }
  out.projection.assign(n, 0.0);
  for (size_t j = 0; j < m; ++j)
    for (size_t i = 0; i < n; ++i) out.projection[i] += out.barycentric[j] * vertices[j][i];

  const Rv proj(f.space_ptr(), out.projection);
  out.distance = luxemburg_norm(proj - f, phi).value;
  if (out.distance > opts.hull_tol)
    throw PreconditionError("f is outside the closed hull: distance " + detail::format_double(out.distance) +
                            " exceeds " + detail::format_double(opts.hull_tol));

  std::vector<Rv> terms;
  const size_t len = std::max<size_t>(opts.length, 1);
  if (exact_vertex < m) {
    terms.assign(len, f);
  } else {
    std::vector<double> centre(n, 0.0);
    for (const auto& v : vertices)
      for (size_t i = 0; i < n; ++i) centre[i] += v[i] / static_cast<double>(m);
    const Rv c(f.space_ptr(), centre);
    const double spread = luxemburg_norm(c - proj, phi).value;
    for (size_t k = 1; k <= len; ++k) {
      const double eps = std::ldexp(1.0, -static_cast<int>(std::min<size_t>(k, 2000))) / (1.0 + spread);
      terms.push_back(proj * (1.0 - eps) + c * eps);
    }
  }
  out.family = make_family(std::move(terms), phi, f, SequenceMode::Custom, true);

  out.distance_bound_ok = true;
  for (size_t k = 0; k < out.family.terms.size(); ++k) {
    const double d = luxemburg_norm(out.family.terms[k] - f, phi).value;
    out.distances.push_back(d);
    const double nk = static_cast<double>(k + 1);
    if (d > (1.0 + 1.0 / nk) * out.distance + 1.0 / nk + 1e-12) out.distance_bound_ok = false;
  }

  const OrliczFunction psi = conjugate(phi);
  const Rv g0 = strictly_positive_witness(f.space_ptr(), psi);
  const Rv f0 = strictly_positive_witness(f.space_ptr(), phi);
  out.extraction = extract_ae_subsequence(out.family, f, g0, f0, opts.extraction);
  out.certified = out.distance_bound_ok && out.extraction.success;
  return out;
}

std::vector<Rv> load_family_csv(const SpacePtr& space, const std::string& path) {
  const auto rows = detail::read_csv(path, {"term_index", "atom_id", "value"});
  std::map<long long, std::vector<double>> values;
  std::map<long long, std::vector<bool>> seen;
  for (const auto& r : rows) {
    const long long term = detail::parse_id(r[0], path);
    const long long id = detail::parse_id(r[1], path);
    const auto idx = space->index_of(id);
    if (!idx) throw ParseError(path + ": unknown atom id " + r[1]);
    auto& vals = values.try_emplace(term, space->size(), 0.0).first->second;
    auto& mark = seen.try_emplace(term, space->size(), false).first->second;
    if (mark[*idx]) throw ParseError(path + ": duplicate atom " + r[1] + " in term " + r[0]);
    const double v = detail::parse_double(r[2], "value");
    if (!std::isfinite(v)) throw ParseError(path + ": values must be finite");
    vals[*idx] = v;
    mark[*idx] = true;
  }
  if (values.empty()) throw ParseError(path + ": no terms");
  std::vector<Rv> terms;
  for (auto& [term, vals] : values) {
    const auto& mark = seen[term];
    if (std::find(mark.begin(), mark.end(), false) != mark.end())
      throw ParseError(path + ": term " + std::to_string(term) + " does not cover every atom");
    terms.emplace_back(space, std::move(vals));
  }
  return terms;
}

void save_family_csv(std::span<const Rv> terms, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "term_index,atom_id,value\n";
  for (size_t k = 0; k < terms.size(); ++k)
    for (size_t i = 0; i < terms[k].size(); ++i)
      out << k << ',' << terms[k].space().atoms()[i].id << ',' << detail::format_double(terms[k][i]) << '\n';
}

}  // namespace orlicz
