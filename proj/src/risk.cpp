#include "orlicz/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "orlicz/error.hpp"
#include "orlicz/extended_real.hpp"
#include "text_util.hpp"

namespace orlicz {

std::optional<double> RiskFunctional::closed_form_conjugate(Values) const { return std::nullopt; }

std::optional<std::vector<double>> RiskFunctional::closed_form_maximizer(Values) const { return std::nullopt; }

double RiskFunctional::operator()(const Rv& f) const {
  if (f.space_ptr() != space_ && !(f.space() == *space_))
    throw StructureError("random variable and risk functional live on different spaces");
  return evaluate(f.values());
}

namespace {

double mass(Values w, Values g) {
  double s = 0.0;
  for (size_t i = 0; i < g.size(); ++i) s += w[i] * g[i];
  return s;
}

bool is_density(Values w, Values g, double upper = kInfinity) {
  for (double v : g)
    if (v < 0.0 || v > upper + kDensityTol) return false;
  return std::abs(mass(w, g) - 1.0) <= kDensityTol;
}

void require_probability(const SpacePtr& space, const char* what) {
  if (!space->is_probability()) throw DomainError(std::string(what) + " needs a probability space");
}

class Entropic final : public RiskFunctional {
public:
  Entropic(double beta, SpacePtr space) : RiskFunctional(std::move(space)), beta_(beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("entropic risk needs beta > 0");
    require_probability(space_ptr(), "entropic risk");
  }
  std::string name() const override { return "entropic:beta=" + detail::format_double(beta_); }

  double evaluate(Values f) const override {
    const auto w = space().weights();
    double m = -kInfinity;
    for (double v : f) m = std::max(m, beta_ * v);
    double s = 0.0;
    for (size_t i = 0; i < f.size(); ++i) s += w[i] * std::exp(beta_ * f[i] - m);
    return (m + std::log(s)) / beta_;
  }

  bool has_closed_form_conjugate() const override { return true; }
  std::optional<double> closed_form_conjugate(Values g) const override {
    const auto w = space().weights();
    if (!is_density(w, g)) return kInfinity;
    double s = 0.0;
    for (size_t i = 0; i < g.size(); ++i)
      if (g[i] > 0.0) s += w[i] * g[i] * std::log(g[i]);
    return s / beta_;
  }

  std::optional<std::vector<double>> closed_form_maximizer(Values f) const override {
    const auto w = space().weights();
    double m = -kInfinity;
    for (double v : f) m = std::max(m, beta_ * v);
    std::vector<double> g(f.size());
    double z = 0.0;
    for (size_t i = 0; i < f.size(); ++i) {
      g[i] = std::exp(beta_ * f[i] - m);
      z += w[i] * g[i];
    }
    for (double& v : g) v /= z;
    return g;
  }

private:
  double beta_;
};

class AverageValueAtRisk final : public RiskFunctional {
public:
  AverageValueAtRisk(double alpha, SpacePtr space) : RiskFunctional(std::move(space)), alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("average value at risk needs alpha in (0, 1]");
    require_probability(space_ptr(), "average value at risk");
  }
  std::string name() const override { return "avar:alpha=" + detail::format_double(alpha_); }

  double evaluate(Values f) const override {
    const auto g = greedy(f);
    double s = 0.0;
    const auto w = space().weights();
    for (size_t i = 0; i < f.size(); ++i) s += w[i] * g[i] * f[i];
    return s;
  }

  bool has_closed_form_conjugate() const override { return true; }
  std::optional<double> closed_form_conjugate(Values g) const override {
    return is_density(space().weights(), g, 1.0 / alpha_) ? 0.0 : kInfinity;
  }
  std::optional<std::vector<double>> closed_form_maximizer(Values f) const override { return greedy(f); }

private:
  // Fill g = 1/α on the largest losses until Σ w g = 1.
  std::vector<double> greedy(Values f) const {
    const auto w = space().weights();
    std::vector<size_t> order(f.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return f[a] > f[b]; });
    std::vector<double> g(f.size(), 0.0);
    const double cap = 1.0 / alpha_;
    double remaining = 1.0;
    for (size_t i : order) {
      if (remaining <= 0.0) break;
      const double take = std::min(cap, remaining / w[i]);
      g[i] = take;
      remaining -= take * w[i];
    }
    return g;
  }

  double alpha_;
};

class WorstCase final : public RiskFunctional {
public:
  using RiskFunctional::RiskFunctional;
  std::string name() const override { return "worst_case"; }
  double evaluate(Values f) const override { return *std::max_element(f.begin(), f.end()); }
  bool has_closed_form_conjugate() const override { return true; }
  std::optional<double> closed_form_conjugate(Values g) const override {
    return is_density(space().weights(), g) ? 0.0 : kInfinity;
  }
  std::optional<std::vector<double>> closed_form_maximizer(Values f) const override {
    const size_t i = static_cast<size_t>(std::max_element(f.begin(), f.end()) - f.begin());
    std::vector<double> g(f.size(), 0.0);
    g[i] = 1.0 / space().weights()[i];
    return g;
  }
};

class Expectation final : public RiskFunctional {
public:
  using RiskFunctional::RiskFunctional;
  std::string name() const override { return "expectation"; }
  double evaluate(Values f) const override { return mass(space().weights(), f); }
  bool has_closed_form_conjugate() const override { return true; }
  std::optional<double> closed_form_conjugate(Values g) const override {
    for (double v : g)
      if (std::abs(v - 1.0) > kDensityTol) return kInfinity;
    return 0.0;
  }
  std::optional<std::vector<double>> closed_form_maximizer(Values f) const override {
    return std::vector<double>(f.size(), 1.0);
  }
};

class SquareControl final : public RiskFunctional {
public:
  using RiskFunctional::RiskFunctional;
  std::string name() const override { return "control:square"; }
  bool declared_monotone() const override { return false; }
  double evaluate(Values f) const override {
    const auto w = space().weights();
    double s = 0.0;
    for (size_t i = 0; i < f.size(); ++i) s += w[i] * f[i] * f[i];
    return s;
  }
  bool has_closed_form_conjugate() const override { return true; }
  std::optional<double> closed_form_conjugate(Values g) const override {
    const auto w = space().weights();
    double s = 0.0;
    for (size_t i = 0; i < g.size(); ++i) s += 0.25 * w[i] * g[i] * g[i];
    return s;
  }
  std::optional<std::vector<double>> closed_form_maximizer(Values f) const override {
    std::vector<double> g(f.begin(), f.end());
    for (double& v : g) v *= 2.0;
    return g;
  }
};

class Shifted final : public RiskFunctional {
public:
  Shifted(RiskPtr base, double c) : RiskFunctional(base->space_ptr()), base_(std::move(base)), c_(c) {}
  std::string name() const override { return base_->name() + "+" + detail::format_double(c_); }
  double evaluate(Values f) const override { return base_->evaluate(f) + c_; }
  bool declared_monotone() const override { return base_->declared_monotone(); }
  bool declared_convex() const override { return base_->declared_convex(); }
  std::vector<double> proper_witness() const override { return base_->proper_witness(); }
  bool has_closed_form_conjugate() const override { return base_->has_closed_form_conjugate(); }
  std::optional<double> closed_form_conjugate(Values g) const override {
    auto v = base_->closed_form_conjugate(g);
    if (v) *v -= c_;
    return v;
  }
  std::optional<std::vector<double>> closed_form_maximizer(Values f) const override {
    return base_->closed_form_maximizer(f);
  }

private:
  RiskPtr base_;
  double c_;
};

class PointJump final : public RiskFunctional {
public:
  PointJump(RiskPtr base, std::vector<double> at, double jump)
      : RiskFunctional(base->space_ptr()), base_(std::move(base)), at_(std::move(at)), jump_(jump) {
    if (at_.size() != space().size()) throw StructureError("jump point has the wrong dimension");
  }
  std::string name() const override { return base_->name() + "+jump"; }
  double evaluate(Values f) const override {
    const double v = base_->evaluate(f);
    return std::equal(f.begin(), f.end(), at_.begin(), at_.end()) ? v + jump_ : v;
  }
  bool declared_monotone() const override { return false; }
  bool declared_convex() const override { return false; }
  std::vector<double> proper_witness() const override { return base_->proper_witness(); }

private:
  RiskPtr base_;
  std::vector<double> at_;
  double jump_;
};

}  // namespace

RiskPtr entropic(double beta, SpacePtr space) { return std::make_shared<Entropic>(beta, std::move(space)); }
RiskPtr average_value_at_risk(double alpha, SpacePtr space) {
  return std::make_shared<AverageValueAtRisk>(alpha, std::move(space));
}
RiskPtr worst_case(SpacePtr space) { return std::make_shared<WorstCase>(std::move(space)); }
RiskPtr expectation(SpacePtr space) { return std::make_shared<Expectation>(std::move(space)); }
RiskPtr non_monotone_control(SpacePtr space) { return std::make_shared<SquareControl>(std::move(space)); }
RiskPtr shifted(RiskPtr base, double c) { return std::make_shared<Shifted>(std::move(base), c); }
RiskPtr point_jump(RiskPtr base, std::vector<double> at, double jump) {
  return std::make_shared<PointJump>(std::move(base), std::move(at), jump);
}

RiskPtr parse_risk_spec(std::string_view spec, SpacePtr space) {
  const auto s = detail::trim(spec);
  const auto colon = s.find(':');
  const std::string name(detail::trim(s.substr(0, colon)));
  const std::string_view body = colon == std::string_view::npos ? std::string_view{} : detail::trim(s.substr(colon + 1));
  auto param = [&](std::string_view key) {
    const auto eq = body.find('=');
    if (eq == std::string_view::npos || detail::trim(body.substr(0, eq)) != key)
      throw ParseError("risk spec '" + std::string(s) + "' needs " + std::string(key) + "=<value>");
    return detail::parse_double(body.substr(eq + 1), key);
  };
  try {
    if (name == "entropic") return entropic(param("beta"), std::move(space));
    if (name == "avar") return average_value_at_risk(param("alpha"), std::move(space));
    if (name == "worst_case" && body.empty()) return worst_case(std::move(space));
    if (name == "expectation" && body.empty()) return expectation(std::move(space));
    if (name == "control" && body == "square") return non_monotone_control(std::move(space));
  } catch (const DomainError& e) {
    throw ParseError("invalid risk spec '" + std::string(s) + "': " + e.what());
  }
  throw ParseError("unknown risk spec '" + std::string(s) + "'");
}

ValidationReport validate(const RiskFunctional& phi, int trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("validate needs trials >= 1");
  ValidationReport r;
  const size_t n = phi.space().size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr double tol = 1e-9;

  {
    const auto witness = phi.proper_witness();
    const double v = phi.evaluate(witness);
    r.proper_ok = std::isfinite(v);
  }

  std::vector<double> f(n), h(n), mid(n);
  for (int t = 0; t < trials; ++t) {
    for (size_t i = 0; i < n; ++i) {
      f[i] = normal(rng);
      // Leave some coordinates equal so boundary cases are exercised.
      h[i] = f[i] + (unit(rng) < 0.25 ? 0.0 : std::abs(normal(rng)));
    }
    const double vf = phi.evaluate(f), vh = phi.evaluate(h);
    if (std::isnan(vf) || std::isnan(vh) || vf == -kInfinity || vh == -kInfinity) r.proper_ok = false;
    if (vf > vh + tol) {
      ++r.monotone_violations;
      if (vf - vh > r.worst_monotone_violation) {
        r.worst_monotone_violation = vf - vh;
        r.monotone_witness_low = f;
        r.monotone_witness_high = h;
      }
    }

    for (size_t i = 0; i < n; ++i) {
      f[i] = normal(rng);
      h[i] = normal(rng);
    }
    const double theta = unit(rng);
    for (size_t i = 0; i < n; ++i) mid[i] = theta * f[i] + (1.0 - theta) * h[i];
    const double lhs = phi.evaluate(mid);
    const double rhs = theta * phi.evaluate(f) + (1.0 - theta) * phi.evaluate(h);
    if (lhs > rhs + tol) {
      ++r.convex_violations;
      if (lhs - rhs > r.worst_convex_violation) {
        r.worst_convex_violation = lhs - rhs;
        r.convex_witness_a = f;
        r.convex_witness_b = h;
      }
    }
  }
  r.monotone_ok = r.monotone_violations == 0;
  r.convex_ok = r.convex_violations == 0;
  return r;
}

}  // namespace orlicz
