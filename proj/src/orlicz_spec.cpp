#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "orlicz/error.hpp"
#include "orlicz/extended_real.hpp"
#include "orlicz/orlicz_function.hpp"
#include "text_util.hpp"

namespace orlicz {

namespace {

std::map<std::string, std::string> parse_params(std::string_view body, std::string_view spec) {
  std::map<std::string, std::string> out;
  if (detail::trim(body).empty()) return out;
  for (auto item : detail::split(body, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("expected key=value in Orlicz spec '" + std::string(spec) + "'");
    out.emplace(std::string(detail::trim(item.substr(0, eq))), std::string(detail::trim(item.substr(eq + 1))));
  }
  return out;
}

double take(std::map<std::string, std::string>& params, const std::string& key, std::string_view spec) {
  auto it = params.find(key);
  if (it == params.end()) throw ParseError("Orlicz spec '" + std::string(spec) + "' is missing '" + key + "'");
  const double v = detail::parse_double(it->second, key);
  params.erase(it);
  return v;
}

void expect_empty(const std::map<std::string, std::string>& params, std::string_view spec) {
  if (!params.empty())
    throw ParseError("unknown parameter '" + params.begin()->first + "' in Orlicz spec '" + std::string(spec) + "'");
}

}  // namespace

OrliczFunction parse_orlicz_spec(std::string_view spec) {
  const std::string_view s = detail::trim(spec);
  const auto colon = s.find(':');
  const std::string name(detail::trim(s.substr(0, colon)));
  const std::string_view body = colon == std::string_view::npos ? std::string_view{} : s.substr(colon + 1);

  try {
    if (name == "custom") {
      const auto eq = body.find('=');
      if (eq == std::string_view::npos || detail::trim(body.substr(0, eq)) != "file")
        throw ParseError("custom Orlicz spec needs file=<path>");
      return load_custom_table(std::string(detail::trim(body.substr(eq + 1))));
    }
    auto params = parse_params(body, s);
    if (name == "power") {
      const double p = take(params, "p", s);
      expect_empty(params, s);
      return OrliczFunction::power(p);
    }
    if (name == "scaled_power") {
      const double p = take(params, "p", s);
      double c = 1.0 / p;
      if (params.count("c")) c = take(params, "c", s);
      expect_empty(params, s);
      return OrliczFunction::scaled_power(p, c);
    }
    if (name == "linear" || name == "exp_young" || name == "linf_step") {
      expect_empty(params, s);
      if (name == "linear") return OrliczFunction::linear();
      if (name == "exp_young") return OrliczFunction::exp_young();
      return OrliczFunction::linf_step();
    }
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid Orlicz spec '") + std::string(s) + "': " + e.what());
  }
  throw ParseError("unknown Orlicz function '" + name + "'");
}

std::string to_spec(const OrliczFunction& phi) { return phi.label(); }

OrliczFunction custom_from_table(std::string label, std::vector<double> t, std::vector<double> values) {
  if (t.size() != values.size() || t.empty()) throw ParseError("Orlicz table needs matching non-empty columns");
  if (t.front() != 0.0) {
    t.insert(t.begin(), 0.0);
    values.insert(values.begin(), 0.0);
  }
  if (values.front() != 0.0) throw ParseError("Orlicz table must have phi(0) = 0");
  double horizon = kInfinity;
  if (std::isinf(values.back())) {
    if (t.size() < 3) throw ParseError("Orlicz table needs a finite row before 'inf'");
    t.pop_back();
    values.pop_back();
    horizon = t.back();
  }
  if (t.size() < 2) throw ParseError("Orlicz table needs at least two finite rows");
  for (size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || t[i] < 0.0) throw ParseError("Orlicz table t values must be finite and >= 0");
    if (!std::isfinite(values[i]) || values[i] < 0.0)
      throw ParseError("Orlicz table values must be finite and >= 0 (inf only in the last row)");
    if (i > 0) {
      if (!(t[i] > t[i - 1])) throw ParseError("Orlicz table t values must be strictly increasing");
      if (values[i] < values[i - 1]) throw ParseError("Orlicz table values must be nondecreasing");
    }
    if (i > 1) {
      const double s0 = (values[i - 1] - values[i - 2]) / (t[i - 1] - t[i - 2]);
      const double s1 = (values[i] - values[i - 1]) / (t[i] - t[i - 1]);
      if (s1 < s0 - 1e-12 * (1.0 + std::abs(s0))) throw ParseError("Orlicz table values must be convex");
    }
  }
  if (values.back() == 0.0 && std::isinf(horizon) ) throw ParseError("Orlicz table describes the zero function");

  auto segment = [t, values](size_t i, double x) {
    const double y0 = values[i], y1 = values[i + 1];
    const double u = (x - t[i]) / (t[i + 1] - t[i]);
    if (y0 > 0.0 && y1 > 0.0) return y0 * std::pow(y1 / y0, u);
    return y0 + u * (y1 - y0);
  };
  auto eval = [t, segment](double x) {
    if (x <= 0.0) return 0.0;
    size_t i = 0;
    if (x >= t.back()) {
      i = t.size() - 2;
    } else {
      auto it = std::upper_bound(t.begin(), t.end(), x);
      i = static_cast<size_t>(it - t.begin()) - 1;
    }
    const double v = segment(i, x);
    return std::isfinite(v) ? v : kInfinity;
  };
  return OrliczFunction::custom(std::move(label), eval, horizon);
}

OrliczFunction load_custom_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open Orlicz table '" + path + "'");
  std::vector<double> t, v;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto cols = detail::split(trimmed, ',');
    if (cols.size() != 2) throw ParseError(path + ":" + std::to_string(line_no) + ": expected two columns");
    double a, b;
    if (!detail::try_parse_double(cols[0], a) || !detail::try_parse_double(cols[1], b)) {
      if (t.empty() && line_no == 1) continue;  // header
      throw ParseError(path + ":" + std::to_string(line_no) + ": cannot parse row");
    }
    t.push_back(a);
    v.push_back(b);
  }
  return custom_from_table("custom:file=" + path, std::move(t), std::move(v));
}

}  // namespace orlicz
