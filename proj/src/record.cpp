#include "orlicz/record.hpp"

#include <cmath>

#include <json.hpp>

#include "orlicz/error.hpp"
#include "text_util.hpp"

namespace orlicz {

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return detail::format_double(v);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "json") return Format::Json;
  if (text == "csv") return Format::Csv;
  throw ParseError("unknown output format '" + std::string(text) + "' (expected json or csv)");
}

void Record::set(const std::string& key, const std::vector<std::size_t>& v) {
  fields_[key] = std::vector<long long>(v.begin(), v.end());
}

void Record::merge(const std::string& prefix, const Record& other) {
  for (const auto& [k, v] : other.fields_) fields_[prefix + k] = v;
}

std::string Record::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : fields_) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            j[key] = number(v);
          } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            nlohmann::json arr = nlohmann::json::array();
            for (double x : v) arr.push_back(number(x));
            j[key] = std::move(arr);
          } else {
            j[key] = v;
          }
        },
        value);
  }
  return j.dump(2) + "\n";
}

std::string Record::to_csv() const {
  std::string out = "key,value\n";
  for (const auto& [key, value] : fields_) {
    std::string text = std::visit(
        [](const auto& v) -> std::string {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, bool>) {
            return v ? "true" : "false";
          } else if constexpr (std::is_same_v<T, long long>) {
            return std::to_string(v);
          } else if constexpr (std::is_same_v<T, double>) {
            return detail::format_double(v);
          } else if constexpr (std::is_same_v<T, std::string>) {
            return v;
          } else {
            std::string joined;
            for (size_t i = 0; i < v.size(); ++i) {
              if (i) joined += ';';
              if constexpr (std::is_same_v<T, std::vector<double>>)
                joined += detail::format_double(v[i]);
              else
                joined += std::to_string(v[i]);
            }
            return joined;
          }
        },
        value);
    out += csv_escape(key) + "," + csv_escape(text) + "\n";
  }
  return out;
}

std::string Record::render(Format format) const { return format == Format::Json ? to_json() : to_csv(); }

}  // namespace orlicz
