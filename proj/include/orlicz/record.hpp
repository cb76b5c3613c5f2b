#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace orlicz {

enum class Format { Json, Csv };

Format parse_format(std::string_view text);

/// A flat report: string keys mapped to scalars or vectors. Rendering sorts
/// keys, so identical contents always produce identical bytes.
class Record {
public:
  using Value = std::variant<bool, long long, double, std::string, std::vector<double>, std::vector<long long>>;

  void set(const std::string& key, bool v) { fields_[key] = v; }
  void set(const std::string& key, int v) { fields_[key] = static_cast<long long>(v); }
  void set(const std::string& key, long long v) { fields_[key] = v; }
  void set(const std::string& key, std::size_t v) { fields_[key] = static_cast<long long>(v); }
  void set(const std::string& key, double v) { fields_[key] = v; }
  void set(const std::string& key, const char* v) { fields_[key] = std::string(v); }
  void set(const std::string& key, std::string v) { fields_[key] = std::move(v); }
  void set(const std::string& key, std::vector<double> v) { fields_[key] = std::move(v); }
  void set(const std::string& key, std::vector<long long> v) { fields_[key] = std::move(v); }
  void set(const std::string& key, const std::vector<std::size_t>& v);

  /// Copies every field of `other` under `prefix` + key.
  void merge(const std::string& prefix, const Record& other);

  bool contains(const std::string& key) const { return fields_.count(key) != 0; }
  const Value& at(const std::string& key) const { return fields_.at(key); }
  const std::map<std::string, Value>& fields() const noexcept { return fields_; }

  /// JSON object; non-finite doubles become the strings "inf", "-inf", "nan".
  std::string to_json() const;
  /// Two columns `key,value`; vector entries joined by ';'.
  std::string to_csv() const;
  std::string render(Format format) const;

private:
  std::map<std::string, Value> fields_;
};

}  // namespace orlicz
