#pragma once

#include <string>
#include <vector>

namespace orlicz::detail {

/// Reads a comma-separated file whose first nonblank line must equal
/// `header`; returns the remaining rows.
std::vector<std::vector<std::string>> read_csv(const std::string& path, const std::vector<std::string>& header);

long long parse_id(const std::string& s, const std::string& path);

}  // namespace orlicz::detail
