#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <string>

namespace etdrdp {

using ConfigMap = std::map<std::string, std::string>;

/// Parses `key = value` lines. `#` starts a comment, blank lines are skipped, keys and values are
/// trimmed and a repeated key keeps its last value. Throws InvalidArgument naming the bad line.
ConfigMap parse_config(std::istream& in);
ConfigMap load_config(const std::filesystem::path& path);

}  // namespace etdrdp
