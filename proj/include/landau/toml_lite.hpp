#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace landau {

class TomlError : public std::runtime_error {
 public:
  TomlError(const std::string& what, int line) : std::runtime_error(what + " (line " + std::to_string(line) + ")") {}
};

/// Parses the subset of TOML used by experiment files into a JSON tree.
///
/// Supported: comments, [table] and [dotted.table] headers, bare, quoted and
/// dotted keys, basic and literal strings, integers and floats (with _
/// separators, inf, nan), booleans, arrays (which may span lines) and inline
/// tables. Not supported: arrays of tables, dates, multi-line strings.
nlohmann::json parse_toml(std::string_view text);

}  // namespace landau
