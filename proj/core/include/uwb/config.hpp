#pragma once

#include <iosfwd>
#include <string>

#include "uwb/harness.hpp"

namespace uwb {

/// Parses `key = value` lines ('#' starts a comment, lists are comma
/// separated). Unset keys keep their ExperimentConfig defaults. Unknown keys,
/// duplicates and malformed values throw InvalidConfig; the result is validated.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Writes every key so that parse_config(write_config(c)) reproduces c.
void write_config(std::ostream& os, const ExperimentConfig& cfg);

}  // namespace uwb
