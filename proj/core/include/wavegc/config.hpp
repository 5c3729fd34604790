#pragma once

#include <map>
#include <string>

#include "wavegc/harness.hpp"

namespace wavegc {

/// Flat `key = value` text; '#' starts a comment. Throws InvalidInput on
/// malformed lines.
std::map<std::string, std::string> parse_key_values(const std::string& text);
std::map<std::string, std::string> read_key_value_file(const std::string& path);

/// Applies one setting; unknown keys and invalid values throw InvalidInput.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);
void apply_settings(RunConfig& config, const std::map<std::string, std::string>& settings);

/// Checks that every numeric field is in range.
void validate(const RunConfig& config);

}  // namespace wavegc
