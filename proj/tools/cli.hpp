#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <string_view>

namespace conbqa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point for `conbqa <run|resolution|solve> ...`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

using FlatConfig = std::map<std::string, std::string>;

/// `key = value` per line; '#' starts a comment. Keys are option names
/// without the leading dashes. Throws conbqa::ParseError naming the line.
FlatConfig parse_flat_config(std::string_view text);

/// Sorted `key=value` lines; parse_flat_config(serialize_flat_config(c)) == c.
std::string serialize_flat_config(const FlatConfig& config);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace conbqa::cli
