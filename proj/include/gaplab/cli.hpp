#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace gaplab::cli {

inline constexpr uint64_t kDefaultSeed = 1729;

// A run is fully determined by (command, params, seed).
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> params;
  uint64_t seed = kDefaultSeed;
  std::string output_path = "-";  // "-" = stdout
  std::string format = "csv";    // csv | tree
};

RunConfig parse_config_file(const std::string& path);
// Merges an optional --config file with command-line flags; flags win.
RunConfig parse_command_line(int argc, const char* const* argv);
std::string serialize_config(const RunConfig& cfg);

// Executes the selected command and writes its report. Throws on failure.
void run(const RunConfig& cfg);

// run() wrapped with diagnostics: prints "error: <category>: ..." to stderr
// and returns a category-specific nonzero exit code.
int main_entry(int argc, const char* const* argv);

}  // namespace gaplab::cli
