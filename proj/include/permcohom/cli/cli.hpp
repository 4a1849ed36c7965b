#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "permcohom/perm/group.hpp"

namespace pcoh::cli {

/// Process exit codes; a stable contract for scripts.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int fail = 1;
inline constexpr int resource_cap = 2;
inline constexpr int partial = 3;
inline constexpr int usage = 64;
}  // namespace exit_code

/// Environment variable naming the cache directory; --cache-dir wins.
inline constexpr const char* kCacheEnv = "PERMCOHOM_CACHE";

enum class OutputFormat { json, text };

struct RunConfig {
  std::filesystem::path cache_dir;
  bool use_cache = true;
  double budget_seconds = 14400;
  std::size_t element_cap = perm::kDefaultElementCap;
  std::size_t rank_cap = 4096;
  std::string backend = "both";
  OutputFormat format = OutputFormat::json;
  /// Every computation is deterministic; recorded for audit only.
  bool seed_lock = true;

  /// Throws std::invalid_argument for a non-positive budget or cap, an
  /// unknown backend, or a cache directory that cannot be written.
  void validate() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// $PERMCOHOM_CACHE, else $XDG_CACHE_HOME/permcohom, else
/// $HOME/.cache/permcohom, else a directory under the system temp path.
std::filesystem::path default_cache_dir();

/// Runs one command line (without the program name) and returns the exit
/// code. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pcoh::cli
