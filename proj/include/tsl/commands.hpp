#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tsl/errors.hpp"
#include "tsl/report.hpp"

namespace tsl {

enum ExitCode { kExitOk = 0, kExitError = 1, kExitHypothesis = 2, kExitViolation = 3, kExitCeiling = 4 };

/// Settings shared by the command line and the Python module. Unset values
/// fall back to the problem file and then to library defaults.
struct CommandOptions {
  std::optional<std::uint64_t> ceiling;
  std::optional<std::uint32_t> k_max;
  std::string lambda = "all";
  std::uint32_t max_degree = 1;
  std::string op;
  std::optional<std::uint32_t> d_max;
  std::string domain = "gm";
  /// Empty means $TSL_CACHE_DIR, or no cache when that is unset too.
  std::string cache_dir;
  unsigned threads = 0;
  /// Adds wall time and cache statistics to the manifest.
  bool timing = false;
};

struct CommandResult {
  Json report;
  int exit_code = kExitOk;
};

/// Runs analyze, check, basis, fiber or global. Library errors propagate.
CommandResult run_command(const std::string& command, Problem problem, const CommandOptions& options);

/// Exit code for a library error.
int exit_code_for(ErrorKind kind);

/// Error report with the manifest when the problem was parsed.
Json error_report(const Error& e, const std::string& command, const Problem* problem, const CommandOptions& options);

/// `cache gc`: removes unreadable entries, or everything with purge.
Json cache_gc(const std::string& cache_dir, bool purge);

}  // namespace tsl
