#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

namespace nlts::experiments {

enum ExitCode : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_validation = 2,
  exit_numerical = 3,
  exit_condition = 4,
  exit_replay_mismatch = 5,
};

inline constexpr int kSchemaVersion = 1;

const char* tool_version();

struct RunOptions {
  /// Overrides the config's output_dir.
  std::optional<std::filesystem::path> out_dir;
  /// 0 means NLTS_THREADS or 1.
  int threads = 0;
  /// When set, must match the config's command.
  std::optional<std::string> command;
};

/// Checks the config against the schema of its command; throws ValidationError.
void validate_config(const nlohmann::json& config);

/// Runs the command and returns its report; CSV side outputs go to `out_dir`.
nlohmann::json execute(const nlohmann::json& config, const std::filesystem::path& config_dir,
                       const std::filesystem::path& out_dir, int threads);

/// Reads the config, runs it and writes report.json and manifest.json.
/// Diagnostics go to `err`. Returns an ExitCode.
int run(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& err);

/// Re-runs the config embedded in a manifest into <dir>/.replay and
/// byte-compares report.json. Returns exit_ok, exit_replay_mismatch (with a
/// field-level diff on `err`) or an error code.
int replay(const std::filesystem::path& manifest_path, std::ostream& err, int threads = 0);

/// 64-bit FNV-1a of the compact config dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

}  // namespace nlts::experiments
