#pragma once

// Reproducible runs. Every invocation is first turned into a RunConfig
// (JSON), echoed next to its outputs, and executed from that config alone.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace jnlab::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240611;
inline constexpr const char* kSeedEnv = "JN_LAB_SEED";

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitSchema = 2,
  kExitConstruction = 3,
};

/// {"command": "jn standard", "params": {...}, "seed": 123, "out_dir": "out"}
/// Missing params take their defaults; the effective config (defaults filled
/// in, seed after the environment override) is what gets echoed.
struct RunConfig {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir = "jnlab-out";

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

struct CommandInfo {
  std::string name;     // "jn standard"
  std::string summary;  // one line for --help
  std::string anchor;   // the object or statement the command realizes
  nlohmann::json defaults;
};

/// Commands accepted by run(), with their parameter defaults. A null default
/// marks an optional parameter.
const std::vector<CommandInfo>& command_table();
const CommandInfo& command_info(const std::string& name);
std::vector<std::string> commands();

/// Fills defaults and validates parameter types; throws Error(kSchema).
RunConfig normalize(const RunConfig& config);

/// Executes the config, writing artifacts under out_dir (or next to an
/// explicit output path) and a one-line summary to `log`.
int run(const RunConfig& config, std::ostream& log);

/// Reads a config file and runs it; schema and I/O problems map to exit 2.
int run_file(const std::string& path, std::ostream& log);

}  // namespace jnlab::cli
