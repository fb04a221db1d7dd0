// jnlab: command-line front end. Every subcommand is turned into a RunConfig
// and executed by jnlab::cli::run; `jnlab run --config FILE` replays an echo.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "jnlab/cli.hpp"
#include "jnlab/error.hpp"

namespace {

using nlohmann::json;
namespace cli = jnlab::cli;

struct Leaf {
  const cli::CommandInfo* info = nullptr;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::uint64_t seed = cli::kDefaultSeed;
  std::string out_dir = "jnlab-out";
};

std::string flag_name(const std::string& key) {
  std::string out = key;
  for (char& c : out)
    if (c == '_') c = '-';
  return out;
}

json convert(const std::string& key, const json& def, const std::string& text) {
  try {
    if (def.is_string()) return text;
    if (def.is_number() || (def.is_null() && key != "output" && key != "points" && key != "limit" && key != "splits" &&
                            key != "sets" && key != "schedule")) {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(text, &used);
      if (used != text.size() || text.front() == '-') throw std::invalid_argument("not an integer");
      return v;
    }
    if (key == "output") return text;
    return json::parse(text);
  } catch (const std::exception&) {
    throw jnlab::Error(jnlab::ErrorCode::kSchema, "bad value '" + text + "' for --" + flag_name(key));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jnlab: exact Josefson-Nissenzweig sequences on finitely approximated Stone spaces"};
  app.require_subcommand(1);

  std::map<std::string, CLI::App*> groups;
  std::map<std::string, Leaf> leaves;
  for (const cli::CommandInfo& info : cli::command_table()) {
    const auto space = info.name.find(' ');
    CLI::App* parent = &app;
    std::string leaf_name = info.name;
    if (space != std::string::npos) {
      const std::string group = info.name.substr(0, space);
      leaf_name = info.name.substr(space + 1);
      if (!groups.count(group)) {
        groups[group] = app.add_subcommand(group, group + " commands");
        groups[group]->require_subcommand(1);
      }
      parent = groups[group];
    }
    Leaf& leaf = leaves[info.name];
    leaf.info = &info;
    leaf.app = parent->add_subcommand(leaf_name, info.summary);
    leaf.app->footer("Anchor: " + info.anchor);
    for (const auto& [key, def] : info.defaults.items()) {
      const std::string desc = "default " + (def.is_null() ? std::string("unset") : def.dump());
      if (def.is_boolean()) {
        leaf.flags[key] = false;
        leaf.app->add_flag("--" + flag_name(key), leaf.flags[key], desc);
      } else {
        std::string names = "--" + flag_name(key);
        if (key == "terms") names += ",--n";
        leaf.app->add_option(names, leaf.values[key], desc);
      }
    }
    leaf.app->add_option("--seed", leaf.seed, "seed for random families and maps (env " + std::string(cli::kSeedEnv) + " overrides)");
    leaf.app->add_option("--out", leaf.out_dir, "output directory");
  }

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "replay a config file (for example an echoed config.json)");
  run->add_option("--config", config_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitSchema;
  }

  if (run->parsed()) return cli::run_file(config_path, std::cout);

  for (auto& [name, leaf] : leaves) {
    if (!leaf.app->parsed()) continue;
    cli::RunConfig config;
    config.command = name;
    config.seed = leaf.seed;
    config.out_dir = leaf.out_dir;
    try {
      for (const auto& [key, def] : leaf.info->defaults.items()) {
        if (def.is_boolean()) {
          if (leaf.app->count("--" + flag_name(key)) > 0) config.params[key] = leaf.flags[key];
        } else if (leaf.app->count("--" + flag_name(key)) > 0) {
          config.params[key] = convert(key, def, leaf.values[key]);
        }
      }
    } catch (const jnlab::Error& e) {
      std::cout << "error: " << e.what() << "\n";
      return cli::kExitSchema;
    }
    return cli::run(config, std::cout);
  }
  return cli::kExitSchema;
}
