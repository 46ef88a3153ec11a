#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hallmhd/commands.hpp"

int main(int argc, char** argv) {
  using namespace hallmhd;
  CLI::App app{"Mild-solution solver and diagnostics for the Hall-MHD system"};
  app.set_version_flag("--version", "hallmhd 0.1.0");

  std::string command, config_path;
  std::vector<std::string> overrides;
  bool list_keys = false;
  app.add_option("command", command, "command to run")->check(CLI::IsMember(kCommands));
  app.add_option("--config,-c", config_path, "flat key = value configuration file");
  app.add_option("--set,-s", overrides, "key=value override, applied after the file")->take_all();
  app.add_flag("--list-keys", list_keys, "print the configuration keys and exit");
  app.footer("HALLMHD_THREADS caps the worker count. Exit status: 0 pass, 1 failed check, 2 usage error.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (list_keys) {
    for (const auto& [k, help] : config_keys()) std::cout << k << "\t" << help << "\n";
    return kExitPass;
  }
  if (command.empty() || config_path.empty()) {
    std::cerr << "usage: hallmhd <command> --config <path> [--set key=value]...\n";
    return kExitUsage;
  }

  try {
    RunConfig config = load_config(config_path);
    for (const auto& o : overrides) apply_override(config, o);
    config.command = command;
    return run_command(config, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "hallmhd: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hallmhd: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "hallmhd: " << e.what() << "\n";
    return kExitFailed;
  }
}
