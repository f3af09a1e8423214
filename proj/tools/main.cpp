#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <map>

#include "shockstab/cli.hpp"

int main(int argc, char** argv) {
  using namespace shockstab;
  CLI::App app{"shockstab: shock stability numerics for non-convex fluxes"};
  app.require_subcommand(1, 1);

  const std::map<std::string, std::string> about{
      {"models", "list built-in models and their defaults"},
      {"curve", "sample a shock curve (CSV)"},
      {"classify", "check the genuine-nonlinearity class of each family"},
      {"constants", "estimate the stability constants for a shock and weight"},
      {"certify", "search for the largest certified weight a*"},
      {"entropy-build", "build a scalar entropy for a strong shock"},
      {"region-map", "classify states around a base state (CSV)"},
      {"simulate", "run the shifted finite-volume simulation (CSV)"}};

  RunConfig rc;
  for (const std::string& name : cli_commands()) {
    const auto it = about.find(name);
    CLI::App* sub = app.add_subcommand(name, it == about.end() ? std::string() : it->second);
    sub->add_option("--config", rc.input, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", rc.output, "output path prefix (default: command name)");
    sub->add_option("--threads", rc.threads, "worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--seed", rc.seed, "seed recorded with every report");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << nlohmann::json{{"error", "usage"}, {"message", e.what()}, {"exit_code", kExitUsage}}.dump() << "\n";
    return kExitUsage;
  }
  rc.command = app.get_subcommands().front()->get_name();
  return dispatch(rc, std::cerr);
}
