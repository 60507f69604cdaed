// gvortex: command-line driver for the vortex, gravitating vortex and
// Einstein-Bogomol'nyi solvers, divisor classification and reduction checks.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "gv/cli/config.hpp"
#include "gv/cli/run.hpp"

int main(int argc, char** argv) {
  using namespace gv::cli;
  CLI::App app{"Vortex, gravitating vortex and Einstein-Bogomol'nyi solver"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  int workers = 0;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<double> max_alpha;

  const char* names[] = {"vortex", "gravitate", "eb", "classify", "reduce-check", "sweep"};
  const char* help[] = {"solve the abelian vortex equation",
                        "continue gravitating vortices in the coupling constant",
                        "solve the Einstein-Bogomol'nyi equations on the sphere",
                        "classify a divisor on the projective line",
                        "solve, then check the reduced Kaehler-Yang-Mills system",
                        "run a parameter grid"};
  for (int k = 0; k < 6; ++k) {
    CLI::App* sub = app.add_subcommand(names[k], help[k]);
    sub->add_option("--config", config_path, "configuration JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--workers", workers, "parallel sweep cells")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for random divisors");
    sub->add_option("--tolerance", tolerance, "solver residual tolerance");
    sub->add_option("--max-alpha", max_alpha, "coupling constant target");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  RunConfig cfg;
  try {
    nlohmann::json j = read_json_file(config_path);
    if (!j.is_object()) throw ConfigError(config_path, "configuration must be a JSON object");
    if (tolerance) j["tolerance"] = *tolerance;
    if (seed) j["seed"] = *seed;
    if (workers > 0) j["workers"] = workers;
    if (max_alpha) {
      if (j.contains("alpha")) j.erase("alpha");
      j["alpha_target"] = *max_alpha;
    }
    if (name == "sweep" && j.contains("sweep") && j["sweep"].is_object()) {
      // solver overrides apply to every cell
      nlohmann::json& base = j["sweep"]["base"];
      if (base.is_null()) base = nlohmann::json::object();
      if (tolerance) base["tolerance"] = *tolerance;
      if (max_alpha) base["alpha_target"] = *max_alpha;
      j.erase("tolerance");
      j.erase("alpha_target");
    }
    cfg = parse_config(j, parse_command(name));
  } catch (const std::exception& e) {
    std::cerr << "gvortex " << name << ": configuration error: " << e.what() << '\n';
    // the manifest is still written when an output directory is known
    RunConfig failed;
    failed.command = *parse_command(name);
    failed.out_dir = out_dir.empty() ? "gvortex-out" : out_dir;
    try {
      std::filesystem::create_directories(failed.out_dir);
      nlohmann::json m{{"command", name}, {"status", "config-error"},
                       {"exit_code", int(kConfigError)}, {"message", e.what()},
                       {"files", nlohmann::json::array()}};
      std::ofstream(failed.out_dir / "manifest.json") << m.dump(2) << '\n';
    } catch (...) {
    }
    return kConfigError;
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  return run(cfg, std::cerr).exit_code;
}
