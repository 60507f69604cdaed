#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gv/divisor.hpp"
#include "gv/einstein_bogomolnyi.hpp"
#include "gv/geometry.hpp"

namespace gv::cli {

enum class Command { Vortex, Gravitate, EB, Classify, ReduceCheck, Sweep };

std::string to_string(Command c);
std::optional<Command> parse_command(const std::string& name);

/// Divisor given explicitly or drawn from the run seed.
struct DivisorSpec {
  std::vector<DivisorPoint> points;
  int random_degree = 0;  // > 0: draw this many simple points
};

struct SweepSpec {
  Command command = Command::Vortex;
  nlohmann::json base;
  std::vector<double> tau;
  std::vector<double> alpha;
  std::vector<double> volume;
  std::vector<nlohmann::json> divisors;
};

struct RunConfig {
  Command command = Command::Vortex;
  GridDescriptor surface;
  std::optional<DivisorSpec> divisor;
  /// Formal constant section (no divisor); degree is its nominal c_1.
  std::optional<double> constant_density;
  int constant_degree = 0;

  double tau = 1.0;
  double alpha_target = 0.0;
  double initial_step = 1e-3;
  double tolerance = 1e-10;
  int max_iterations = 0;
  bool kernel_projection = false;

  CPrimePolicy c_prime_policy = CPrimePolicy::Volume;
  double c_prime = 0.0;
  double target_volume = 6.283185307179586;

  /// For reduce-check: which solver produces the input ("gravitate", "eb").
  std::string reduce_source = "gravitate";

  std::uint64_t seed = 0;
  int workers = 1;
  std::filesystem::path out_dir = "gvortex-out";
  std::optional<SweepSpec> sweep;

  nlohmann::json echo;
};

/// Error with the JSON pointer (or line) it refers to.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what) {}
};

/// Parses and validates a configuration object. `command` overrides the
/// "command" field when given.
RunConfig parse_config(const nlohmann::json& j,
                       std::optional<Command> command = {});

DivisorSpec parse_divisor(const nlohmann::json& j, const std::string& where);

/// Reads a JSON file, reporting syntax errors with line and column.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace gv::cli
