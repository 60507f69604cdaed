#include "gv/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gv::cli {

using nlohmann::json;

std::string to_string(Command c) {
  switch (c) {
    case Command::Vortex: return "vortex";
    case Command::Gravitate: return "gravitate";
    case Command::EB: return "eb";
    case Command::Classify: return "classify";
    case Command::ReduceCheck: return "reduce-check";
    case Command::Sweep: return "sweep";
  }
  return "unknown";
}

std::optional<Command> parse_command(const std::string& name) {
  for (Command c : {Command::Vortex, Command::Gravitate, Command::EB,
                    Command::Classify, Command::ReduceCheck, Command::Sweep})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

namespace {

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where, "expected a finite number");
  return v;
}

double positive(const json& j, const std::string& where) {
  const double v = number(j, where);
  if (!(v > 0.0)) throw ConfigError(where, "expected a positive number");
  return v;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where, "expected an integer");
  return j.get<int>();
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number(j[i], where + "/" + std::to_string(i)));
  return out;
}

void reject_unknown(const json& j, const std::string& where,
                    std::initializer_list<const char*> known) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ConfigError(where + "/" + it.key(), "unknown field");
  }
}

GridDescriptor parse_surface(const json& j) {
  const std::string w = "/surface";
  if (!j.is_object()) throw ConfigError(w, "expected an object");
  reject_unknown(j, w, {"genus", "resolution", "modulus_re", "modulus_im", "volume"});
  GridDescriptor d;
  if (!j.contains("genus")) throw ConfigError(w + "/genus", "missing");
  d.genus = integer(j["genus"], w + "/genus");
  if (d.genus != 0 && d.genus != 1)
    throw ConfigError(w + "/genus", "only 0 (sphere) and 1 (torus) are supported");
  if (!j.contains("resolution")) throw ConfigError(w + "/resolution", "missing");
  d.resolution = integer(j["resolution"], w + "/resolution");
  if (d.genus == 0 && d.resolution < 8)
    throw ConfigError(w + "/resolution", "sphere bandlimit must be at least 8");
  if (d.genus == 1 && (d.resolution < 16 || d.resolution % 2 != 0))
    throw ConfigError(w + "/resolution", "torus grid size must be even and at least 16");
  d.volume = j.contains("volume") ? positive(j["volume"], w + "/volume")
                                  : 6.283185307179586;
  if (d.genus == 1) {
    d.modulus_re = j.contains("modulus_re") ? number(j["modulus_re"], w + "/modulus_re") : 0.0;
    d.modulus_im = j.contains("modulus_im") ? positive(j["modulus_im"], w + "/modulus_im") : 1.0;
  } else {
    d.modulus_re = 0.0;
    d.modulus_im = 0.0;
  }
  return d;
}

}  // namespace

DivisorSpec parse_divisor(const json& j, const std::string& w) {
  if (!j.is_object()) throw ConfigError(w, "expected an object");
  DivisorSpec out;
  if (j.contains("random")) {
    reject_unknown(j, w, {"random"});
    const json& r = j["random"];
    if (!r.is_object() || !r.contains("degree"))
      throw ConfigError(w + "/random", "expected {\"degree\": N}");
    out.random_degree = integer(r["degree"], w + "/random/degree");
    if (out.random_degree < 1)
      throw ConfigError(w + "/random/degree", "degree must be positive");
    return out;
  }
  reject_unknown(j, w, {"points", "multiplicities"});
  if (!j.contains("points") || !j["points"].is_array())
    throw ConfigError(w + "/points", "expected an array");
  const json& pts = j["points"];
  std::vector<int> mult(pts.size(), 1);
  if (j.contains("multiplicities")) {
    const json& m = j["multiplicities"];
    if (!m.is_array() || m.size() != pts.size())
      throw ConfigError(w + "/multiplicities", "expected one integer per point");
    for (std::size_t i = 0; i < m.size(); ++i) {
      mult[i] = integer(m[i], w + "/multiplicities/" + std::to_string(i));
      if (mult[i] < 1)
        throw ConfigError(w + "/multiplicities/" + std::to_string(i),
                          "multiplicities must be positive");
    }
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string pw = w + "/points/" + std::to_string(i);
    DivisorPoint p;
    p.multiplicity = mult[i];
    if (pts[i].is_string() && pts[i].get<std::string>() == "inf") {
      p.at_infinity = true;
    } else if (pts[i].is_array() && pts[i].size() == 2) {
      p.z = {number(pts[i][0], pw + "/0"), number(pts[i][1], pw + "/1")};
    } else {
      throw ConfigError(pw, "expected [re, im] or \"inf\"");
    }
    out.points.push_back(p);
  }
  if (out.points.empty()) throw ConfigError(w + "/points", "divisor has no points");
  return out;
}

RunConfig parse_config(const json& j, std::optional<Command> command) {
  if (!j.is_object()) throw ConfigError("/", "configuration must be a JSON object");
  reject_unknown(j, "", {"command", "surface", "divisor", "constant_section", "tau",
                         "alpha", "alpha_target", "initial_step", "tolerance",
                         "max_iterations", "kernel_projection", "eb", "source",
                         "seed", "workers", "sweep", "bandlimit", "target_volume",
                         "c_prime_policy", "c_prime"});
  RunConfig c;
  c.echo = j;
  if (command) {
    c.command = *command;
  } else if (j.contains("command")) {
    if (!j["command"].is_string()) throw ConfigError("/command", "expected a string");
    const auto cmd = parse_command(j["command"].get<std::string>());
    if (!cmd) throw ConfigError("/command", "unknown command");
    c.command = *cmd;
  } else {
    throw ConfigError("/command", "missing");
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("/seed", "expected an unsigned integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("workers")) {
    c.workers = integer(j["workers"], "/workers");
    if (c.workers < 1) throw ConfigError("/workers", "expected at least one worker");
  }

  if (c.command == Command::Sweep) {
    if (!j.contains("sweep") || !j["sweep"].is_object())
      throw ConfigError("/sweep", "expected an object");
    const json& s = j["sweep"];
    reject_unknown(s, "/sweep", {"command", "base", "tau", "alpha", "volume", "divisors"});
    SweepSpec spec;
    if (!s.contains("command") || !s["command"].is_string())
      throw ConfigError("/sweep/command", "expected a command name");
    const auto cmd = parse_command(s["command"].get<std::string>());
    if (!cmd || *cmd == Command::Sweep)
      throw ConfigError("/sweep/command", "expected a non-sweep command");
    spec.command = *cmd;
    spec.base = s.contains("base") ? s["base"] : json::object();
    if (!spec.base.is_object()) throw ConfigError("/sweep/base", "expected an object");
    if (s.contains("tau")) spec.tau = number_list(s["tau"], "/sweep/tau");
    if (s.contains("alpha")) spec.alpha = number_list(s["alpha"], "/sweep/alpha");
    if (s.contains("volume")) spec.volume = number_list(s["volume"], "/sweep/volume");
    if (s.contains("divisors")) {
      if (!s["divisors"].is_array()) throw ConfigError("/sweep/divisors", "expected an array");
      for (std::size_t i = 0; i < s["divisors"].size(); ++i) {
        parse_divisor(s["divisors"][i], "/sweep/divisors/" + std::to_string(i));
        spec.divisors.push_back(s["divisors"][i]);
      }
    }
    // validate one representative cell before running anything
    json probe = spec.base;
    if (!spec.tau.empty()) probe["tau"] = spec.tau.front();
    if (!spec.alpha.empty()) probe["alpha_target"] = spec.alpha.front();
    if (!spec.volume.empty()) {
      if (!probe.contains("surface")) throw ConfigError("/sweep/base/surface", "missing");
      probe["surface"]["volume"] = spec.volume.front();
    }
    if (!spec.divisors.empty()) probe["divisor"] = spec.divisors.front();
    try {
      parse_config(probe, spec.command);
    } catch (const ConfigError& e) {
      throw ConfigError("/sweep/base", e.what());
    }
    c.sweep = std::move(spec);
    return c;
  }

  if (j.contains("surface") && j.contains("bandlimit"))
    throw ConfigError("/bandlimit", "give either surface or bandlimit");
  if (j.contains("bandlimit")) {
    // shorthand for the round sphere of area 2 pi
    c.surface.genus = 0;
    c.surface.resolution = integer(j["bandlimit"], "/bandlimit");
    c.surface.modulus_im = 0.0;
    c.surface.volume = 6.283185307179586;
    if (c.surface.resolution < 8)
      throw ConfigError("/bandlimit", "sphere bandlimit must be at least 8");
  } else if (!j.contains("surface") && c.command != Command::Classify) {
    throw ConfigError("/surface", "missing");
  }
  if (j.contains("surface")) c.surface = parse_surface(j["surface"]);
  if (j.contains("divisor")) c.divisor = parse_divisor(j["divisor"], "/divisor");
  if (j.contains("constant_section")) {
    const json& cs = j["constant_section"];
    if (!cs.is_object()) throw ConfigError("/constant_section", "expected an object");
    reject_unknown(cs, "/constant_section", {"density", "degree"});
    c.constant_density = cs.contains("density")
                             ? number(cs["density"], "/constant_section/density")
                             : 1.0;
    if (*c.constant_density < 0.0)
      throw ConfigError("/constant_section/density", "density must be nonnegative");
    c.constant_degree = cs.contains("degree")
                            ? integer(cs["degree"], "/constant_section/degree")
                            : 0;
  }
  if (c.divisor && c.constant_density)
    throw ConfigError("/constant_section", "give either a divisor or a constant section");
  if (!c.divisor && !c.constant_density)
    throw ConfigError("/divisor", "missing");
  if (c.command == Command::Classify && !c.divisor)
    throw ConfigError("/divisor", "classification needs a divisor");
  if (c.command == Command::Classify && j.contains("surface") && c.surface.genus != 0)
    throw ConfigError("/surface/genus", "classification is defined on the sphere");
  if (c.command == Command::EB && c.constant_density)
    throw ConfigError("/constant_section", "Einstein-Bogomol'nyi runs need a divisor");

  if (c.command != Command::Classify) {
    if (!j.contains("tau")) throw ConfigError("/tau", "missing");
    c.tau = positive(j["tau"], "/tau");
  }
  if (j.contains("alpha") && j.contains("alpha_target"))
    throw ConfigError("/alpha", "give either alpha or alpha_target");
  if (j.contains("alpha")) c.alpha_target = number(j["alpha"], "/alpha");
  if (j.contains("alpha_target")) c.alpha_target = number(j["alpha_target"], "/alpha_target");
  if (j.contains("initial_step")) c.initial_step = positive(j["initial_step"], "/initial_step");
  if (j.contains("tolerance")) {
    c.tolerance = positive(j["tolerance"], "/tolerance");
    if (c.tolerance >= 1e-4) throw ConfigError("/tolerance", "tolerance must be below 1e-4");
  }
  if (j.contains("max_iterations")) {
    c.max_iterations = integer(j["max_iterations"], "/max_iterations");
    if (c.max_iterations < 1) throw ConfigError("/max_iterations", "expected a positive integer");
  }
  if (j.contains("kernel_projection")) {
    if (!j["kernel_projection"].is_boolean())
      throw ConfigError("/kernel_projection", "expected true or false");
    c.kernel_projection = j["kernel_projection"].get<bool>();
    if (c.kernel_projection && c.surface.genus != 0)
      throw ConfigError("/kernel_projection", "only defined on the sphere");
  }
  if (j.contains("eb")) {
    const json& e = j["eb"];
    if (!e.is_object()) throw ConfigError("/eb", "expected an object");
    reject_unknown(e, "/eb", {"target_volume", "c_prime_policy", "c_prime"});
    if (e.contains("target_volume"))
      c.target_volume = positive(e["target_volume"], "/eb/target_volume");
    if (e.contains("c_prime")) c.c_prime = number(e["c_prime"], "/eb/c_prime");
    if (e.contains("c_prime_policy")) {
      const json& p = e["c_prime_policy"];
      if (p == "volume") c.c_prime_policy = CPrimePolicy::Volume;
      else if (p == "fixed") c.c_prime_policy = CPrimePolicy::Fixed;
      else throw ConfigError("/eb/c_prime_policy", "expected \"volume\" or \"fixed\"");
    }
  }
  // top-level shorthands for the Einstein-Bogomol'nyi settings
  if (j.contains("target_volume"))
    c.target_volume = positive(j["target_volume"], "/target_volume");
  if (j.contains("c_prime")) c.c_prime = number(j["c_prime"], "/c_prime");
  if (j.contains("c_prime_policy")) {
    const json& p = j["c_prime_policy"];
    if (p == "volume") c.c_prime_policy = CPrimePolicy::Volume;
    else if (p == "fixed") c.c_prime_policy = CPrimePolicy::Fixed;
    else throw ConfigError("/c_prime_policy", "expected \"volume\" or \"fixed\"");
  }
  if (j.contains("source")) {
    if (!j["source"].is_string() ||
        (j["source"] != "gravitate" && j["source"] != "eb"))
      throw ConfigError("/source", "expected \"gravitate\" or \"eb\"");
    c.reduce_source = j["source"].get<std::string>();
  }

  const bool eb_like = c.command == Command::EB ||
                       (c.command == Command::ReduceCheck && c.reduce_source == "eb");
  if (eb_like && c.surface.genus != 0)
    throw ConfigError("/surface/genus",
                      "c = 0 with positive degree constrains the surface to the sphere");
  return c;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open configuration file");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size()); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path.string() + ":" + std::to_string(line) + ":" +
                          std::to_string(col),
                      "invalid JSON");
  }
}

}  // namespace gv::cli
