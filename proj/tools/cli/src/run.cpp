#include "gv/cli/run.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "gv/cli/io.hpp"
#include "gv/einstein_bogomolnyi.hpp"
#include "gv/errors.hpp"
#include "gv/git.hpp"
#include "gv/gravitating.hpp"
#include "gv/radial_ode.hpp"
#include "gv/reduction.hpp"
#include "gv/sections.hpp"
#include "gv/vortex.hpp"

namespace gv::cli {

namespace fs = std::filesystem;
using nlohmann::json;
constexpr double pi = std::numbers::pi;

namespace {

/// Result of a command body; thrown errors are mapped by the caller.
struct Status {
  int code = kOk;
  std::string message;
};

struct Context {
  const RunConfig& cfg;
  fs::path root;
  Manifest& manifest;

  void emit_field(const fs::path& rel, const ScalarField& field) {
    fs::create_directories((root / rel).parent_path());
    write_field_csv(root / rel, field);
    manifest.add_file(root, rel);
  }
  void emit_json(const fs::path& rel, const json& j) {
    fs::create_directories((root / rel).parent_path());
    write_json(root / rel, j);
    manifest.add_file(root, rel);
  }
};

Divisor make_divisor(const DivisorSpec& spec, int genus, std::uint64_t seed) {
  if (spec.random_degree == 0) return Divisor(spec.points);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<DivisorPoint> pts;
  for (int k = 0; k < spec.random_degree; ++k) {
    DivisorPoint p;
    if (genus == 0) {
      // uniform on the round sphere, stereographic coordinate
      const double theta = std::acos(1.0 - 2.0 * unit(rng));
      const double phi = 2.0 * pi * unit(rng);
      p.z = std::polar(std::tan(0.5 * theta), phi);
    } else {
      p.z = {unit(rng), unit(rng)};  // lattice coordinates, mapped below
    }
    pts.push_back(p);
  }
  return Divisor(pts);
}

Divisor make_divisor(const RunConfig& cfg, const SurfaceGrid* grid) {
  Divisor d = make_divisor(*cfg.divisor, cfg.surface.genus, cfg.seed);
  if (cfg.divisor->random_degree > 0 && grid && grid->genus() == 1) {
    std::vector<DivisorPoint> pts = d.points();
    for (DivisorPoint& p : pts) p.z = p.z.real() + p.z.imag() * grid->modulus();
    return Divisor(pts);
  }
  return d;
}

SectionField make_section(const RunConfig& cfg, const SurfaceGrid& grid) {
  if (cfg.divisor) return build_section(make_divisor(cfg, &grid), grid);
  return SectionField::constant(grid, *cfg.constant_density, cfg.constant_degree);
}

json history_json(const std::vector<double>& h) {
  json out = json::array();
  for (double v : h) out.push_back(number_or_string(v));
  return out;
}

json describe_input(const RunConfig& cfg, const SectionField& section) {
  json j{{"surface", to_json(section.grid().descriptor())},
         {"tau", cfg.tau},
         {"degree", section.degree()}};
  if (section.divisor()) j["divisor"] = to_json(*section.divisor());
  else j["constant_density"] = *cfg.constant_density;
  return j;
}

// phi identically zero: the coupled equations integrate to
// tau Vol' = 4 pi N and c (Vol - Vol') = 0, and the constant metric with
// e^{2u} = 4 pi N / (tau Vol) and f = 0 solves them whenever both hold.
Status trivial_branch(Context& ctx, const SurfaceGrid& grid, double alpha) {
  const RunConfig& cfg = ctx.cfg;
  const int n = cfg.constant_degree;
  const double vol = grid.volume();
  const double c = compute_c(alpha, cfg.tau, n, grid.euler_characteristic(), vol);
  const double e2u = 4.0 * pi * n / (cfg.tau * vol);
  json report{{"branch", "zero section"},
              {"surface", to_json(grid.descriptor())},
              {"tau", cfg.tau},
              {"alpha", alpha},
              {"degree", n},
              {"c", c},
              {"tau_vol", cfg.tau * vol},
              {"four_pi_n", 4.0 * pi * n}};
  const bool exists = n > 0 && std::abs(c * (1.0 - e2u)) <= 1e-12 * std::max(1.0, std::abs(c));
  if (cfg.command == Command::Vortex && std::abs(e2u - 1.0) > 1e-12) {
    report["exists"] = false;
    ctx.emit_json("report.json", report);
    return {kNoSolution, "zero section: a vortex solution needs tau Vol = 4 pi N exactly (tau Vol = " +
                             format_double(cfg.tau * vol) + ", 4 pi N = " +
                             format_double(4.0 * pi * n) + ")"};
  }
  report["exists"] = exists;
  if (!exists) {
    ctx.emit_json("report.json", report);
    return {kNoSolution, "zero section: the integrated equations require N > 0 and "
                         "c (1 - 4 pi N / (tau Vol)) = 0"};
  }
  report["u"] = 0.5 * std::log(e2u);
  report["f"] = 0.0;
  ctx.emit_field("u.csv", ScalarField::constant(grid, 0.5 * std::log(e2u)));
  ctx.emit_field("f.csv", ScalarField::constant(grid, 0.0));
  ctx.emit_json("report.json", report);
  ctx.manifest.summary() = {{"converged", true}, {"residual", 0.0},
                            {"conformal_volume", e2u * vol}};
  return {};
}

Status run_vortex(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const SurfaceGrid grid = SurfaceGrid::from_descriptor(cfg.surface);
  if (cfg.constant_density && *cfg.constant_density == 0.0)
    return trivial_branch(ctx, grid, 0.0);
  const SectionField section = make_section(cfg, grid);
  VortexProblem problem{grid, section, cfg.tau, cfg.tolerance, cfg.max_iterations};
  const VortexSolution sol = solve_vortex(problem);
  ctx.emit_field("f.csv", sol.f);
  json j = describe_input(cfg, section);
  j["residual"] = sol.residual_norm;
  j["iterations"] = sol.iterations;
  j["flux_defect"] = sol.flux_defect;
  j["history"] = history_json(sol.history);
  j["warnings"] = sol.warnings;
  ctx.emit_json("solution.json", j);
  ctx.manifest.summary() = {{"converged", true},
                            {"residual", sol.residual_norm},
                            {"conformal_volume", grid.volume()},
                            {"flux_defect", sol.flux_defect}};
  return {};
}

GravProblem grav_problem(const RunConfig& cfg, const SurfaceGrid& grid,
                         const SectionField& section) {
  GravProblem p{grid, section, cfg.tau, 0.0, cfg.tolerance,
                cfg.max_iterations > 0 ? cfg.max_iterations : 100,
                cfg.kernel_projection};
  return p;
}

std::string step_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "step_%04zu", k);
  return buf;
}

Status run_gravitate(Context& ctx, std::optional<GravSolution>* last = nullptr,
                     std::optional<GravProblem>* last_problem = nullptr) {
  const RunConfig& cfg = ctx.cfg;
  const SurfaceGrid grid = SurfaceGrid::from_descriptor(cfg.surface);
  if (cfg.constant_density && *cfg.constant_density == 0.0)
    return trivial_branch(ctx, grid, cfg.alpha_target);
  const SectionField section = make_section(cfg, grid);
  GravProblem problem = grav_problem(cfg, grid, section);
  ContinuationOptions opts;
  const ContinuationPath path =
      continue_in_alpha(problem, cfg.alpha_target, cfg.initial_step, opts);

  json solutions = json::array();
  for (std::size_t k = 0; k < path.solutions.size(); ++k) {
    const GravSolution& s = path.solutions[k];
    const std::string base = "path/" + step_name(k);
    ctx.emit_field(base + "_u.csv", s.u);
    ctx.emit_field(base + "_f.csv", s.f);
    GravProblem pk = problem;
    pk.alpha = s.alpha;
    solutions.push_back({{"alpha", s.alpha},
                         {"c", pk.c()},
                         {"residual_r1", s.residual_norms.first},
                         {"residual_r2", s.residual_norms.second},
                         {"unreduced_residual", l2_norm(unreduced_residual(s, pk))},
                         {"conformal_volume", s.conformal_volume},
                         {"iterations", s.iterations},
                         {"history", history_json(s.history)},
                         {"u_file", base + "_u.csv"},
                         {"f_file", base + "_f.csv"}});
  }
  json steps = json::array();
  for (const ContinuationStep& st : path.steps)
    steps.push_back({{"alpha", st.alpha},
                     {"step", st.step},
                     {"accepted", st.accepted},
                     {"iterations", st.iterations},
                     {"residual", number_or_string(st.residual)},
                     {"note", st.note}});
  json j = describe_input(cfg, section);
  j["alpha_target"] = cfg.alpha_target;
  j["kernel_projection"] = cfg.kernel_projection;
  j["completed"] = path.completed;
  j["solutions"] = solutions;
  j["steps"] = steps;
  if (path.failure_alpha) j["failure_alpha"] = *path.failure_alpha;
  if (!path.failure_reason.empty()) j["failure_reason"] = path.failure_reason;
  ctx.emit_json("path.json", j);

  double residual = 0.0, reached = 0.0, volume = grid.volume();
  if (!path.solutions.empty()) {
    const GravSolution& s = path.solutions.back();
    residual = std::hypot(s.residual_norms.first, s.residual_norms.second);
    reached = s.alpha;
    volume = s.conformal_volume;
    if (last) *last = s;
    if (last_problem) {
      problem.alpha = s.alpha;
      *last_problem = problem;
    }
  }
  ctx.manifest.summary() = {{"converged", path.completed},
                            {"residual", residual},
                            {"conformal_volume", volume},
                            {"max_alpha", reached},
                            {"path_length", path.solutions.size()}};
  if (!path.completed)
    return {kSolverFailure, "continuation stopped at alpha = " + format_double(reached) +
                                ": " + path.failure_reason};
  return {};
}

EBProblem eb_problem(const RunConfig& cfg, const SurfaceGrid& grid,
                     const SectionField& section) {
  return EBProblem{grid, section, cfg.tau, cfg.c_prime_policy, cfg.c_prime,
                   cfg.target_volume, cfg.tolerance,
                   cfg.max_iterations > 0 ? cfg.max_iterations : 100, std::nullopt};
}

// Divisor (N/2){0} + (N/2){inf}, the configuration with a radial oracle.
bool polar_symmetric(const Divisor& d) {
  const auto& pts = d.points();
  if (pts.size() != 2) return false;
  const DivisorPoint* zero = nullptr;
  const DivisorPoint* inf = nullptr;
  for (const DivisorPoint& p : pts) {
    if (p.at_infinity) inf = &p;
    else if (std::abs(p.z) == 0.0) zero = &p;
  }
  return zero && inf && zero->multiplicity == inf->multiplicity;
}

Status run_eb(Context& ctx, std::optional<EBSolution>* last = nullptr,
              std::optional<EBProblem>* last_problem = nullptr) {
  const RunConfig& cfg = ctx.cfg;
  const SurfaceGrid grid = SurfaceGrid::from_descriptor(cfg.surface);
  const Divisor divisor = make_divisor(cfg, &grid);
  const SectionField section = build_section(divisor, grid);
  const EBProblem problem = eb_problem(cfg, grid, section);
  const EBSolution sol = solve_eb(problem);
  ctx.emit_field("f.csv", sol.f);
  ctx.emit_field("u.csv", sol.u);
  json j = describe_input(cfg, section);
  j["alpha"] = problem.alpha();
  j["c_prime_policy"] = cfg.c_prime_policy == CPrimePolicy::Volume ? "volume" : "fixed";
  j["c_prime"] = sol.c_prime;
  j["target_volume"] = cfg.target_volume;
  j["residual"] = sol.residual_norm;
  j["conformal_volume"] = sol.conformal_volume;
  j["integrated_identity_defect"] = sol.integrated_identity_defect;
  j["max_e2u"] = sol.max_e2u;
  j["min_e2u"] = sol.min_e2u;
  j["iterations"] = sol.iterations;
  j["history"] = history_json(sol.history);
  j["yang_case"] = to_string(sol.yang);
  j["experimental"] = sol.experimental;
  j["kernel_projection"] = sol.kernel_projection;
  j["stability"] = to_json(git_classify(divisor));
  ctx.emit_json("report.json", j);

  if (polar_symmetric(divisor)) {
    const QuadratureGrid& q = grid.nodes();
    std::vector<double> s(q.rows);
    for (int i = 0; i < q.rows; ++i) s[i] = std::log(std::tan(0.5 * q.first[i * q.cols]));
    RadialOracleOptions opts;
    opts.target_volume = cfg.target_volume;
    if (cfg.c_prime_policy == CPrimePolicy::Fixed) opts.c_prime = cfg.c_prime;
    const RadialProfile prof =
        radial_ode_oracle(divisor.degree(), cfg.tau, problem.alpha(), grid.volume(), s, opts);
    double sup = 0.0;
    fs::create_directories(ctx.root);
    {
      std::ofstream out(ctx.root / "radial_profile.csv");
      out << "s,theta,f_ode,f_pde_min,f_pde_max\n";
      for (int i = 0; i < q.rows; ++i) {
        double lo = sol.f[i * q.cols], hi = lo;
        for (int k = 0; k < q.cols; ++k) {
          const double v = sol.f[i * q.cols + k];
          lo = std::min(lo, v);
          hi = std::max(hi, v);
          sup = std::max(sup, std::abs(v - prof.f[i]));
        }
        out << format_double(s[i]) << ',' << format_double(q.first[i * q.cols]) << ','
            << format_double(prof.f[i]) << ',' << format_double(lo) << ','
            << format_double(hi) << '\n';
      }
    }
    ctx.manifest.add_file(ctx.root, "radial_profile.csv");
    const Eigen::VectorXd coeffs = sol.f.coefficients();
    double longitudinal = 0.0;
    const SphereBasis& b = *grid.sphere_basis();
    for (Eigen::Index m = 0; m < coeffs.size(); ++m)
      if (b.order(m) != 0) longitudinal = std::max(longitudinal, std::abs(coeffs[m]));
    ctx.emit_json("comparison.json", {{"sup_error", sup},
                                      {"c_prime_ode", prof.c_prime},
                                      {"c_prime_pde", sol.c_prime},
                                      {"volume_ode", prof.volume},
                                      {"max_longitudinal_mode", longitudinal},
                                      {"shooting_iterations", prof.shooting_iterations},
                                      {"horizon", prof.horizon}});
  }
  ctx.manifest.summary() = {{"converged", true},
                            {"residual", sol.residual_norm},
                            {"conformal_volume", sol.conformal_volume},
                            {"yang_case", to_string(sol.yang)}};
  if (last) *last = sol;
  if (last_problem) *last_problem = problem;
  return {};
}

Status run_classify(Context& ctx) {
  const Divisor divisor = make_divisor(*ctx.cfg.divisor, 0, ctx.cfg.seed);
  const Stability st = git_classify(divisor);
  const ClosedOrbit orbit = closed_cstar_orbit(divisor);
  json j{{"divisor", to_json(divisor)},
         {"stability", to_json(st)},
         {"closed_orbit", orbit.closed},
         {"fixed_point", orbit.fixed_point},
         {"yang_case", to_string(yang_hypothesis_check(divisor))}};
  if (divisor.degree() <= 8) j["hilbert_mumford"] = to_string(hilbert_mumford_oracle(divisor));
  ctx.emit_json("classification.json", j);
  ctx.manifest.summary() = {{"converged", true}, {"class", to_string(st.cls)}};
  return {};
}

Status run_reduce(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  std::optional<ReductionInput> input;
  Status upstream;
  if (cfg.reduce_source == "eb") {
    std::optional<EBSolution> sol;
    std::optional<EBProblem> prob;
    upstream = run_eb(ctx, &sol, &prob);
    if (sol) input = ReductionInput::from(*sol, *prob);
  } else {
    if (cfg.constant_density && *cfg.constant_density == 0.0)
      return trivial_branch(ctx, SurfaceGrid::from_descriptor(cfg.surface), cfg.alpha_target);
    std::optional<GravSolution> sol;
    std::optional<GravProblem> prob;
    upstream = run_gravitate(ctx, &sol, &prob);
    if (sol) input = ReductionInput::from(*sol, *prob);
  }
  if (!input) return upstream;
  const json upstream_summary = ctx.manifest.summary();
  const ReducedKYMData data = assemble_and_check(*input);
  ctx.emit_field("f2.csv", data.f2);
  json residuals = json::object();
  for (int k = 0; k < 5; ++k) residuals[residual_name(k)] = data.residuals[k];
  const int n = input->section.degree();
  json j{{"alpha", input->alpha},
         {"tau", input->tau},
         {"degree", n},
         {"lambda", data.lambda},
         {"lambda_formula", compute_lambda(n, input->tau, data.conformal_volume)},
         {"conformal_volume", data.conformal_volume},
         {"residuals", residuals},
         {"max_residual", data.max_residual()},
         {"solvability_defect", data.solvability_defect},
         {"curvature_equation_residual", data.curvature_equation_residual},
         {"identity_probe", identity_probe(*input, data)},
         {"pass", data.pass()}};
  ctx.emit_json("reduction.json", j);
  ctx.manifest.summary() = upstream_summary;
  ctx.manifest.summary()["reduction_pass"] = data.pass();
  ctx.manifest.summary()["reduction_max_residual"] = data.max_residual();
  return upstream;
}

Status dispatch(Context& ctx);

Status run_sweep(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const SweepSpec& spec = *cfg.sweep;
  struct Cell {
    json config;
    std::optional<double> tau, alpha, volume;
    int divisor = -1;
    int exit_code = kOk;
    json summary;
    std::string message;
  };
  std::vector<Cell> cells;
  const auto axis = [](const std::vector<double>& v) {
    std::vector<std::optional<double>> out(v.begin(), v.end());
    if (out.empty()) out.push_back(std::nullopt);
    return out;
  };
  std::vector<int> divisors;
  for (int k = 0; k < int(spec.divisors.size()); ++k) divisors.push_back(k);
  if (divisors.empty()) divisors.push_back(-1);
  for (int d : divisors)
    for (auto vol : axis(spec.volume))
      for (auto tau : axis(spec.tau))
        for (auto alpha : axis(spec.alpha)) {
          Cell c;
          c.config = spec.base;
          if (tau) c.config["tau"] = *tau;
          if (alpha) c.config["alpha_target"] = *alpha;
          if (vol) c.config["surface"]["volume"] = *vol;
          if (d >= 0) c.config["divisor"] = spec.divisors[d];
          c.tau = tau;
          c.alpha = alpha;
          c.volume = vol;
          c.divisor = d;
          cells.push_back(std::move(c));
        }

  const int workers = std::max(1, std::min<int>(cfg.workers, int(cells.size())));
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      Cell& cell = cells[k];
      char name[32];
      std::snprintf(name, sizeof name, "cells/cell_%04zu", k);
      std::ostringstream err;
      try {
        RunConfig sub = parse_config(cell.config, spec.command);
        sub.seed = cfg.seed + k;
        sub.workers = 1;
        sub.out_dir = ctx.root / name;
        const RunOutcome out = run(sub, err);
        cell.exit_code = out.exit_code;
        cell.summary = out.manifest.value("summary", json::object());
        cell.message = out.manifest.value("message", std::string());
      } catch (const std::exception& e) {
        cell.exit_code = kConfigError;
        cell.message = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  fs::create_directories(ctx.root);
  {
    std::ofstream out(ctx.root / "sweep.csv");
    out << "cell,command,tau,alpha,volume,divisor,exit_code,converged,residual,"
           "conformal_volume,max_alpha,class\n";
    const auto opt = [](const std::optional<double>& v) {
      return v ? format_double(*v) : std::string();
    };
    const auto num = [](const json& s, const char* key) {
      return s.contains(key) && s[key].is_number() ? format_double(s[key].get<double>())
                                                   : std::string();
    };
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const Cell& c = cells[k];
      out << k << ',' << to_string(spec.command) << ',' << opt(c.tau) << ','
          << opt(c.alpha) << ',' << opt(c.volume) << ','
          << (c.divisor >= 0 ? std::to_string(c.divisor) : std::string()) << ','
          << c.exit_code << ','
          << (c.exit_code == kOk && c.summary.value("converged", false) ? 1 : 0) << ','
          << num(c.summary, "residual") << ',' << num(c.summary, "conformal_volume") << ','
          << num(c.summary, "max_alpha") << ','
          << c.summary.value("class", std::string()) << '\n';
    }
  }
  ctx.manifest.add_file(ctx.root, "sweep.csv");
  int failed = 0;
  json cell_list = json::array();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    failed += cells[k].exit_code != kOk;
    json e{{"cell", k}, {"exit_code", cells[k].exit_code}};
    if (!cells[k].message.empty()) e["message"] = cells[k].message;
    cell_list.push_back(e);
  }
  ctx.manifest.summary() = {{"cells", cells.size()}, {"failed_cells", failed},
                            {"workers", workers}, {"cell_status", cell_list}};
  return {};
}

Status dispatch(Context& ctx) {
  switch (ctx.cfg.command) {
    case Command::Vortex: return run_vortex(ctx);
    case Command::Gravitate: return run_gravitate(ctx);
    case Command::EB: return run_eb(ctx);
    case Command::Classify: return run_classify(ctx);
    case Command::ReduceCheck: return run_reduce(ctx);
    case Command::Sweep: return run_sweep(ctx);
  }
  return {kConfigError, "unknown command"};
}

}  // namespace

RunOutcome run(const RunConfig& cfg, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Manifest manifest(to_string(cfg.command), cfg.echo, cfg.seed);
  Context ctx{cfg, cfg.out_dir, manifest};
  Status status;
  try {
    fs::create_directories(cfg.out_dir);
    status = dispatch(ctx);
  } catch (const NoSolutionExists& e) {
    status = {kNoSolution, std::string(e.what()) + " (4 pi N = " + format_double(e.lhs()) +
                               ", tau Vol = " + format_double(e.rhs()) + ")"};
  } catch (const ConvergenceFailure& e) {
    status = {kSolverFailure, std::string(e.what()) + " (residual " +
                                  format_double(e.residual()) + " after " +
                                  std::to_string(e.iterations()) + " iterations)"};
  } catch (const SingularJacobian& e) {
    status = {kSolverFailure, std::string(e.what()) + " (smallest singular value " +
                                  format_double(e.smallest_singular_value()) + ")"};
  } catch (const ConfigurationError& e) {
    status = {kConfigError, e.what()};
  } catch (const InvalidDivisor& e) {
    status = {kConfigError, e.what()};
  } catch (const ConfigError& e) {
    status = {kConfigError, e.what()};
  } catch (const std::exception& e) {
    status = {kSolverFailure, e.what()};
  }
  const char* label = status.code == kOk            ? "ok"
                      : status.code == kNoSolution  ? "no-solution"
                      : status.code == kConfigError ? "config-error"
                                                    : "solver-failure";
  manifest.set_status(status.code, label, status.message);
  manifest.set_timing(
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  try {
    fs::create_directories(cfg.out_dir);
    manifest.write(cfg.out_dir);
  } catch (const std::exception& e) {
    err << "gvortex: cannot write manifest: " << e.what() << '\n';
  }
  if (status.code != kOk) err << "gvortex " << to_string(cfg.command) << ": " << status.message << '\n';
  return {status.code, manifest.to_json()};
}

}  // namespace gv::cli
