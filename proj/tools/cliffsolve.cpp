#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "cliffsolve/config.hpp"

namespace fs = std::filesystem;
using namespace cliffsolve;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

Json signature_json(Signature sig) { return Json{{"r", sig.r}, {"s", sig.s}}; }

const char* model_name(ModelKind k) {
  switch (k) {
    case ModelKind::Equipped: return "equipped";
    case ModelKind::Dirac: return "dirac";
    case ModelKind::Hestenes: return "hestenes";
  }
  return "?";
}

Json grid_json(const Grid& g) {
  Json axes = Json::array();
  for (const AxisSpec& a : g.axes)
    axes.push_back(Json{{"axis", a.axis}, {"extent", a.extent}, {"points", a.points}});
  return Json{{"axes", axes},
              {"steps", g.steps},
              {"cfl", g.cfl},
              {"dt", g.dt},
              {"stencil_order", g.stencil_order}};
}

Json friedrichs_json(const FriedrichsReport& r) {
  return Json{{"pass", r.pass},
              {"gamma", r.gamma},
              {"h1_max_eigenvalue", r.h1_max_eigenvalue},
              {"hermiticity_residuals", r.hermiticity_residuals}};
}

Json report_header(const std::string& command, const RunConfig& cfg) {
  Json j;
  j["command"] = command;
  j["seed"] = cfg.seed;
  j["signature"] = signature_json(cfg.sig);
  j["model"] = model_name(cfg.kind);
  return j;
}

void write_field_csv(const fs::path& path, int step, const FieldGrid& slice,
                     const Grid& grid) {
  std::string out = "step";
  for (const AxisSpec& a : grid.axes) out += ",x" + std::to_string(a.axis);
  out += ",component,real,imag\n";
  const std::string step_str = std::to_string(step);
  for (std::size_t p = 0; p < slice.points(); ++p) {
    const std::vector<double> coords = point_coords(grid, p);
    std::string prefix = step_str;
    for (double x : coords) prefix += "," + format_double(x);
    const Complex* u = slice.point(p);
    for (int c = 0; c < slice.D; ++c) {
      out += prefix;
      out += "," + std::to_string(c);
      out += "," + format_double(u[c].real());
      out += "," + format_double(u[c].imag());
      out += '\n';
    }
  }
  write_file(path, out);
}

Json cmd_validate(const RunConfig& cfg) {
  const FirstOrderSystem sys = assemble(cfg);
  const FriedrichsReport rep = validate_friedrichs(sys);
  const auto [flux, min_eig] = boundary_flux_matrix(
      sys, std::span<const double>(cfg.boundary_normal));
  double max_res = 0.0;
  for (double r : rep.hermiticity_residuals) max_res = std::max(max_res, r);

  Json j = report_header("validate", cfg);
  j["state_dimension"] = sys.D;
  j["friedrichs"] = friedrichs_json(rep);
  j["boundary_flux"] =
      Json{{"normal", cfg.boundary_normal}, {"min_eigenvalue", min_eig}};
  j["pass"] = rep.pass && max_res <= cfg.tol.hermiticity;
  return j;
}

Json cmd_idempotents(const RunConfig& cfg) {
  if (!(cfg.sig.r == 1 && cfg.sig.s == 3))
    throw ConfigError("idempotents: the canonical family lives in signature (1,3)");
  Json entries = Json::array();
  double max_res = 0.0;
  for (int k = 0; k <= 4; ++k) {
    const HermitianIdempotent t = canonical_idempotent(k);
    const IdempotentCheck chk = is_hermitian_idempotent(t.value());
    max_res = std::max({max_res, chk.idempotency_residual, chk.hermiticity_residual});
    entries.push_back(Json{{"name", "t" + std::to_string(k)},
                           {"type", t.type()},
                           {"value", to_string(t.value())},
                           {"dual", to_string(t.dual_value())},
                           {"idempotency_residual", chk.idempotency_residual},
                           {"hermiticity_residual", chk.hermiticity_residual}});
  }
  Json j = report_header("idempotents", cfg);
  j["entries"] = std::move(entries);
  j["max_residual"] = max_res;
  j["pass"] = max_res <= 1e-13;
  return j;
}

Json cmd_solve(const RunConfig& cfg, const fs::path& outdir) {
  const FirstOrderSystem sys = assemble(cfg);
  const CompiledSystem compiled(sys, cfg.grid);
  const FieldGrid psi0 = sample_initial(cfg.grid, initial_data(cfg), state_restriction(cfg));

  SolveOptions opts;
  opts.policy = cfg.policy;
  opts.sample_every = cfg.sample_every;
  const Trajectory traj = solve_cauchy(sys, psi0, cfg.grid, opts);

  fs::create_directories(outdir / "fields");
  for (std::size_t i = 0; i < traj.slices.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "step_%04d.csv", traj.slice_steps[i]);
    write_field_csv(outdir / "fields" / name, traj.slice_steps[i], traj.slices[i],
                    cfg.grid);
  }

  const double e0 = energy(sys, traj.slices.front(), cfg.grid);
  const double ef = energy(sys, traj.slices.back(), cfg.grid);

  Json j = report_header("solve", cfg);
  j["state_dimension"] = sys.D;
  j["grid"] = grid_json(cfg.grid);
  j["lambda_max"] = compiled.lambda_max();
  j["dt"] = traj.dt;
  j["final_time"] = traj.slices.back().time;
  j["sampled_steps"] = traj.slice_steps;
  j["energy_initial"] = e0;
  j["energy_final"] = ef;
  j["energy_drift"] = e0 != 0.0 ? std::abs(ef - e0) / e0 : 0.0;
  j["pass"] = true;
  return j;
}

Json cmd_theorem(const RunConfig& cfg) {
  if (cfg.kind != ModelKind::Dirac)
    throw ConfigError("theorem: defined for the dirac model");
  const TheoremReport rep = verify_theorem(*cfg.dirac, initial_data(cfg), cfg.grid);

  const bool ok_leak = rep.leakage_max <= cfg.tol.leakage;
  const bool ok_zero = rep.zero_leakage <= cfg.tol.leakage;
  const bool ok_restricted = rep.restricted_agreement <= cfg.tol.restricted;
  const bool ok_control = rep.control_residual <= cfg.tol.control;
  const bool ok_drift = rep.energy_drift <= cfg.tol.energy_drift;

  Json j = report_header("theorem", cfg);
  j["grid"] = grid_json(cfg.grid);
  j["report"] = Json{{"gamma", rep.gamma},
                     {"hermiticity_residuals", rep.hermiticity_residuals},
                     {"leakage_max", rep.leakage_max},
                     {"zero_leakage", rep.zero_leakage},
                     {"equation_residual", rep.equation_residual},
                     {"restricted_agreement", rep.restricted_agreement},
                     {"control_residual", rep.control_residual},
                     {"energy_drift", rep.energy_drift},
                     {"convergence_orders", Json::array()}};
  j["checks"] = Json{{"leakage", ok_leak},
                     {"zero_leakage", ok_zero},
                     {"restricted_agreement", ok_restricted},
                     {"control_residual", ok_control},
                     {"energy_drift", ok_drift}};
  j["pass"] = ok_leak && ok_zero && ok_restricted && ok_control && ok_drift;
  return j;
}

Json cmd_dispersion(const RunConfig& cfg) {
  if (cfg.kind != ModelKind::Dirac)
    throw ConfigError("dispersion: defined for the dirac model");
  const DispersionReport rep = dispersion_check(
      *cfg.dirac, std::span<const double>(cfg.dispersion_k), cfg.dispersion_time_domain);

  bool pass = rep.max_deviation <= cfg.tol.dispersion;
  if (cfg.dispersion_time_domain) pass = pass && rep.time_order >= cfg.tol.min_order;

  Json body = Json{{"k", cfg.dispersion_k},
                   {"target", rep.target},
                   {"omega", rep.omega},
                   {"max_deviation", rep.max_deviation},
                   {"time_errors", rep.time_errors},
                   {"time_order", rep.time_order}};
  Json orders = Json::array();
  if (cfg.convergence_q > 0) {
    const ConvergenceReport conv = plane_wave_convergence(
        *cfg.dirac, cfg.convergence_q, std::span<const int>(cfg.convergence_levels),
        cfg.grid.stencil_order);
    body["convergence_levels"] = conv.levels;
    body["convergence_errors"] = conv.errors;
    orders = conv.orders;
    for (double o : conv.orders) pass = pass && o >= cfg.tol.min_order;
  }
  body["convergence_orders"] = orders;

  Json j = report_header("dispersion", cfg);
  j["report"] = std::move(body);
  j["pass"] = pass;
  return j;
}

Json cmd_energy(const RunConfig& cfg, const fs::path& outdir) {
  const FirstOrderSystem sys = assemble(cfg);
  const FieldGrid psi0 = sample_initial(cfg.grid, initial_data(cfg), state_restriction(cfg));
  const EnergyReport rep =
      energy_run(sys, psi0, cfg.grid, cfg.energy_log_every, cfg.policy);

  std::string csv = "step,time,energy\n";
  for (std::size_t i = 0; i < rep.series.size(); ++i) {
    csv += std::to_string(rep.steps[i]);
    csv += "," + format_double(rep.steps[i] * rep.dt);
    csv += "," + format_double(rep.series[i]);
    csv += '\n';
  }
  write_file(outdir / "energy.csv", csv);

  Json j = report_header("energy", cfg);
  j["grid"] = grid_json(cfg.grid);
  j["dt"] = rep.dt;
  j["log_every"] = cfg.energy_log_every;
  j["report"] = Json{{"e0", rep.e0}, {"e_final", rep.e_final}, {"drift", rep.drift}};
  j["pass"] = rep.drift <= cfg.tol.energy_drift;
  return j;
}

Json dispatch(const std::string& command, const RunConfig& cfg, const fs::path& outdir) {
  if (command == "validate") return cmd_validate(cfg);
  if (command == "idempotents") return cmd_idempotents(cfg);
  if (command == "solve") return cmd_solve(cfg, outdir);
  if (command == "theorem") return cmd_theorem(cfg);
  if (command == "dispersion") return cmd_dispersion(cfg);
  if (command == "energy") return cmd_energy(cfg, outdir);
  throw ConfigError("unknown command \"" + command + "\"");
}

// Failure paths stay machine readable: a JSON error object on stdout, and
// the same object as report.json when the output directory is usable.
int emit_error(const char* kind, const std::string& msg, const fs::path* outdir) {
  Json j;
  j["error"] = Json{{"kind", kind}, {"message", msg}};
  const std::string text = dump_json(j);
  std::fputs(text.c_str(), stdout);
  if (outdir) {
    std::error_code ec;
    fs::create_directories(*outdir, ec);
    if (!ec) {
      std::ofstream out(*outdir / "report.json", std::ios::binary);
      out << text;
    }
  }
  return std::strcmp(kind, "config") == 0 ? 1 : 2;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
  if (const char* env = std::getenv("CLIFFSOLVE_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) omp_set_num_threads(t);
  }
#endif

  CLI::App app{"assemble Clifford-algebra field models and run their Cauchy problems"};
  std::string command;
  std::string config_path;
  std::string outdir = "out";
  std::uint64_t seed = 0;
  app.add_option("command", command,
                 "validate | idempotents | solve | theorem | dispersion | energy")
      ->required()
      ->check(CLI::IsMember(
          {"validate", "idempotents", "solve", "theorem", "dispersion", "energy"}));
  app.add_option("--config", config_path, "JSON run configuration file");
  app.add_option("--out", outdir, "output directory (default: out)");
  CLI::Option* seed_opt = app.add_option("--seed", seed, "override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return emit_error("config", e.what(), nullptr);
  }

  const fs::path outp(outdir);

  Json raw = Json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in)
      return emit_error("config", "cannot open config file: " + config_path, &outp);
    try {
      raw = Json::parse(in);
    } catch (const std::exception& e) {
      return emit_error("config",
                        std::string("config file is not valid JSON: ") + e.what(), &outp);
    }
  }

  std::optional<std::uint64_t> seed_override;
  if (seed_opt->count() > 0) seed_override = seed;

  RunConfig cfg;
  try {
    cfg = parse_config(raw, seed_override);
  } catch (const ConfigError& e) {
    return emit_error("config", e.what(), &outp);
  }

  try {
    std::error_code ec;
    fs::create_directories(outp, ec);
    if (ec)
      throw ConfigError("cannot create output directory: " + outp.string() + ": " +
                        ec.message());
    const Json report = dispatch(command, cfg, outp);
    const std::string text = dump_json(report);
    write_file(outp / "report.json", text);
    std::fputs(text.c_str(), stdout);
    return report.at("pass").get<bool>() ? 0 : 2;
  } catch (const ConfigError& e) {
    return emit_error("config", e.what(), &outp);
  } catch (const std::exception& e) {
    return emit_error("check", e.what(), &outp);
  }
}
