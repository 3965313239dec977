#include "smacollide/cli.hpp"

#include "smacollide/closed_form.hpp"
#include "smacollide/config.hpp"
#include "smacollide/coupling.hpp"
#include "smacollide/manufactured.hpp"
#include "smacollide/phase.hpp"
#include "smacollide/writers.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace smacollide {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_collide(const std::string& config_path, const std::string& out_dir, std::optional<double> prescribed,
                std::ostream& out) {
  const RunConfig cfg = load_config(config_path);
  const Mesh mesh = cfg.build_mesh();
  const PreState pre = PreState::uniform(mesh, cfg.initial.T_minus, cfg.beta_minus());
  CollisionOptions opts = cfg.collision_options();
  if (prescribed) {
    if (!(*prescribed >= 0.0)) throw ConfigError("--prescribed-diss", "must be >= 0");
    opts.prescribed_diss = uniform_dissipation(mesh, *prescribed);
  }
  const CollisionResult res = solve_collision(mesh, cfg.material, pre, cfg.load(), cfg.thermal_bc, opts);

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_fields_csv(res, mesh, dir / "fields.csv");
  write_vtk(res, mesh, dir / "fields.vtk");
  write_diagnostics_json(res, mesh, dir / "diagnostics.json");

  const auto& d = res.diagnostics;
  out << "nodes: " << mesh.num_nodes() << "\n"
      << "fixed-point iterations: " << d.iterations << (d.converged ? " (converged)" : " (NOT converged)") << "\n"
      << "T_plus range: " << fmt(res.T_plus.minCoeff()) << " .. " << fmt(res.T_plus.maxCoeff()) << " K\n"
      << "beta3_plus max: " << fmt(res.beta_plus.col(2).maxCoeff()) << "\n";
  for (const auto& w : d.warnings) out << "warning: " << w << "\n";
  out << "wrote " << (dir / "fields.csv").string() << ", fields.vtk, diagnostics.json\n";
  return d.converged ? 0 : 1;
}

int run_closed_form(const std::string& config_path, double diss, std::ostream& out) {
  const RunConfig cfg = load_config(config_path);
  if (!(diss >= 0.0)) throw ConfigError("--diss", "must be >= 0");
  ClosedFormInput in{cfg.initial.T_minus, cfg.beta_minus(), diss, cfg.material};
  const bool symmetric = in.beta_minus(0) == in.beta_minus(1);
  const ClosedFormSolution s = symmetric ? solve_0d(in) : brute_force_0d(in);
  out << "method: " << (symmetric ? "closed form" : "grid search") << "\n"
      << "regime: " << to_string(s.regime) << "\n"
      << "T_minus: " << fmt(in.T_minus) << "\n"
      << "T_plus: " << fmt(s.T_plus) << "\n"
      << "beta_plus: " << fmt(s.beta_plus(0)) << " " << fmt(s.beta_plus(1)) << " " << fmt(s.beta_plus(2)) << "\n";
  return 0;
}

int run_sweep(const std::string& config_path, double lo, double hi, int samples, std::ostream& out) {
  const RunConfig cfg = load_config(config_path);
  if (!(lo >= 0.0) || !(hi >= lo)) throw ConfigError("--diss-min/--diss-max", "need 0 <= diss-min <= diss-max");
  if (samples < 1) throw ConfigError("--samples", "must be >= 1");
  write_sweep_csv(sweep_0d(cfg.initial.T_minus, cfg.beta_minus(), cfg.material, lo, hi, samples), out);
  return 0;
}

int run_mms(int levels, std::ostream& out) {
  if (levels < 2 || levels > 7) throw ConfigError("--levels", "must lie in [2, 7]");
  const auto cells = refinement_levels(levels);
  auto print = [&](const char* name, const ConvergenceStudy& st) {
    out << name << "\n  cells      L2 error                 rate\n";
    for (std::size_t k = 0; k < st.cells.size(); ++k) {
      char line[96];
      if (k == 0)
        std::snprintf(line, sizeof line, "  %-8d %-24.6e -\n", st.cells[k], st.errors[k]);
      else
        std::snprintf(line, sizeof line, "  %-8d %-24.6e %.4f\n", st.cells[k], st.errors[k], st.rates[k - 1]);
      out << line;
    }
  };
  print("velocity", velocity_convergence(cells));
  print("thermal", thermal_convergence(cells));
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Instantaneous collision solver for shape-memory alloys", "smacollide"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::optional<double> prescribed;
  double diss = 0.0, diss_min = 0.0, diss_max = 0.0;
  int samples = 0, levels = 4;
  std::vector<double> point;

  auto* collide = app.add_subcommand("collide", "full collision solve; writes fields.csv, fields.vtk, diagnostics.json");
  collide->add_option("config", config_path, "TOML configuration")->required();
  collide->add_option("--out", out_dir, "output directory");
  collide->add_option("--prescribed-diss", prescribed, "uniform dissipated work (J/m^3), skips the velocity solve");

  auto* closed = app.add_subcommand("closed-form", "homogeneous solution for the config's initial state");
  closed->add_option("config", config_path, "TOML configuration")->required();
  closed->add_option("--diss", diss, "dissipated work (J/m^3)")->required();

  auto* sweep = app.add_subcommand("sweep", "closed-form table over a range of dissipated work (CSV on stdout)");
  sweep->add_option("config", config_path, "TOML configuration")->required();
  sweep->add_option("--diss-min", diss_min, "J/m^3")->required();
  sweep->add_option("--diss-max", diss_max, "J/m^3")->required();
  sweep->add_option("--samples", samples, "number of rows")->required();

  auto* mms = app.add_subcommand("mms", "manufactured-solution convergence report");
  mms->add_option("--levels", levels, "number of meshes, 8x8 upwards");

  auto* project = app.add_subcommand("project", "nearest point of the phase triangle K");
  project->add_option("point", point, "x2 x3")->expected(2)->required()->allow_extra_args(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (collide->parsed()) return run_collide(config_path, out_dir, prescribed, out);
    if (closed->parsed()) return run_closed_form(config_path, diss, out);
    if (sweep->parsed()) return run_sweep(config_path, diss_min, diss_max, samples, out);
    if (mms->parsed()) return run_mms(levels, out);
    if (project->parsed()) {
      const auto r = project_onto_K_with_region(Eigen::Vector2d(point[0], point[1]));
      out << fmt(r.x(0)) << " " << fmt(r.x(1)) << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace smacollide
