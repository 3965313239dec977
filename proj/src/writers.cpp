#include "smacollide/writers.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace smacollide {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

void check_sizes(const CollisionResult& r, const Mesh& mesh) {
  const auto n = mesh.num_nodes();
  if (r.U_plus.rows() != n || r.T_plus.size() != n || r.beta_plus.rows() != n || r.diss.nodal.size() != n)
    throw std::invalid_argument("result fields do not match the mesh");
}

nlohmann::json report_json(const SolveReport& r) {
  return {{"iterations", r.iterations}, {"final_residual", r.final_residual}, {"converged", r.converged}};
}

}  // namespace

void write_fields_csv(const CollisionResult& result, const Mesh& mesh, std::ostream& out) {
  check_sizes(result, mesh);
  out << "x,y,Ux,Uy,T_plus,beta1,beta2,beta3,diss\n";
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    out << num(mesh.nodes(i, 0)) << ',' << num(mesh.nodes(i, 1)) << ',' << num(result.U_plus(i, 0)) << ','
        << num(result.U_plus(i, 1)) << ',' << num(result.T_plus(i)) << ',' << num(result.beta_plus(i, 0)) << ','
        << num(result.beta_plus(i, 1)) << ',' << num(result.beta_plus(i, 2)) << ',' << num(result.diss.nodal(i)) << '\n';
  }
}

void write_fields_csv(const CollisionResult& result, const Mesh& mesh, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_fields_csv(result, mesh, out);
  finish(out, path);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw std::runtime_error(path.string() + ": non-numeric cell '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != t.header.size()) throw std::runtime_error(path.string() + ": ragged row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_vtk(const CollisionResult& result, const Mesh& mesh, std::ostream& out) {
  check_sizes(result, mesh);
  const int n = mesh.num_nodes(), nt = mesh.num_triangles();
  out << "# vtk DataFile Version 3.0\n"
      << "smacollide post-collision fields\n"
      << "ASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n"
      << "POINTS " << n << " double\n";
  for (int i = 0; i < n; ++i) out << num(mesh.nodes(i, 0)) << ' ' << num(mesh.nodes(i, 1)) << " 0\n";
  out << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (int t = 0; t < nt; ++t)
    out << "3 " << mesh.triangles(t, 0) << ' ' << mesh.triangles(t, 1) << ' ' << mesh.triangles(t, 2) << '\n';
  out << "CELL_TYPES " << nt << '\n';
  for (int t = 0; t < nt; ++t) out << "5\n";
  out << "POINT_DATA " << n << '\n';
  auto scalars = [&](const char* name, const auto& field) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < n; ++i) out << num(field(i)) << '\n';
  };
  scalars("T_plus", result.T_plus);
  scalars("beta1", result.beta_plus.col(0));
  scalars("beta2", result.beta_plus.col(1));
  scalars("beta3", result.beta_plus.col(2));
  scalars("diss", result.diss.nodal);
  out << "VECTORS U_plus double\n";
  for (int i = 0; i < n; ++i) out << num(result.U_plus(i, 0)) << ' ' << num(result.U_plus(i, 1)) << " 0\n";
}

void write_vtk(const CollisionResult& result, const Mesh& mesh, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_vtk(result, mesh, out);
  finish(out, path);
}

std::string diagnostics_json(const CollisionResult& result, const Mesh& mesh) {
  check_sizes(result, mesh);
  const auto& d = result.diagnostics;
  nlohmann::json j;
  j["converged"] = d.converged;
  j["fixed_point_iterations"] = d.iterations;
  j["update_T"] = d.update_T;
  j["update_beta"] = d.update_beta;
  j["final_update_T"] = d.update_T.empty() ? 0.0 : d.update_T.back();
  j["final_update_beta"] = d.update_beta.empty() ? 0.0 : d.update_beta.back();
  j["relaxation"] = d.relaxation;
  j["velocity_solve"] = report_json(d.velocity);
  j["thermal_solves"] = nlohmann::json::array();
  for (const auto& r : d.thermal) j["thermal_solves"].push_back(report_json(r));
  j["phase_solves"] = nlohmann::json::array();
  for (const auto& r : d.phase) j["phase_solves"].push_back(report_json(r));
  j["complementarity_residual"] = d.complementarity;
  j["phase_load_norm"] = d.phase_load_norm;
  j["warnings"] = d.warnings;
  j["mesh"] = {{"nodes", mesh.num_nodes()}, {"triangles", mesh.num_triangles()}};
  j["fields"] = {{"T_plus_min", result.T_plus.minCoeff()},
                 {"T_plus_max", result.T_plus.maxCoeff()},
                 {"beta3_max", result.beta_plus.col(2).maxCoeff()},
                 {"speed_max", result.U_plus.rowwise().norm().maxCoeff()},
                 {"diss_max", result.diss.nodal.maxCoeff()}};
  return j.dump(2) + "\n";
}

void write_diagnostics_json(const CollisionResult& result, const Mesh& mesh, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << diagnostics_json(result, mesh);
  finish(out, path);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "diss,T_plus,beta3,regime\n";
  for (const auto& r : rows) out << num(r.diss) << ',' << num(r.T_plus) << ',' << num(r.beta3) << ',' << to_string(r.regime) << '\n';
}

}  // namespace smacollide
