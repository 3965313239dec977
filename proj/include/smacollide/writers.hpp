#pragma once

#include "smacollide/closed_form.hpp"
#include "smacollide/coupling.hpp"
#include "smacollide/mesh.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace smacollide {

// Columns x,y,Ux,Uy,T_plus,beta1,beta2,beta3,diss; one row per node, 17 significant digits.
void write_fields_csv(const CollisionResult& result, const Mesh& mesh, const std::filesystem::path& path);
void write_fields_csv(const CollisionResult& result, const Mesh& mesh, std::ostream& out);

// Parsed CSV: header names and one row of values per data line.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);

// Legacy ASCII VTK 3.0 unstructured grid of triangles with the nodal fields.
void write_vtk(const CollisionResult& result, const Mesh& mesh, const std::filesystem::path& path);
void write_vtk(const CollisionResult& result, const Mesh& mesh, std::ostream& out);

// Solver diagnostics and a few field summaries as JSON.
void write_diagnostics_json(const CollisionResult& result, const Mesh& mesh, const std::filesystem::path& path);
std::string diagnostics_json(const CollisionResult& result, const Mesh& mesh);

// diss,T_plus,beta3,regime
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace smacollide
