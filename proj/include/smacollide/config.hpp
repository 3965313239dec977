#pragma once

#include "smacollide/coupling.hpp"
#include "smacollide/mesh.hpp"
#include "smacollide/thermal.hpp"
#include "smacollide/types.hpp"
#include "smacollide/velocity.hpp"

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace smacollide {

// Bad or missing configuration entry; key() is the dotted path ("material.rho").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Everything a run needs, in SI units.
struct RunConfig {
  MaterialParams material;

  struct Geometry {
    double width = 0.0;  // m
    double height = 0.0;
    int nx = 100;
    int ny = 100;
    BoundarySpec boundary;
    bool operator==(const Geometry&) const = default;
  } geometry;

  struct Percussion {
    double magnitude = 0.0;  // Pa s
    double angle = 0.0;      // rad
    bool operator==(const Percussion&) const = default;
  } percussion;

  struct Initial {
    double T_minus = 0.0;  // K
    std::array<double, 3> beta_minus{0.5, 0.5, 0.0};
    bool operator==(const Initial&) const = default;
  } initial;

  ThermalBC thermal_bc;

  struct Solver {
    double fp_tol = 1e-8;
    int fp_max_iter = 200;
    double relaxation = 1.0;
    double lin_tol = 1e-10;
    double vi_tol = 1e-10;
    bool operator==(const Solver&) const = default;
  } solver;

  bool operator==(const RunConfig&) const = default;

  PercussionLoad load() const { return {percussion.magnitude, percussion.angle, BoundaryTag::Gamma1}; }
  Mesh build_mesh() const;
  CollisionOptions collision_options() const;
  Eigen::Vector3d beta_minus() const { return {initial.beta_minus[0], initial.beta_minus[1], initial.beta_minus[2]}; }
};

// TOML in engineering units: MPa s, MJ/m^3, MJ/(m^3 K), mm, degrees. upsilon and
// kappa_interfacial are in MPa mm^2 (= N). Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

// Inverse of parse_config: parse_config(serialize_config(c)) == c exactly.
std::string serialize_config(const RunConfig& cfg);

// Raises ConfigError on the first violated constraint.
void validate(const RunConfig& cfg);

}  // namespace smacollide
