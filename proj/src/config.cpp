#include "smacollide/config.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

namespace smacollide {

namespace {

constexpr double kMega = 1e6;
constexpr double kMilli = 1e-3;
constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kMPaMm2 = 1.0;  // MPa mm^2 = N

class Reader {
 public:
  explicit Reader(const toml::table& root) : root_(root) {}

  const toml::table* section(const std::string& name, bool required) const {
    const toml::node* n = root_.get(name);
    if (!n) {
      if (required) throw ConfigError(name, "missing section");
      return nullptr;
    }
    const auto* t = n->as_table();
    if (!t) throw ConfigError(name, "expected a table");
    return t;
  }

  static std::optional<double> number(const toml::table* t, const std::string& sec, const std::string& key,
                                      bool required) {
    const toml::node* n = t ? t->get(key) : nullptr;
    if (!n) {
      if (required) throw ConfigError(sec + "." + key, "missing key");
      return std::nullopt;
    }
    if (auto v = n->value<double>(); v && n->is_number()) return *v;
    throw ConfigError(sec + "." + key, "expected a number");
  }

  static std::optional<int> integer(const toml::table* t, const std::string& sec, const std::string& key,
                                    bool required) {
    const toml::node* n = t ? t->get(key) : nullptr;
    if (!n) {
      if (required) throw ConfigError(sec + "." + key, "missing key");
      return std::nullopt;
    }
    if (!n->is_integer()) throw ConfigError(sec + "." + key, "expected an integer");
    const auto v = *n->value<std::int64_t>();
    if (v < -1000000000 || v > 1000000000) throw ConfigError(sec + "." + key, "integer out of range");
    return static_cast<int>(v);
  }

  static std::optional<std::string> string(const toml::table* t, const std::string& sec, const std::string& key) {
    const toml::node* n = t ? t->get(key) : nullptr;
    if (!n) return std::nullopt;
    if (!n->is_string()) throw ConfigError(sec + "." + key, "expected a string");
    return *n->value<std::string>();
  }

 private:
  const toml::table& root_;
};

BoundaryRegion read_region(const toml::table* geo, const std::string& key, const BoundaryRegion& fallback) {
  const std::string path = "geometry." + key;
  const toml::node* n = geo ? geo->get(key) : nullptr;
  if (!n) return fallback;
  const auto* t = n->as_table();
  if (!t) throw ConfigError(path, "expected a table {side, start, end}");
  BoundaryRegion r;
  const auto side = Reader::string(t, path, "side");
  if (!side) throw ConfigError(path + ".side", "missing key");
  if (*side == "bottom") r.side = Side::Bottom;
  else if (*side == "right") r.side = Side::Right;
  else if (*side == "top") r.side = Side::Top;
  else if (*side == "left") r.side = Side::Left;
  else if (*side == "none") r.side = std::nullopt;
  else throw ConfigError(path + ".side", "expected bottom, right, top, left or none");
  r.start = Reader::number(t, path, "start", false).value_or(0.0);
  r.end = Reader::number(t, path, "end", false).value_or(1.0);
  return r;
}

RunConfig from_table(const toml::table& root) {
  Reader rd(root);
  RunConfig cfg;

  const auto* mat = rd.section("material", true);
  auto& m = cfg.material;
  m.rho = *Reader::number(mat, "material", "rho", true);
  m.k_v = *Reader::number(mat, "material", "k_v", true) * kMega;
  m.c = *Reader::number(mat, "material", "c", true) * kMega;
  m.upsilon = *Reader::number(mat, "material", "upsilon", true) * kMPaMm2;
  m.kappa = *Reader::number(mat, "material", "kappa_interfacial", true) * kMPaMm2;
  m.lambda = *Reader::number(mat, "material", "lambda", true);
  m.heat_capacity = *Reader::number(mat, "material", "C", true) * kMega;
  m.latent_heat = *Reader::number(mat, "material", "l_a", true) * kMega;
  m.T0 = *Reader::number(mat, "material", "T0", true);
  const auto variant = Reader::string(mat, "material", "variant").value_or("uniform");
  if (variant == "uniform") m.variant = PhaseVariant::UniformDissipation;
  else if (variant == "reduced") m.variant = PhaseVariant::ReducedDissipation;
  else throw ConfigError("material.variant", "expected \"uniform\" or \"reduced\"");

  const auto* geo = rd.section("geometry", true);
  auto& g = cfg.geometry;
  g.width = *Reader::number(geo, "geometry", "width", true) * kMilli;
  g.height = *Reader::number(geo, "geometry", "height", true) * kMilli;
  g.nx = Reader::integer(geo, "geometry", "nx", false).value_or(100);
  g.ny = Reader::integer(geo, "geometry", "ny", false).value_or(100);
  g.boundary.gamma0 = read_region(geo, "gamma0", g.boundary.gamma0);
  g.boundary.gamma1 = read_region(geo, "gamma1", g.boundary.gamma1);

  const auto* per = rd.section("percussion", true);
  cfg.percussion.magnitude = *Reader::number(per, "percussion", "magnitude", true) * kMega;
  cfg.percussion.angle = *Reader::number(per, "percussion", "angle_deg", true) * kDeg;

  const auto* ini = rd.section("initial", true);
  cfg.initial.T_minus = *Reader::number(ini, "initial", "T_minus", true);
  const toml::node* bn = ini->get("beta_minus");
  if (!bn) throw ConfigError("initial.beta_minus", "missing key");
  const auto* arr = bn->as_array();
  if (!arr || arr->size() != 3) throw ConfigError("initial.beta_minus", "expected an array of three numbers");
  for (std::size_t i = 0; i < 3; ++i) {
    const auto v = (*arr)[i].value<double>();
    if (!v || !(*arr)[i].is_number()) throw ConfigError("initial.beta_minus", "expected an array of three numbers");
    cfg.initial.beta_minus[i] = *v;
  }

  if (const auto* bc = rd.section("thermal_bc", false)) {
    const auto kind = Reader::string(bc, "thermal_bc", "kind").value_or("adiabatic");
    if (kind == "adiabatic") cfg.thermal_bc.kind = ThermalBCKind::Adiabatic;
    else if (kind == "robin") cfg.thermal_bc.kind = ThermalBCKind::Robin;
    else throw ConfigError("thermal_bc.kind", "expected \"adiabatic\" or \"robin\"");
    const bool robin = cfg.thermal_bc.kind == ThermalBCKind::Robin;
    cfg.thermal_bc.h_coeff = Reader::number(bc, "thermal_bc", "h_coeff", robin).value_or(0.0);
    cfg.thermal_bc.T_ext = Reader::number(bc, "thermal_bc", "T_ext", robin).value_or(0.0);
  }

  if (const auto* s = rd.section("solver", false)) {
    auto& so = cfg.solver;
    so.fp_tol = Reader::number(s, "solver", "fp_tol", false).value_or(so.fp_tol);
    so.fp_max_iter = Reader::integer(s, "solver", "fp_max_iter", false).value_or(so.fp_max_iter);
    so.relaxation = Reader::number(s, "solver", "relaxation", false).value_or(so.relaxation);
    so.lin_tol = Reader::number(s, "solver", "lin_tol", false).value_or(so.lin_tol);
    so.vi_tol = Reader::number(s, "solver", "vi_tol", false).value_or(so.vi_tol);
  }
  validate(cfg);
  return cfg;
}

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw ConfigError(key, what);
}

void check_region(const BoundaryRegion& r, const char* key, bool nonempty) {
  require(r.start >= 0.0 && r.end <= 1.0 && r.start <= r.end, key, "start/end must satisfy 0 <= start <= end <= 1");
  if (nonempty) require(r.side.has_value() && r.end > r.start, key, "region must have positive length");
}

// shortest decimal q with q * factor == x, so that reading it back reproduces x
std::string engineering(double x, double factor) {
  double q = x / factor;
  if (q * factor != x) {
    double lo = q, hi = q;
    for (int k = 0; k < 64; ++k) {
      lo = std::nextafter(lo, -INFINITY);
      hi = std::nextafter(hi, INFINITY);
      if (lo * factor == x) { q = lo; break; }
      if (hi * factor == x) { q = hi; break; }
    }
  }
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", prec, q);
    if (std::strtod(buf, nullptr) == q) {
      std::string s(buf);
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      return s;
    }
  }
  return "0.0";
}

const char* side_name(const std::optional<Side>& s) {
  if (!s) return "none";
  switch (*s) {
    case Side::Bottom: return "bottom";
    case Side::Right: return "right";
    case Side::Top: return "top";
    case Side::Left: return "left";
  }
  return "none";
}

}  // namespace

void validate(const RunConfig& cfg) {
  const auto& m = cfg.material;
  require(m.rho > 0.0, "material.rho", "must be > 0");
  require(m.k_v > 0.0, "material.k_v", "must be > 0");
  require(m.c >= 0.0, "material.c", "must be >= 0");
  require(m.upsilon >= 0.0, "material.upsilon", "must be >= 0");
  require(m.kappa >= 0.0, "material.kappa_interfacial", "must be >= 0");
  require(m.lambda >= 0.0, "material.lambda", "must be >= 0");
  require(m.heat_capacity > 0.0, "material.C", "must be > 0");
  require(m.latent_heat > 0.0, "material.l_a", "must be > 0");
  require(m.T0 > 0.0, "material.T0", "must be > 0");
  require(m.c > 0.0 || m.upsilon + m.kappa > 0.0, "material.c", "c = 0 needs upsilon + kappa_interfacial > 0");

  const auto& g = cfg.geometry;
  require(g.width > 0.0, "geometry.width", "must be > 0");
  require(g.height > 0.0, "geometry.height", "must be > 0");
  require(g.nx >= 1, "geometry.nx", "must be >= 1");
  require(g.ny >= 1, "geometry.ny", "must be >= 1");
  check_region(g.boundary.gamma0, "geometry.gamma0", true);
  check_region(g.boundary.gamma1, "geometry.gamma1", false);

  require(cfg.percussion.magnitude >= 0.0, "percussion.magnitude", "must be >= 0");
  require(cfg.percussion.angle >= 0.0 && cfg.percussion.angle <= std::numbers::pi * (1.0 + 1e-15), "percussion.angle_deg",
          "must lie in [0, 180]");

  require(cfg.initial.T_minus > 0.0, "initial.T_minus", "must be > 0");
  const auto& b = cfg.initial.beta_minus;
  for (double v : b) require(v >= 0.0 && v <= 1.0, "initial.beta_minus", "components must lie in [0, 1]");
  require(std::abs(b[0] + b[1] + b[2] - 1.0) <= 1e-12, "initial.beta_minus", "components must sum to 1");

  if (cfg.thermal_bc.kind == ThermalBCKind::Robin) {
    require(cfg.thermal_bc.h_coeff >= 0.0, "thermal_bc.h_coeff", "must be >= 0");
    require(cfg.thermal_bc.T_ext > 0.0, "thermal_bc.T_ext", "must be > 0");
  }

  const auto& s = cfg.solver;
  require(s.fp_tol > 0.0, "solver.fp_tol", "must be > 0");
  require(s.fp_max_iter >= 1, "solver.fp_max_iter", "must be >= 1");
  require(s.relaxation > 0.0 && s.relaxation <= 1.0, "solver.relaxation", "must lie in (0, 1]");
  require(s.lin_tol > 0.0, "solver.lin_tol", "must be > 0");
  require(s.vi_tol > 0.0, "solver.vi_tol", "must be > 0");
}

RunConfig parse_config(const std::string& text) {
  try {
    return from_table(toml::parse(text));
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "TOML parse error at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError("", os.str());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  const auto& m = cfg.material;
  const auto& g = cfg.geometry;
  std::ostringstream os;
  auto region = [&](const char* name, const BoundaryRegion& r) {
    os << name << " = { side = \"" << side_name(r.side) << "\", start = " << engineering(r.start, 1.0)
       << ", end = " << engineering(r.end, 1.0) << " }\n";
  };
  os << "[material]\n"
     << "rho = " << engineering(m.rho, 1.0) << "\n"
     << "k_v = " << engineering(m.k_v, kMega) << "\n"
     << "c = " << engineering(m.c, kMega) << "\n"
     << "upsilon = " << engineering(m.upsilon, kMPaMm2) << "\n"
     << "kappa_interfacial = " << engineering(m.kappa, kMPaMm2) << "\n"
     << "lambda = " << engineering(m.lambda, 1.0) << "\n"
     << "C = " << engineering(m.heat_capacity, kMega) << "\n"
     << "l_a = " << engineering(m.latent_heat, kMega) << "\n"
     << "T0 = " << engineering(m.T0, 1.0) << "\n"
     << "variant = \"" << (m.variant == PhaseVariant::UniformDissipation ? "uniform" : "reduced") << "\"\n\n";
  os << "[geometry]\n"
     << "width = " << engineering(g.width, kMilli) << "\n"
     << "height = " << engineering(g.height, kMilli) << "\n"
     << "nx = " << g.nx << "\n"
     << "ny = " << g.ny << "\n";
  region("gamma0", g.boundary.gamma0);
  region("gamma1", g.boundary.gamma1);
  os << "\n[percussion]\n"
     << "magnitude = " << engineering(cfg.percussion.magnitude, kMega) << "\n"
     << "angle_deg = " << engineering(cfg.percussion.angle, kDeg) << "\n\n";
  const auto& b = cfg.initial.beta_minus;
  os << "[initial]\n"
     << "T_minus = " << engineering(cfg.initial.T_minus, 1.0) << "\n"
     << "beta_minus = [" << engineering(b[0], 1.0) << ", " << engineering(b[1], 1.0) << ", " << engineering(b[2], 1.0)
     << "]\n\n";
  os << "[thermal_bc]\n"
     << "kind = \"" << (cfg.thermal_bc.kind == ThermalBCKind::Robin ? "robin" : "adiabatic") << "\"\n"
     << "h_coeff = " << engineering(cfg.thermal_bc.h_coeff, 1.0) << "\n"
     << "T_ext = " << engineering(cfg.thermal_bc.T_ext, 1.0) << "\n\n";
  const auto& s = cfg.solver;
  os << "[solver]\n"
     << "fp_tol = " << engineering(s.fp_tol, 1.0) << "\n"
     << "fp_max_iter = " << s.fp_max_iter << "\n"
     << "relaxation = " << engineering(s.relaxation, 1.0) << "\n"
     << "lin_tol = " << engineering(s.lin_tol, 1.0) << "\n"
     << "vi_tol = " << engineering(s.vi_tol, 1.0) << "\n";
  return os.str();
}

Mesh RunConfig::build_mesh() const {
  return build_structured_mesh(geometry.nx, geometry.ny, geometry.width, geometry.height, geometry.boundary);
}

CollisionOptions RunConfig::collision_options() const {
  CollisionOptions o;
  o.fp = {solver.fp_tol, solver.fp_max_iter, solver.relaxation};
  o.linear.tol = solver.lin_tol;
  o.phase.tol = solver.vi_tol;
  return o;
}

}  // namespace smacollide
