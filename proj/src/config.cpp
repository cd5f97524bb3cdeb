#include "trireduce/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "trireduce/reduction.hpp"

namespace trireduce {

using nlohmann::json;

ConfigError::ConfigError(std::string field, const std::string& message)
    : Error(fmt::format("config error at '{}': {}", field, message)), field_(std::move(field)) {}

namespace {

std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(join_path(path, key), "unknown field");
  }
}

const json& require_object(const json& parent, const std::string& key, const std::string& path) {
  const std::string p = join_path(path, key);
  if (!parent.contains(key)) throw ConfigError(p, "missing required field");
  const json& v = parent.at(key);
  if (!v.is_object()) throw ConfigError(p, "expected an object");
  return v;
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
  return x;
}

double number_field(const json& obj, const std::string& key, const std::string& path,
                    std::optional<double> fallback = std::nullopt) {
  const std::string p = join_path(path, key);
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(p, "missing required field");
  }
  return number_at(obj.at(key), p);
}

double positive_field(const json& obj, const std::string& key, const std::string& path,
                      std::optional<double> fallback = std::nullopt) {
  const double x = number_field(obj, key, path, fallback);
  if (!(x > 0.0)) throw ConfigError(join_path(path, key), "must be strictly positive");
  return x;
}

double nonnegative_field(const json& obj, const std::string& key, const std::string& path,
                         double fallback) {
  const double x = number_field(obj, key, path, fallback);
  if (x < 0.0) throw ConfigError(join_path(path, key), "must be non-negative");
  return x;
}

std::size_t count_field(const json& obj, const std::string& key, const std::string& path,
                        std::size_t fallback) {
  const std::string p = join_path(path, key);
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ConfigError(p, "expected an integer >= 1");
  }
  return static_cast<std::size_t>(v.get<long long>());
}

Vec3 vec3_at(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) throw ConfigError(path, "expected an array of 3 numbers");
  return Vec3(number_at(v[0], path + "[0]"), number_at(v[1], path + "[1]"),
              number_at(v[2], path + "[2]"));
}

std::array<Vec3, 3> triple_at(const json& obj, const std::string& key, const std::string& path) {
  const std::string p = join_path(path, key);
  if (!obj.contains(key)) throw ConfigError(p, "missing required field");
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 3) throw ConfigError(p, "expected an array of 3 vectors");
  return {vec3_at(v[0], p + "[0]"), vec3_at(v[1], p + "[1]"), vec3_at(v[2], p + "[2]")};
}

MassTriple parse_masses(const json& root) {
  if (!root.contains("masses")) throw ConfigError("masses", "missing required field");
  const json& v = root.at("masses");
  if (!v.is_array() || v.size() != 3) throw ConfigError("masses", "expected an array of 3 numbers");
  double m[3];
  for (int i = 0; i < 3; ++i) {
    const std::string p = fmt::format("masses[{}]", i);
    m[i] = number_at(v[i], p);
    if (!(m[i] > 0.0)) throw ConfigError(p, "mass must be strictly positive");
  }
  return MassTriple(m[0], m[1], m[2]);
}

PotentialSpec parse_potential_field(const json& root) {
  const json& pot = require_object(root, "potential", "");
  const bool has_builtin = pot.contains("builtin");
  const bool has_expr = pot.contains("expression");
  if (has_builtin == has_expr) {
    throw ConfigError("potential", "exactly one of 'builtin' or 'expression' is required");
  }
  if (has_expr) {
    reject_unknown(pot, "potential", {"expression"});
    const json& e = pot.at("expression");
    if (!e.is_string()) throw ConfigError("potential.expression", "expected a string");
    try {
      return parse_potential(e.get<std::string>());
    } catch (const ParseError& err) {
      throw ConfigError("potential.expression", err.what());
    }
  }

  reject_unknown(pot, "potential", {"builtin", "params"});
  const json& b = pot.at("builtin");
  if (!b.is_string()) throw ConfigError("potential.builtin", "expected a string");
  const std::string name = b.get<std::string>();
  const json empty = json::object();
  const json& params = pot.contains("params") ? pot.at("params") : empty;
  if (!params.is_object()) throw ConfigError("potential.params", "expected an object");
  const std::string pp = "potential.params";

  if (name == "free") {
    reject_unknown(params, pp, {});
    return FreePotential{};
  }
  if (name == "gravity") {
    reject_unknown(params, pp, {"G"});
    return GravityPotential{positive_field(params, "G", pp, 1.0)};
  }
  if (name == "harmonic") {
    reject_unknown(params, pp, {"k", "rest"});
    HarmonicPotential h;
    h.k = positive_field(params, "k", pp, 1.0);
    if (params.contains("rest")) {
      const Vec3 rest = vec3_at(params.at("rest"), pp + ".rest");
      for (int i = 0; i < 3; ++i) {
        if (rest[i] < 0.0) throw ConfigError(fmt::format("{}.rest[{}]", pp, i), "must be non-negative");
        h.rest[i] = rest[i];
      }
    }
    return h;
  }
  if (name == "lennard_jones") {
    reject_unknown(params, pp, {"epsilon", "sigma"});
    return LennardJonesPotential{positive_field(params, "epsilon", pp, 1.0),
                                 positive_field(params, "sigma", pp, 1.0)};
  }
  throw ConfigError("potential.builtin",
                    "unknown builtin '" + name + "' (free, gravity, harmonic, lennard_jones)");
}

Thresholds parse_thresholds(const json& root, double& passage) {
  Thresholds t;
  passage = t.band;
  if (!root.contains("thresholds")) return t;
  const json& th = require_object(root, "thresholds", "");
  reject_unknown(th, "thresholds", {"collinear", "band", "alignment", "passage"});
  t.collinear = nonnegative_field(th, "collinear", "thresholds", t.collinear);
  t.band = nonnegative_field(th, "band", "thresholds", t.band);
  t.alignment = nonnegative_field(th, "alignment", "thresholds", t.alignment);
  passage = nonnegative_field(th, "passage", "thresholds", t.band);
  return t;
}

IntegratorConfig parse_integrator(const json& root) {
  IntegratorConfig cfg;
  if (!root.contains("integrator")) return cfg;
  const json& in = require_object(root, "integrator", "");
  const std::string p = "integrator";
  reject_unknown(in, p, {"method", "dt", "steps", "record_stride", "overflow_guard", "energy_guard"});
  if (in.contains("method")) {
    const json& m = in.at("method");
    const std::string name = m.is_string() ? m.get<std::string>() : "";
    if (name == "leapfrog") {
      cfg.method = Method::Leapfrog;
    } else if (name == "rk4") {
      cfg.method = Method::Rk4;
    } else {
      throw ConfigError("integrator.method", "expected \"leapfrog\" or \"rk4\"");
    }
  }
  cfg.dt = positive_field(in, "dt", p, cfg.dt);
  cfg.steps = count_field(in, "steps", p, cfg.steps);
  cfg.record_stride = count_field(in, "record_stride", p, cfg.record_stride);
  cfg.overflow_guard = positive_field(in, "overflow_guard", p, cfg.overflow_guard);
  cfg.energy_guard = nonnegative_field(in, "energy_guard", p, cfg.energy_guard);
  return cfg;
}

CartesianState state_from_shape(const MassTriple& m, const json& sh, const Thresholds& th) {
  const std::string p = "initial_state.shape";
  reject_unknown(sh, p, {"r1", "r2", "phi", "J", "p", "euler"});
  ShapeCoordinates q{positive_field(sh, "r1", p), positive_field(sh, "r2", p),
                     number_field(sh, "phi", p)};
  if (q.phi < 0.0 || q.phi > std::numbers::pi) throw ConfigError(p + ".phi", "must lie in [0, pi]");
  if (!sh.contains("J")) throw ConfigError(p + ".J", "missing required field");
  if (!sh.contains("p")) throw ConfigError(p + ".p", "missing required field");
  const BodyMomenta mom{vec3_at(sh.at("J"), p + ".J"), vec3_at(sh.at("p"), p + ".p")};
  EulerAngles e{0.0, 0.0, 0.0};
  if (sh.contains("euler")) {
    const Vec3 a = vec3_at(sh.at("euler"), p + ".euler");
    e = {a[0], a[1], a[2]};
  }

  BodyVelocityState w;
  if (std::abs(std::sin(q.phi)) > th.collinear) {
    w = velocities_from_momenta(q, mom, th.collinear);
  } else {
    const double tol = th.alignment * mom.J.norm();
    if (std::abs(mom.J.x()) > tol || std::abs(mom.J.y()) > tol) {
      throw ConfigError(p + ".J", "collinear shape requires J1 = J2 = 0");
    }
    w = collinear_velocities_from_momenta(q.r1, q.r2, mom);
  }
  const BodyVectors b = body_vectors(q);
  const auto v = body_velocities(q, w);
  const Rotation R = rotation_from_euler(e);
  const JacobiVectors j{R * b.r[0], R * b.r[1], R * v[0], R * v[1]};
  return cartesian_from_jacobi(m, j);
}

CartesianState parse_initial(const json& root, const MassTriple& m, const Thresholds& th) {
  const json& init = require_object(root, "initial_state", "");
  const bool has_cart = init.contains("cartesian");
  const bool has_shape = init.contains("shape");
  if (has_cart == has_shape) {
    throw ConfigError("initial_state", "exactly one of 'cartesian' or 'shape' is required");
  }
  reject_unknown(init, "initial_state", {"cartesian", "shape"});
  if (has_cart) {
    const json& c = require_object(init, "cartesian", "initial_state");
    reject_unknown(c, "initial_state.cartesian", {"positions", "velocities"});
    CartesianState s;
    s.x = triple_at(c, "positions", "initial_state.cartesian");
    s.v = triple_at(c, "velocities", "initial_state.cartesian");
    return s;
  }
  return state_from_shape(m, require_object(init, "shape", "initial_state"), th);
}

OutputPaths parse_output(const json& root) {
  OutputPaths out;
  if (!root.contains("output")) return out;
  const json& o = require_object(root, "output", "");
  reject_unknown(o, "output", {"trajectory", "passages", "evaluation"});
  auto path_field = [&](const char* key, std::optional<std::string>& dst) {
    if (!o.contains(key)) return;
    if (!o.at(key).is_string()) throw ConfigError(join_path("output", key), "expected a string");
    dst = o.at(key).get<std::string>();
  };
  path_field("trajectory", out.trajectory);
  path_field("passages", out.passages);
  path_field("evaluation", out.evaluation);
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("$", "top level must be an object");
  reject_unknown(root, "",
                 {"masses", "potential", "initial_state", "integrator", "thresholds", "output"});

  const MassTriple masses = parse_masses(root);
  PotentialSpec potential = parse_potential_field(root);
  double passage = 0.0;
  const Thresholds thresholds = parse_thresholds(root, passage);
  CartesianState initial;
  try {
    initial = parse_initial(root, masses, thresholds);
  } catch (const SingularInertia& e) {
    throw ConfigError("initial_state.shape.phi", e.what());
  }
  return RunConfig{masses,          potential, initial, parse_integrator(root),
                   thresholds,      passage,   parse_output(root)};
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading config file '" + path + "'");
  return parse_config(buf.str());
}

}  // namespace trireduce
