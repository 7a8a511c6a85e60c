#include "exbound/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "exbound/errors.hpp"

namespace exbound {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) throw ConfigError("unknown key '" + where + key + "'");
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("'" + where + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("'" + where + key + "' must be finite");
  return x;
}

double positive(const json& obj, const std::string& key, const std::string& where) {
  const double x = number(obj, key, where);
  if (!(x > 0.0)) throw ConfigError("'" + where + key + "' must be positive");
  return x;
}

long long integer(const json& obj, const std::string& key, const std::string& where,
                  long long min) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError("'" + where + key + "' must be an integer");
  const long long x = v.get<long long>();
  if (x < min) {
    throw ConfigError("'" + where + key + "' must be at least " + std::to_string(min));
  }
  return x;
}

bool boolean(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError("'" + where + key + "' must be true or false");
  return v.get<bool>();
}

std::vector<double> number_list(const json& obj, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError("'" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number() || !std::isfinite(e.get<double>())) {
      throw ConfigError("'" + key + "' must contain finite numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

void parse_solver(const json& s, RunConfig& cfg) {
  const std::string w = "solver.";
  reject_unknown(s, {"stop_rel", "max_iter", "zeta_initial", "cg_rel_tol", "cg_max_iter",
                     "flux_solver"}, w);
  if (s.contains("stop_rel")) cfg.solver.stop_rel = positive(s, "stop_rel", w);
  if (s.contains("max_iter")) cfg.solver.max_iter = integer(s, "max_iter", w, 1);
  if (s.contains("zeta_initial")) cfg.solver.zeta_initial = number(s, "zeta_initial", w);
  if (s.contains("cg_rel_tol")) cfg.solver.cg.rel_tol = positive(s, "cg_rel_tol", w);
  if (s.contains("cg_max_iter")) cfg.solver.cg.max_iter = integer(s, "cg_max_iter", w, 0);
  if (s.contains("flux_solver")) {
    const json& v = s.at("flux_solver");
    if (v == "cholesky") {
      cfg.majorant.flux_solver = FluxSolver::Cholesky;
    } else if (v == "cg") {
      cfg.majorant.flux_solver = FluxSolver::Cg;
    } else {
      throw ConfigError("'solver.flux_solver' must be \"cholesky\" or \"cg\"");
    }
  }
  cfg.majorant.cg = cfg.solver.cg;
}

void parse_majorant(const json& m, RunConfig& cfg) {
  const std::string w = "majorant.";
  reject_unknown(m, {"flux_degree", "beta_initial", "beta_tol", "beta_max_iter",
                     "literal_display"}, w);
  if (m.contains("flux_degree")) {
    const long long d = integer(m, "flux_degree", w, 1);
    if (d > 2) throw ConfigError("'majorant.flux_degree' must be 1 or 2");
    cfg.majorant.flux_degree = static_cast<int>(d);
  }
  if (m.contains("beta_initial")) cfg.majorant.beta_initial = positive(m, "beta_initial", w);
  if (m.contains("beta_tol")) cfg.majorant.beta_tol = positive(m, "beta_tol", w);
  if (m.contains("beta_max_iter")) cfg.majorant.beta_max_iter = integer(m, "beta_max_iter", w, 1);
  if (m.contains("literal_display")) {
    cfg.majorant.literal_display = boolean(m, "literal_display", w);
  }
}

}  // namespace

std::string_view to_string(Obstacle obstacle) {
  return obstacle == Obstacle::Ball ? "ball" : "cube";
}

RunConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(doc, {"geometry", "radius", "ladder", "degree", "boundary_value", "solver",
                       "majorant", "thetas", "deltas", "seed", "output_dir"}, "");
  for (const char* key : {"geometry", "radius", "ladder"}) {
    if (!doc.contains(key)) throw ConfigError(std::string("missing required key '") + key + "'");
  }

  RunConfig cfg;
  const json& geometry = doc.at("geometry");
  if (geometry == "ball") {
    cfg.geometry = Obstacle::Ball;
  } else if (geometry == "cube") {
    cfg.geometry = Obstacle::Cube;
  } else {
    throw ConfigError("'geometry' must be \"ball\" or \"cube\"");
  }

  cfg.radius = number(doc, "radius", "");
  const double min_radius = cfg.geometry == Obstacle::Ball ? 1.0 : std::sqrt(3.0);
  if (!(cfg.radius > min_radius)) {
    throw ConfigError("'radius' must exceed " + std::to_string(min_radius) + " for geometry " +
                      std::string(to_string(cfg.geometry)));
  }

  const json& ladder = doc.at("ladder");
  if (!ladder.is_array() || ladder.empty()) {
    throw ConfigError("'ladder' must be a non-empty array");
  }
  for (const json& e : ladder) {
    reject_unknown(e, {"n_radial", "n_angular"}, "ladder.");
    if (!e.contains("n_radial") || !e.contains("n_angular")) {
      throw ConfigError("ladder entries need 'n_radial' and 'n_angular'");
    }
    cfg.ladder.push_back({static_cast<int>(integer(e, "n_radial", "ladder.", 1)),
                          static_cast<int>(integer(e, "n_angular", "ladder.", 1))});
  }

  if (doc.contains("degree")) {
    const long long d = integer(doc, "degree", "", 1);
    if (d > 2) throw ConfigError("'degree' must be 1 or 2");
    cfg.degree = static_cast<int>(d);
  }
  if (doc.contains("boundary_value")) cfg.boundary_value = number(doc, "boundary_value", "");
  if (doc.contains("solver")) parse_solver(doc.at("solver"), cfg);
  if (doc.contains("majorant")) parse_majorant(doc.at("majorant"), cfg);
  if (doc.contains("thetas")) {
    cfg.thetas = number_list(doc, "thetas");
    for (double t : cfg.thetas) {
      if (!(t > 0.0)) throw ConfigError("'thetas' entries must be positive");
    }
  }
  if (doc.contains("deltas")) {
    cfg.deltas = number_list(doc, "deltas");
    for (double d : cfg.deltas) {
      if (d < 0.0) throw ConfigError("'deltas' entries must be non-negative");
    }
  }
  if (doc.contains("seed")) cfg.seed = static_cast<std::uint64_t>(integer(doc, "seed", "", 0));
  if (doc.contains("output_dir")) {
    const json& v = doc.at("output_dir");
    if (!v.is_string() || v.get<std::string>().empty()) {
      throw ConfigError("'output_dir' must be a non-empty string");
    }
    cfg.output_dir = v.get<std::string>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace exbound
