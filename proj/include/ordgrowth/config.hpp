#pragma once

// Experiment configuration: a versioned JSON document declaring circle lifts,
// torus Hamiltonians and metrics by catalogue name, plus horizons, grid
// resolutions and tolerances. Unknown keys are rejected.

#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "circle.hpp"
#include "contact_torus.hpp"
#include "errors.hpp"
#include "stable_norm.hpp"
#include "torus_metric.hpp"

namespace ordgrowth {

namespace detail {

inline void check_keys(const json& j, const std::set<std::string>& allowed,
                       const std::string& where) {
  if (!j.is_object()) raise(errc::config_error, where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) raise(errc::config_error, "unknown key \"" + key + "\" in " + where);
}

// Missing keys and type mismatches inside a declaration surface as config
// errors, not as raw JSON exceptions.
template <class Fn>
auto as_config_errors(const char* where, Fn&& fn) {
  try {
    return fn();
  } catch (const error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    raise(errc::config_error, std::string(where) + ": " + e.what());
  }
}

}  // namespace detail

inline homogeneous_hamiltonian ham_from_json(const json& j);

namespace detail {
inline homogeneous_hamiltonian ham_from_json_impl(const json& j) {
  if (!j.is_object() || !j.contains("type"))
    raise(errc::config_error, "hamiltonian declaration needs a \"type\"");
  std::string type = j.at("type").get<std::string>();
  if (type == "zero") {
    detail::check_keys(j, {"type", "dim"}, "zero hamiltonian");
    return ham_zero(j.value("dim", 2));
  }
  if (type == "euclidean_norm") {
    detail::check_keys(j, {"type", "dim"}, "euclidean_norm");
    return ham_euclidean(j.value("dim", 2));
  }
  if (type == "linear") {
    detail::check_keys(j, {"type", "e"}, "linear hamiltonian");
    return ham_linear(j.at("e").get<std::vector<double>>());
  }
  if (type == "weighted_norm") {
    detail::check_keys(j, {"type", "weights"}, "weighted_norm");
    return ham_weighted(j.at("weights").get<std::vector<double>>());
  }
  if (type == "quadratic_norm") {
    detail::check_keys(j, {"type", "dim", "matrix"}, "quadratic_norm");
    return ham_quadratic(j.at("dim").get<int>(), j.at("matrix").get<std::vector<double>>());
  }
  if (type == "affine") {
    detail::check_keys(j, {"type", "terms", "dim"}, "affine hamiltonian");
    std::vector<std::pair<double, homogeneous_hamiltonian>> terms;
    for (const auto& t : j.at("terms")) {
      detail::check_keys(t, {"coef", "h"}, "affine term");
      terms.emplace_back(t.at("coef").get<double>(), ham_from_json(t.at("h")));
    }
    return ham_affine(std::move(terms), j.value("dim", 2));
  }
  if (type == "iterate") {
    detail::check_keys(j, {"type", "k", "of"}, "iterate");
    return ham_from_json(j.at("of")).iterate(j.at("k").get<long long>());
  }
  if (type == "inverse") {
    detail::check_keys(j, {"type", "of"}, "inverse");
    return ham_from_json(j.at("of")).inverse();
  }
  raise(errc::config_error, "unknown hamiltonian catalogue type \"" + type + "\"");
}
}  // namespace detail

inline homogeneous_hamiltonian ham_from_json(const json& j) {
  return detail::as_config_errors("hamiltonian declaration",
                                  [&] { return detail::ham_from_json_impl(j); });
}

namespace detail {
inline circle_lift lift_from_json_impl(const json& j) {
  if (!j.is_object()) raise(errc::config_error, "lift declaration must be an object");
  if (j.contains("word")) {
    detail::check_keys(j, {"word"}, "lift");
    return circle_lift::from_json(j);
  }
  if (j.contains("translation")) {
    detail::check_keys(j, {"translation"}, "lift");
    return circle_lift::translation(j.at("translation").get<double>());
  }
  if (j.contains("arnold")) {
    detail::check_keys(j, {"arnold"}, "lift");
    const json& a = j.at("arnold");
    detail::check_keys(a, {"a", "b", "phi"}, "arnold lift");
    return circle_lift::arnold(a.at("a").get<double>(), a.at("b").get<double>(),
                               a.value("phi", 0.0));
  }
  raise(errc::config_error, "lift must declare \"word\", \"translation\" or \"arnold\"");
}

inline torus_metric metric_from_json_impl(const json& j) {
  if (!j.is_object() || !j.contains("type"))
    raise(errc::config_error, "metric declaration needs a \"type\"");
  std::string type = j.at("type").get<std::string>();
  if (type == "identity") {
    detail::check_keys(j, {"type", "dim"}, "identity metric");
    return torus_metric::identity(j.value("dim", 2));
  }
  if (type == "constant") {
    detail::check_keys(j, {"type", "dim", "matrix"}, "constant metric");
    return torus_metric::constant(j.at("dim").get<int>(), j.at("matrix").get<std::vector<double>>());
  }
  if (type == "conformal_cos") {
    detail::check_keys(j, {"type", "dim", "amplitude", "axis"}, "conformal metric");
    return torus_metric::conformal_cos(j.value("dim", 2), j.at("amplitude").get<double>(),
                                       j.value("axis", 0));
  }
  if (type == "csv") {
    detail::check_keys(j, {"type", "path", "dim", "resolution"}, "csv metric");
    std::ifstream is(j.at("path").get<std::string>());
    if (!is) raise(errc::config_error, "cannot open metric CSV " + j.at("path").get<std::string>());
    return torus_metric::from_csv(is, j.at("dim").get<int>(), j.at("resolution").get<int>());
  }
  raise(errc::config_error, "unknown metric catalogue type \"" + type + "\"");
}
}  // namespace detail

inline circle_lift lift_from_json(const json& j) {
  return detail::as_config_errors("lift declaration",
                                  [&] { return detail::lift_from_json_impl(j); });
}

inline torus_metric metric_from_json(const json& j) {
  return detail::as_config_errors("metric declaration",
                                  [&] { return detail::metric_from_json_impl(j); });
}

struct experiment_config {
  int schema_version = 1;
  std::string model = "circle";

  circle_options circle;
  std::map<std::string, circle_lift> lifts;

  int sphere_points = 4096;
  int lattice_range = 24;
  std::map<std::string, homogeneous_hamiltonian> hamiltonians;
  std::string h_ref;  // reference hamiltonian of the sup-log chart; a free choice

  int metric_resolution = 64;
  loop_options loops;
  int dual_sweeps = 40;
  std::map<std::string, torus_metric> metrics;

  // run parameters
  std::string f_name, g_name;        // circle lifts
  std::string f_ham_name, g_ham_name;  // torus hamiltonians
  std::string metric_name;
  long long horizon = 100;       // K for growth sequences
  long long horizon_norm = 3;    // K for stable-norm limits
  long long n_iter = 100000;
  std::vector<long long> e_class;
  std::vector<double> a_class;
  double eps = 0.05;

  const circle_lift& lift(const std::string& name) const {
    auto it = lifts.find(name);
    if (it == lifts.end()) raise(errc::config_error, "undeclared lift \"" + name + "\"");
    return it->second;
  }
  const homogeneous_hamiltonian& hamiltonian(const std::string& name) const {
    auto it = hamiltonians.find(name);
    if (it == hamiltonians.end())
      raise(errc::config_error, "undeclared hamiltonian \"" + name + "\"");
    return it->second;
  }
  const torus_metric& metric(const std::string& name) const {
    auto it = metrics.find(name);
    if (it == metrics.end()) raise(errc::config_error, "undeclared metric \"" + name + "\"");
    return it->second;
  }

  static experiment_config from_json(const json& j) {
    return detail::as_config_errors("config", [&] { return from_json_impl(j); });
  }

 private:
  static experiment_config from_json_impl(const json& j) {
    detail::check_keys(
        j, {"schema_version", "model", "tolerances", "circle", "torus", "metric", "run"}, "config");
    experiment_config c;
    if (!j.contains("schema_version"))
      raise(errc::config_error, "config needs \"schema_version\"");
    c.schema_version = j.at("schema_version").get<int>();
    if (c.schema_version != 1) raise(errc::config_error, "unsupported schema_version");
    c.model = j.value("model", "circle");
    if (c.model != "circle" && c.model != "torus" && c.model != "metric")
      raise(errc::config_error, "model must be circle, torus or metric");

    if (j.contains("tolerances")) {
      detail::check_keys(j.at("tolerances"), {"eval"}, "tolerances");
      c.circle.eval_tolerance = j.at("tolerances").value("eval", c.circle.eval_tolerance);
    }

    if (j.contains("circle")) {
      const json& cj = j.at("circle");
      detail::check_keys(cj, {"grid", "refined_grid", "q_max", "lifts"}, "circle section");
      c.circle.grid_points = cj.value("grid", c.circle.grid_points);
      c.circle.refined_grid_points = cj.value("refined_grid", c.circle.refined_grid_points);
      c.circle.q_max = cj.value("q_max", c.circle.q_max);
      if (c.circle.grid_points < 64) raise(errc::config_error, "circle grid must be >= 64");
      if (c.circle.refined_grid_points < c.circle.grid_points)
        raise(errc::config_error, "refined grid must be at least the base grid");
      if (cj.contains("lifts"))
        for (const auto& [name, lj] : cj.at("lifts").items()) c.lifts.emplace(name, lift_from_json(lj));
    }

    if (j.contains("torus")) {
      const json& tj = j.at("torus");
      detail::check_keys(tj, {"sphere_points", "lattice_range", "hamiltonians", "h_ref"},
                         "torus section");
      c.sphere_points = tj.value("sphere_points", c.sphere_points);
      c.lattice_range = tj.value("lattice_range", c.lattice_range);
      if (tj.contains("hamiltonians"))
        for (const auto& [name, hj] : tj.at("hamiltonians").items())
          c.hamiltonians.emplace(name, ham_from_json(hj));
      c.h_ref = tj.value("h_ref", std::string());
      if (!c.h_ref.empty() && !c.hamiltonians.count(c.h_ref))
        raise(errc::config_error, "h_ref names an undeclared hamiltonian");
    }

    if (j.contains("metric")) {
      const json& mj = j.at("metric");
      detail::check_keys(
          mj, {"resolution", "stencil_range", "box_margin", "dual_sweeps", "metrics"},
          "metric section");
      c.metric_resolution = mj.value("resolution", c.metric_resolution);
      if (c.metric_resolution < 2) raise(errc::config_error, "metric resolution must be >= 2");
      c.loops.stencil_range = mj.value("stencil_range", 0);
      c.loops.box_margin = mj.value("box_margin", 1);
      c.dual_sweeps = mj.value("dual_sweeps", 40);
      if (mj.contains("metrics"))
        for (const auto& [name, gj] : mj.at("metrics").items())
          c.metrics.emplace(name, metric_from_json(gj));
    }

    if (j.contains("run")) {
      const json& rj = j.at("run");
      detail::check_keys(rj, {"f", "g", "F", "G", "metric", "K", "K_norm", "n_iter", "e", "a", "eps"},
                         "run section");
      c.f_name = rj.value("f", std::string());
      c.g_name = rj.value("g", std::string());
      c.f_ham_name = rj.value("F", std::string());
      c.g_ham_name = rj.value("G", std::string());
      c.metric_name = rj.value("metric", std::string());
      c.horizon = rj.value("K", c.horizon);
      c.horizon_norm = rj.value("K_norm", c.horizon_norm);
      c.n_iter = rj.value("n_iter", c.n_iter);
      if (c.horizon < 1 || c.horizon_norm < 1) raise(errc::config_error, "K must be >= 1");
      if (c.n_iter < 1) raise(errc::config_error, "n_iter must be >= 1");
      if (rj.contains("e")) c.e_class = rj.at("e").get<std::vector<long long>>();
      if (rj.contains("a")) c.a_class = rj.at("a").get<std::vector<double>>();
      c.eps = rj.value("eps", c.eps);
      if (c.eps < 0.0) raise(errc::config_error, "eps must be >= 0");
    }
    return c;
  }

 public:
  static experiment_config from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) raise(errc::config_error, "cannot open config file " + path);
    json j;
    try {
      is >> j;
    } catch (const std::exception& e) {
      raise(errc::config_error, std::string("config parse failure: ") + e.what());
    }
    return from_json(j);
  }
};

}  // namespace ordgrowth
