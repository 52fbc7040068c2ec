// Batch front-end: each computation is a subcommand driven by a JSON config;
// artifacts (JSON, plot-ready CSV) land in --out. Every numeric line carries
// its enclosure or tolerance. Exit codes: 0 ok, 1 failed assertion or
// computation error, 2 config error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ordgrowth/circle.hpp"
#include "ordgrowth/config.hpp"
#include "ordgrowth/contact_torus.hpp"
#include "ordgrowth/order_core.hpp"
#include "ordgrowth/stable_norm.hpp"
#include "ordgrowth/torus_metric.hpp"
#include "ordgrowth/verification.hpp"

namespace fs = std::filesystem;
using namespace ordgrowth;

namespace {

struct cli_state {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 20260810;
  unsigned jobs = 0;
  experiment_config cfg;
  bool cfg_loaded = false;

  const experiment_config& config() {
    if (!cfg_loaded) {
      if (config_path.empty()) raise(errc::config_error, "this subcommand needs --config PATH");
      cfg = experiment_config::from_file(config_path);
      cfg_loaded = true;
    }
    return cfg;
  }

  void write_artifact(const std::string& name, const json& j) const {
    fs::create_directories(out_dir);
    std::ofstream os(fs::path(out_dir) / name);
    os << j.dump(2) << "\n";
  }

  void write_text(const std::string& name, const std::string& text) const {
    fs::create_directories(out_dir);
    std::ofstream os(fs::path(out_dir) / name);
    os << text;
  }
};

int cmd_rot(cli_state& st) {
  const auto& cfg = st.config();
  const circle_lift& f = cfg.lift(cfg.f_name);
  rotation_estimate r = rotation_number(f, cfg.n_iter);
  std::printf("Rot(%s) = %.12g +/- %.3g  (n = %lld)\n", cfg.f_name.c_str(), r.rot.center,
              r.rot.halfwidth, r.n);
  st.write_artifact("rot.json", json{{"f", cfg.f_name},
                                     {"n", r.n},
                                     {"value", r.rot.center},
                                     {"halfwidth", r.rot.halfwidth}});
  return 0;
}

int cmd_gamma_circle(cli_state& st) {
  const auto& cfg = st.config();
  circle_model m(cfg.circle);
  auto f = m.add(cfg.lift(cfg.f_name));
  auto g = m.add(cfg.lift(cfg.g_name));
  growth_estimate est = relative_growth(m, f, g, cfg.horizon);
  std::printf("gamma(%s,%s): trend = %.12g (+/- ~%.3g), certified upper envelope = %.12g  (K = %lld)\n",
              cfg.f_name.c_str(), cfg.g_name.c_str(), est.trend,
              (1.0 + static_cast<double>(est.q_used)) / static_cast<double>(cfg.horizon),
              est.upper_envelope, cfg.horizon);
  json j{{"f", cfg.f_name},       {"g", cfg.g_name},           {"K", est.horizon},
         {"trend", est.trend},    {"envelope", est.upper_envelope}, {"q_used", est.q_used},
         {"gamma_k", est.gamma}};
  try {
    enclosure q = gamma_exact(cfg.lift(cfg.f_name), cfg.lift(cfg.g_name), cfg.n_iter);
    std::printf("rotation-number quotient   = %.12g +/- %.3g  (n = %lld)\n", q.center, q.halfwidth,
                cfg.n_iter);
    j["rotation_quotient"] = json{{"value", q.center}, {"halfwidth", q.halfwidth}};
  } catch (const error& e) {
    std::fprintf(stderr, "note: no rotation quotient: %s\n", e.what());
  }
  st.write_artifact("gamma_circle.json", j);
  std::string csv = "k,gamma_k,gamma_k_over_k\n";
  for (long long k = 1; k <= est.horizon; ++k) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g\n", k, est.gamma_at(k),
                  static_cast<double>(est.gamma_at(k)) / static_cast<double>(k));
    csv += buf;
  }
  st.write_text("gamma_circle.csv", csv);
  return 0;
}

int cmd_gamma_torus(cli_state& st) {
  const auto& cfg = st.config();
  sphere_grid grid = sphere_grid::make(cfg.hamiltonian(cfg.f_ham_name).dim, cfg.sphere_points,
                                       cfg.lattice_range);
  gamma_torus_result r =
      gamma_torus(cfg.hamiltonian(cfg.f_ham_name), cfg.hamiltonian(cfg.g_ham_name), grid);
  std::printf("gamma(%s,%s) = %.12g  (enclosure width %.3g, grid %zu directions)\n",
              cfg.f_ham_name.c_str(), cfg.g_ham_name.c_str(), r.value, r.enclosure_width,
              grid.dirs.size());
  st.write_artifact("gamma_torus.json",
                    json{{"F", cfg.f_ham_name},
                         {"G", cfg.g_ham_name},
                         {"value", r.value},
                         {"enclosure_width", r.enclosure_width},
                         {"argmax_direction", grid.dirs[r.argmax]}});
  for (const auto& [tag, name] : {std::pair<const char*, const std::string*>{"F", &cfg.f_ham_name},
                                  {"G", &cfg.g_ham_name}}) {
    std::ostringstream os;
    sphere_table_csv(cfg.hamiltonian(*name), grid, os);
    st.write_text(std::string("sphere_") + tag + ".csv", os.str());
  }
  return 0;
}

int cmd_shape(cli_state& st) {
  const auto& cfg = st.config();
  if (cfg.a_class.empty()) raise(errc::config_error, "shape needs run.a");
  shape_values_result s = shape_values(cfg.a_class, cfg.hamiltonian(cfg.f_ham_name));
  std::printf("r_-(a,%s) = %.12g, r_+(a,%s) = %.12g  (exact in the autonomous class)\n",
              cfg.f_ham_name.c_str(), s.r_minus, cfg.f_ham_name.c_str(), s.r_plus);
  st.write_artifact("shape.json", json{{"F", cfg.f_ham_name},
                                       {"a", cfg.a_class},
                                       {"r_minus", s.r_minus},
                                       {"r_plus", s.r_plus}});
  return 0;
}

int cmd_stable_norm(cli_state& st) {
  const auto& cfg = st.config();
  if (cfg.e_class.empty()) raise(errc::config_error, "stable-norm needs run.e");
  const torus_metric& g = cfg.metric(cfg.metric_name);
  loop_options loops = cfg.loops;
  loops.jobs = st.jobs;
  norm_estimate est =
      stable_norm_primal(g, cfg.e_class, cfg.horizon_norm, cfg.metric_resolution, loops);
  std::vector<double> a(cfg.e_class.begin(), cfg.e_class.end());
  if (!cfg.a_class.empty()) a = cfg.a_class;
  dual_result dual = stable_norm_dual(g, a, cfg.metric_resolution, cfg.dual_sweeps);
  est.dual_lower = dual_norm_lower_bound(a, cfg.e_class, dual);
  std::printf("||e|| primal envelope = %.12g  (stencil slack %.3g rel, R = %d, K = %lld)\n",
              est.primal_envelope, est.stencil_slack, est.resolution, est.horizon);
  std::printf("||e|| dual lower bound = %.12g  (|alpha|* achieved %.12g%s)\n", est.dual_lower,
              dual.value, dual.no_descent ? ", no descent over f = 0" : "");
  st.write_artifact("stable_norm.json", est.to_json());
  std::string csv = "k,l_ke_over_k\n";
  for (std::size_t i = 0; i < est.primal_ratios.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i + 1, est.primal_ratios[i]);
    csv += buf;
  }
  st.write_text("stable_norm.csv", csv);
  return 0;
}

int cmd_beta(cli_state& st) {
  const auto& cfg = st.config();
  if (cfg.e_class.empty()) raise(errc::config_error, "beta needs run.e");
  loop_options loops = cfg.loops;
  loops.jobs = st.jobs;
  double b = mather_beta(cfg.metric(cfg.metric_name), cfg.e_class, cfg.horizon_norm,
                         cfg.metric_resolution, loops);
  double slack = lattice_stencil::make(cfg.metric(cfg.metric_name).dim(),
                                       cfg.loops.stencil_range > 0
                                           ? cfg.loops.stencil_range
                                           : lattice_stencil::default_range(
                                                 cfg.metric(cfg.metric_name).dim()))
                     .anisotropy -
                 1.0;
  std::printf("beta(e) = %.12g  (from the primal norm; stencil slack %.3g rel)\n", b, slack);
  st.write_artifact("beta.json", json{{"metric", cfg.metric_name},
                                      {"e", cfg.e_class},
                                      {"beta", b},
                                      {"stencil_slack", slack}});
  return 0;
}

int cmd_verify(cli_state& st) {
  verification_options opt;
  opt.seed = st.seed;
  opt.jobs = st.jobs;
  verification_report rep = run_verification(opt);
  for (const auto& c : rep.criteria) {
    std::printf("[%s] criterion %2d: %-32s (%zu checks)\n", c.pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), c.details.records.size());
    std::fprintf(stderr, "  criterion %d runtime: %.2fs\n", c.id, c.seconds);
    if (!c.pass)
      for (const auto& r : c.details.records)
        if (!r.pass)
          std::fprintf(stderr, "  failed: %s lhs=%.17g rhs=%.17g %s\n", r.name.c_str(), r.lhs,
                       r.rhs, r.note.c_str());
  }
  st.write_artifact("verify_report.json", rep.to_json());
  std::printf("%s (report: %s/verify_report.json, seed %llu)\n",
              rep.all_pass() ? "verification passed" : "verification FAILED", st.out_dir.c_str(),
              static_cast<unsigned long long>(st.seed));
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ordgrowth: growth invariants of partially ordered transformation groups"};
  app.require_subcommand(1);
  app.fallthrough();  // accept the global flags after the subcommand too

  cli_state st;
  app.add_option("--config", st.config_path, "experiment configuration (JSON)");
  app.add_option("--out", st.out_dir, "artifact output directory");
  app.add_option("--seed", st.seed, "seed for the property samplers");
  app.add_option("--jobs", st.jobs, "worker threads (0 = all cores)");

  auto* rot = app.add_subcommand("rot", "rotation number of a configured lift");
  auto* gc = app.add_subcommand("gamma-circle", "relative growth of two circle lifts");
  auto* gt = app.add_subcommand("gamma-torus", "relative growth of two contact Hamiltonians");
  auto* sh = app.add_subcommand("shape", "shape values r_-(a,f), r_+(a,f)");
  auto* sn = app.add_subcommand("stable-norm", "primal and dual stable norm of a class");
  auto* be = app.add_subcommand("beta", "Mather minimal action via the Bangert formula");
  auto* ve = app.add_subcommand("verify", "run the full verification suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rot->parsed()) return cmd_rot(st);
    if (gc->parsed()) return cmd_gamma_circle(st);
    if (gt->parsed()) return cmd_gamma_torus(st);
    if (sh->parsed()) return cmd_shape(st);
    if (sn->parsed()) return cmd_stable_norm(st);
    if (be->parsed()) return cmd_beta(st);
    if (ve->parsed()) return cmd_verify(st);
  } catch (const error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == errc::config_error ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
