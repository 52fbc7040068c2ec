#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "ordgrowth/stable_norm.hpp"

using namespace ordgrowth;
using Catch::Approx;

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

TEST_CASE("stencils enumerate primitive offsets with a small anisotropy") {
  lattice_stencil s2 = lattice_stencil::make(2, 2);
  CHECK(s2.offsets.size() == 16);
  CHECK(s2.anisotropy > 1.02);  // the 16-neighbor stencil misses (3,4)-type rays
  CHECK(s2.anisotropy < 1.03);

  lattice_stencil s4 = lattice_stencil::make(2, 4);
  CHECK(s4.offsets.size() == 48);
  CHECK(s4.anisotropy < 1.008);

  lattice_stencil s3 = lattice_stencil::make(3, 1);
  CHECK(s3.offsets.size() == 26);
  CHECK(s3.anisotropy > 1.0);
  CHECK(s3.anisotropy < 1.13);
}

TEST_CASE("loop lengths on the flat torus match straight segments") {
  torus_metric id = torus_metric::identity(2);
  CHECK(loop_length_min(id, {1, 0}, 32).length == Approx(1.0).margin(1e-12));
  CHECK(loop_length_min(id, {1, 1}, 32).length == Approx(kSqrt2).margin(1e-12));
  CHECK(loop_length_min(id, {3, 4}, 32).length == Approx(5.0).margin(1e-10));

  torus_metric diag = torus_metric::constant(2, {4.0, 0.0, 0.0, 1.0});
  CHECK(loop_length_min(diag, {1, 0}, 32).length == Approx(2.0).margin(1e-12));
  CHECK(loop_length_min(diag, {1, 1}, 32).length == Approx(std::sqrt(5.0)).margin(1e-10));
}

TEST_CASE("loop length rejects the zero class") {
  torus_metric id = torus_metric::identity(2);
  CHECK_THROWS_AS(loop_length_min(id, {0, 0}, 16), error);
}

TEST_CASE("conformal metric: the cheap line is found") {
  torus_metric g = torus_metric::conformal_cos(2, 0.3);  // lambda = 1 + 0.3 cos(2 pi q1)
  loop_length_result r = loop_length_min(g, {0, 1}, 64);
  CHECK(r.length == Approx(0.7).margin(1e-9));  // straight line at q1 = 1/2
  CHECK(r.starts_scanned > 1);
}

TEST_CASE("primal stable norm: ratios and envelope") {
  torus_metric id = torus_metric::identity(2);
  norm_estimate flat = stable_norm_primal(id, {2, 0}, 4, 32);
  for (double r : flat.primal_ratios) CHECK(r == Approx(2.0).margin(1e-10));
  CHECK(flat.primal_envelope == Approx(2.0).margin(1e-10));

  torus_metric g = torus_metric::conformal_cos(2, 0.3);
  norm_estimate conf = stable_norm_primal(g, {0, 1}, 3, 64);
  for (double r : conf.primal_ratios) CHECK(r == Approx(0.7).margin(1e-8));
  CHECK(conf.primal_envelope == Approx(0.7).margin(1e-8));

  json j = conf.to_json();
  CHECK(j["ratios"].size() == 3);
  CHECK(j["R"] == 64);
}

TEST_CASE("primal subadditivity and homogeneity", "[property]") {
  torus_metric g = torus_metric::conformal_cos(2, 0.3);
  loop_options opt;
  std::vector<double> l(5, 0.0);
  for (long long k = 1; k <= 4; ++k)
    l[static_cast<std::size_t>(k)] = loop_length_min(g, {0, k}, 32, opt).length;
  for (long long m = 1; m <= 3; ++m)
    for (long long n = 1; m + n <= 4; ++n)
      CHECK(l[static_cast<std::size_t>(m + n)] <=
            l[static_cast<std::size_t>(m)] + l[static_cast<std::size_t>(n)] + 1e-9);

  norm_estimate e1 = stable_norm_primal(g, {0, 1}, 2, 32);
  norm_estimate e3 = stable_norm_primal(g, {0, 3}, 2, 32);
  CHECK(e3.primal_envelope == Approx(3.0 * e1.primal_envelope).epsilon(1e-6));
}

TEST_CASE("mather beta follows the Bangert formula") {
  torus_metric id = torus_metric::identity(2);
  CHECK(mather_beta(id, {1, 0}, 2, 32) == Approx(0.5).margin(1e-10));
  CHECK(mather_beta(id, {3, 4}, 2, 32) == Approx(12.5).margin(1e-8));

  torus_metric g = torus_metric::conformal_cos(2, 0.3);
  CHECK(mather_beta(g, {0, 1}, 2, 64) == Approx(0.245).margin(1e-6));

  // beta(m e) = m^2 beta(e)
  double b1 = mather_beta(id, {1, 1}, 2, 32);
  double b2 = mather_beta(id, {2, 2}, 2, 32);
  CHECK(b2 == Approx(4.0 * b1).epsilon(1e-9));
}

TEST_CASE("dual norm: flat metrics need no descent") {
  torus_metric id = torus_metric::identity(2);
  dual_result d10 = stable_norm_dual(id, {1.0, 0.0}, 32, 12);
  CHECK(d10.value == Approx(1.0).margin(1e-12));
  CHECK(d10.no_descent);

  dual_result d11 = stable_norm_dual(id, {1.0, 1.0}, 32, 12);
  CHECK(d11.value == Approx(kSqrt2).margin(1e-12));
  CHECK(dual_norm_lower_bound({1.0, 1.0}, {1, 1}, d11) == Approx(kSqrt2).margin(1e-12));
}

TEST_CASE("dual norm: conformal class aligned with the cheap line") {
  torus_metric g = torus_metric::conformal_cos(2, 0.3);
  dual_result d = stable_norm_dual(g, {0.0, 1.0}, 64, 8);
  CHECK(d.value == Approx(1.0 / 0.7).margin(1e-9));  // ||a||* = 1/0.7, f = 0 optimal
  CHECK(dual_norm_lower_bound({0.0, 1.0}, {0, 1}, d) == Approx(0.7).margin(1e-9));
}

TEST_CASE("dual norm: descent genuinely improves transverse classes") {
  torus_metric g = torus_metric::conformal_cos(2, 0.3);
  dual_result d = stable_norm_dual(g, {1.0, 0.0}, 32, 160);
  CHECK(d.initial == Approx(1.0 / 0.7).margin(1e-9));
  CHECK_FALSE(d.no_descent);
  CHECK(d.value < 1.2);     // continuum optimum is 1
  CHECK(d.value > 1.0 / 1.3);  // row-sum bound: some alpha_1 >= 1, lambda <= 1.3
}

TEST_CASE("metric tables round-trip through CSV") {
  torus_metric g = torus_metric::conformal_cos(2, 0.3);
  std::ostringstream os;
  g.to_csv(os, 16);
  std::istringstream is(os.str());
  torus_metric t = torus_metric::from_csv(is, 2, 16);
  double q[2] = {0.3, 0.6};
  double mg[4], mt[4];
  g.eval(q, mg);
  t.eval(q, mt);
  for (int i = 0; i < 4; ++i) CHECK(mt[i] == Approx(mg[i]).margin(5e-2));  // bilinear table
  double qn[2] = {0.25, 0.5};  // exact at nodes
  g.eval(qn, mg);
  t.eval(qn, mt);
  for (int i = 0; i < 4; ++i) CHECK(mt[i] == Approx(mg[i]).margin(1e-12));
}

TEST_CASE("metric validation rejects bad inputs") {
  CHECK_THROWS_AS(torus_metric::constant(2, {1.0, 0.5, 0.4, 1.0}), error);   // not symmetric
  CHECK_THROWS_AS(torus_metric::constant(2, {1.0, 2.0, 2.0, 1.0}), error);   // not SPD
  CHECK_THROWS_AS(torus_metric::conformal_cos(2, 1.0), error);               // |A| >= 1
  CHECK_THROWS_AS(torus_metric::from_table(2, 2, {1.0}), error);             // wrong size
}

TEST_CASE("growth vs stable norm, flat branch: gamma equals the norm") {
  growth_norm_options opt;
  opt.sphere_points = 2048;
  opt.dual_sweeps = 8;

  torus_metric id = torus_metric::identity(2);
  growth_norm_result r = verify_growth_vs_stable_norm(id, {1, 0}, 0.05, 2, 32, opt);
  CHECK(r.flat);
  CHECK(r.report.all_pass());
  CHECK(r.gamma == Approx(1.0).margin(1e-6));
  CHECK(r.primal == Approx(1.0).margin(1e-9));
  CHECK(r.dual_bound == Approx(1.0).margin(1e-9));

  torus_metric diag = torus_metric::constant(2, {4.0, 0.0, 0.0, 1.0});
  growth_norm_result r2 = verify_growth_vs_stable_norm(diag, {1, 0}, 0.05, 2, 32, opt);
  CHECK(r2.report.all_pass());
  CHECK(r2.gamma == Approx(2.0).margin(1e-4));
  CHECK(r2.primal == Approx(2.0).margin(1e-9));
}

TEST_CASE("growth vs stable norm, non-flat branch: one-sided bound only") {
  growth_norm_options opt;
  opt.dual_sweeps = 8;
  torus_metric g = torus_metric::conformal_cos(2, 0.3);
  growth_norm_result r = verify_growth_vs_stable_norm(g, {0, 1}, 0.05, 2, 64, opt);
  CHECK_FALSE(r.flat);
  CHECK(r.report.all_pass());
  CHECK(r.primal == Approx(0.7).margin(1e-8));
  CHECK(r.gamma == Approx(0.7 / 1.05).margin(1e-6));
  CHECK(r.gamma <= r.primal + 1e-9);
  CHECK(r.gamma >= 0.9 * r.primal);
}

TEST_CASE("lifted graph handles a 3D metric at small resolution") {
  torus_metric id = torus_metric::identity(3);
  CHECK(loop_length_min(id, {1, 0, 0}, 8).length == Approx(1.0).margin(1e-12));
  double d111 = loop_length_min(id, {1, 1, 1}, 8).length;
  CHECK(d111 == Approx(std::sqrt(3.0)).margin(1e-10));
  torus_metric g3 = torus_metric::conformal_cos(3, 0.2);
  double v = loop_length_min(g3, {0, 0, 1}, 8).length;
  CHECK(v == Approx(0.8).margin(5e-2));
}
