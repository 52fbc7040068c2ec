#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "ordgrowth/contact_torus.hpp"

using namespace ordgrowth;
using Catch::Approx;

namespace {

// Strictly positive random catalogue instance: c0*|p| + c1*<p,e> with
// c0 > |c1|*|e|, occasionally a weighted norm.
homogeneous_hamiltonian random_positive_ham(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < 0.4) {
    std::vector<double> w = {0.5 + 1.5 * unit(rng), 0.5 + 1.5 * unit(rng)};
    return ham_weighted(w);
  }
  double c0 = 0.6 + unit(rng);
  std::vector<double> e = {2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0};
  double cap = c0 / (1e-9 + std::hypot(e[0], e[1]));
  double c1 = (2.0 * unit(rng) - 1.0) * 0.8 * cap;
  return ham_affine({{c0, ham_euclidean(2)}, {c1, ham_linear(e)}});
}

}  // namespace

TEST_CASE("gamma_torus reproduces the analytic maxima of the catalogue") {
  sphere_grid g = sphere_grid::circle(4096);

  auto scaled = gamma_torus(ham_euclidean(2), ham_affine({{2.0, ham_euclidean(2)}}), g);
  CHECK(scaled.value == 2.0);
  CHECK(scaled.enclosure_width < 1e-3);

  auto linear = gamma_torus(ham_euclidean(2), ham_linear({1.0, 0.0}), g);
  CHECK(linear.value == 1.0);  // maximizer p = e1 is a grid node
  CHECK(linear.enclosure_width < 1e-3);

  auto affine = gamma_torus(ham_euclidean(2),
                            ham_affine({{0.5, ham_euclidean(2)}, {1.0, ham_linear({1.0, 0.0})}}), g);
  CHECK(affine.value == 1.5);
  CHECK(affine.enclosure_width < 1e-3);
}

TEST_CASE("gamma_torus validates its hypotheses") {
  sphere_grid g = sphere_grid::circle(512);
  try {
    gamma_torus(ham_linear({1.0, 0.0}), ham_euclidean(2), g);
    FAIL("expected F_NOT_POSITIVE");
  } catch (const error& e) {
    CHECK(e.code() == errc::f_not_positive);
  }
  try {
    gamma_torus(ham_euclidean(2), ham_euclidean(3), g);
    FAIL("expected DIMENSION_MISMATCH");
  } catch (const error& e) {
    CHECK(e.code() == errc::dimension_mismatch);
  }
  try {
    gamma_torus(ham_euclidean(2), ham_affine({{-1.0, ham_euclidean(2)}}), g);
    FAIL("expected HYPOTHESIS_FAILED");
  } catch (const error& e) {
    CHECK(e.code() == errc::hypothesis_failed);
  }
}

TEST_CASE("product and triangle inequalities for torus growth", "[property]") {
  sphere_grid g = sphere_grid::circle(1024);
  std::mt19937_64 rng(20260810);
  for (int t = 0; t < 15; ++t) {
    homogeneous_hamiltonian f = random_positive_ham(rng);
    homogeneous_hamiltonian h = random_positive_ham(rng);
    homogeneous_hamiltonian m = random_positive_ham(rng);
    double fg = gamma_torus(f, h, g).value;
    double gf = gamma_torus(h, f, g).value;
    CHECK(fg * gf >= 1.0 - 1e-12);

    double fm = gamma_torus(f, m, g).value;
    double hm = gamma_torus(h, m, g).value;
    CHECK(fm <= fg * hm * (1.0 + 1e-12));
  }
}

TEST_CASE("gamma product is exactly 1 for proportional hamiltonians") {
  sphere_grid g = sphere_grid::circle(1024);
  homogeneous_hamiltonian f = ham_euclidean(2);
  homogeneous_hamiltonian g3 = f.iterate(3);
  CHECK(gamma_torus(f, g3, g).value == 3.0);
  CHECK(gamma_torus(g3, f, g).value * 3.0 == Approx(1.0).margin(1e-15));

  homogeneous_hamiltonian cf = ham_affine({{1.7, ham_euclidean(2)}});
  double p = gamma_torus(f, cf, g).value * gamma_torus(cf, f, g).value;
  CHECK(p == Approx(1.0).margin(1e-12));
}

TEST_CASE("iteration acts trivially on relative growth") {
  sphere_grid g = sphere_grid::circle(2048);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 10; ++t) {
    homogeneous_hamiltonian f = random_positive_ham(rng);
    homogeneous_hamiltonian h = random_positive_ham(rng);
    gamma_torus_result base = gamma_torus(f, h, g);
    for (long long m : {2, 3, 7}) {
      gamma_torus_result it = gamma_torus(f.iterate(m), h.iterate(m), g);
      CHECK(it.value == base.value);  // bit-exact
    }
  }
}

TEST_CASE("shape values reduce to F(a)") {
  CHECK(shape_values({1.0, 0.0}, ham_zero(2)).r_plus == 0.0);
  shape_values_result s = shape_values({3.0, 4.0}, ham_euclidean(2));
  CHECK(s.r_minus == 5.0);
  CHECK(s.r_plus == 5.0);
  CHECK(shape_values({2.0, 0.0}, ham_linear({1.0, 0.0})).r_plus == 2.0);
  CHECK_THROWS_AS(shape_values({0.0, 0.0}, ham_euclidean(2)), error);
}

TEST_CASE("shape value identities on the named catalogue instances") {
  sphere_grid g = sphere_grid::circle(1024);
  homogeneous_hamiltonian f = ham_euclidean(2);
  homogeneous_hamiltonian h = ham_affine({{0.5, ham_euclidean(2)}});

  check_report rep = check_shape_properties(f, h, {1.0, 0.0}, 2.5, 3, g);
  CHECK(rep.all_pass());
  for (const auto& r : rep.records) {
    if (r.name == "iteration_value") CHECK(r.lhs == 3.0);
    if (r.name == "class_scaling") CHECK(r.lhs == 2.5);
  }

  check_report rep2 = check_shape_properties(f, h, {0.0, 1.0}, 1.0, 2, g);
  CHECK(rep2.all_pass());
  shape_values_result inv = shape_values({0.0, 1.0}, f.inverse());
  CHECK(inv.r_plus == -1.0);
}

TEST_CASE("shape value identities hold on random catalogue instances", "[property]") {
  sphere_grid g = sphere_grid::circle(1024);
  std::mt19937_64 rng(99);
  for (int t = 0; t < 20; ++t) {
    homogeneous_hamiltonian f = random_positive_ham(rng);
    homogeneous_hamiltonian h = random_positive_ham(rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> a = {2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0};
    if (a[0] == 0.0 && a[1] == 0.0) a[0] = 0.5;
    double c = 0.25 + 3.0 * unit(rng);
    long long k = 1 + static_cast<long long>(5 * unit(rng));
    check_report rep = check_shape_properties(f, h, a, c, k, g);
    INFO(rep.to_json().dump());
    CHECK(rep.all_pass());
  }
}

TEST_CASE("growth lower bound and its equality at the argmax") {
  sphere_grid g = sphere_grid::circle(4096);
  homogeneous_hamiltonian f = ham_euclidean(2);
  homogeneous_hamiltonian h = ham_linear({1.0, 0.0});

  double at_e1 = growth_lower_bound(f, h, {1.0, 0.0}, g);
  gamma_torus_result gm = gamma_torus(f, h, g);
  CHECK(at_e1 == 1.0);
  CHECK(at_e1 <= gm.value + gm.enclosure_width);
  CHECK(gm.value <= at_e1 + gm.enclosure_width);

  double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  double diag = growth_lower_bound(f, h, {inv_sqrt2, inv_sqrt2}, g);
  CHECK(diag == Approx(inv_sqrt2));
  CHECK(diag <= gm.value + gm.enclosure_width);

  try {
    growth_lower_bound(f, h, {0.0, 1.0}, g);
    FAIL("expected HYPOTHESIS_FAILED");
  } catch (const error& e) {
    CHECK(e.code() == errc::hypothesis_failed);
  }
}

TEST_CASE("growth lower bound is dominated by gamma for random directions", "[property]") {
  sphere_grid g = sphere_grid::circle(2048);
  std::mt19937_64 rng(5);
  homogeneous_hamiltonian f = random_positive_ham(rng);
  homogeneous_hamiltonian h = random_positive_ham(rng);
  gamma_torus_result gm = gamma_torus(f, h, g);
  std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
  for (int t = 0; t < 100; ++t) {
    double th = ang(rng);
    std::vector<double> a = {std::cos(th), std::sin(th)};
    double lb;
    try {
      lb = growth_lower_bound(f, h, a, g);
    } catch (const error& e) {
      CHECK(e.code() == errc::hypothesis_failed);
      continue;
    }
    CHECK(lb <= gm.value + gm.enclosure_width + 1e-12);
  }
  // equality at the grid argmax direction
  double at_max = growth_lower_bound(f, h, g.dirs[gm.argmax], g);
  CHECK(at_max == Approx(gm.value).margin(1e-14));
}

TEST_CASE("zk embedding realizes the kappa metric") {
  sphere_grid g = sphere_grid::circle(1024);
  homogeneous_hamiltonian h_ref = ham_euclidean(2);

  std::vector<double> zero = zk_embed(h_ref, h_ref, g);
  for (double u : zero) CHECK(u == 0.0);

  homogeneous_hamiltonian f2 = h_ref.iterate(2);
  std::vector<double> c2 = zk_embed(f2, h_ref, g);
  for (double u : c2) CHECK(u == Approx(std::log(2.0)).margin(1e-14));

  // iteration acts as translation by log m
  homogeneous_hamiltonian f = ham_affine({{0.5, ham_euclidean(2)}, {0.4, ham_linear({1.0, 0.0})}});
  std::vector<double> base = zk_embed(f, h_ref, g);
  std::vector<double> it = zk_embed(f.iterate(5), h_ref, g);
  for (std::size_t i = 0; i < base.size(); ++i)
    CHECK(it[i] - base[i] == Approx(std::log(5.0)).margin(1e-12));

  // metric pullback: kappa = sup |zk(F) - zk(G)|
  kappa_torus_result kr = kappa_torus(f, h_ref, g);
  double sup = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) sup = std::max(sup, std::abs(base[i]));
  CHECK(kr.via_embedding == Approx(sup).margin(1e-15));
  CHECK(kr.via_gamma == Approx(kr.via_embedding).margin(1e-9));
}

TEST_CASE("kappa collapses conjugacy classes and positive scalings") {
  sphere_grid g = sphere_grid::circle(512);
  homogeneous_hamiltonian f = ham_weighted({1.3, 0.6});
  kappa_torus_result self = kappa_torus(f, f.shift_conjugate({0.1, 0.7}), g);
  CHECK(self.via_gamma == 0.0);
  CHECK(self.via_embedding == 0.0);
}

TEST_CASE("lattice sphere grid covers directions in dimension 3") {
  sphere_grid g = sphere_grid::lattice(3, 8);
  CHECK(g.cover_radius == Approx(std::sqrt(3.0) / 8.0));
  for (const auto& d : g.dirs) {
    double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    CHECK(n == Approx(1.0).margin(1e-12));
  }
  gamma_torus_result r = gamma_torus(ham_euclidean(3), ham_linear({1.0, 0.0, 0.0}), g);
  CHECK(r.value == 1.0);  // (1,0,0) is a lattice direction
  CHECK(r.enclosure_width < 0.5);
}

TEST_CASE("sphere tables serialize to CSV and JSON") {
  sphere_grid g = sphere_grid::circle(16);
  homogeneous_hamiltonian f = ham_euclidean(2);
  std::ostringstream os;
  sphere_table_csv(f, g, os);
  std::string csv = os.str();
  CHECK(csv.rfind("p1,p2,value\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);

  json j = sphere_table_json(f, g);
  CHECK(j["values"].size() == 16);
  CHECK(j["descriptor"]["type"] == "euclidean_norm");
}

TEST_CASE("zk embedding requires strictly positive hamiltonians") {
  sphere_grid g = sphere_grid::circle(256);
  try {
    zk_embed(ham_linear({1.0, 0.0}), ham_euclidean(2), g);
    FAIL("expected F_NOT_POSITIVE");
  } catch (const error& e) {
    CHECK(e.code() == errc::f_not_positive);
  }
}
