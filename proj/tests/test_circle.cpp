#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ordgrowth/circle.hpp"

using namespace ordgrowth;
using Catch::Approx;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Random well-formed lift word: up to three primitives, occasional inverse
// markers, harmonics kept inside the monotonicity budget.
circle_lift random_lift(std::mt19937_64& rng, bool allow_inverse = true) {
  std::uniform_real_distribution<double> amp(-0.4, 0.9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> entries(1, 3);
  std::vector<word_entry> w;
  int n = entries(rng);
  for (int i = 0; i < n; ++i) {
    word_entry e;
    e.map.a = amp(rng);
    int nh = std::uniform_int_distribution<int>(0, 2)(rng);
    double budget = 0.8;  // sum 2*pi*j*|b| stays below this
    for (int k = 0; k < nh; ++k) {
      int j = std::uniform_int_distribution<int>(1, 3)(rng);
      double cap = budget / (kTwoPi * j * (nh - k));
      double b = (2.0 * unit(rng) - 1.0) * cap;
      budget -= kTwoPi * j * std::abs(b);
      e.map.harmonics.push_back({j, b, kTwoPi * unit(rng)});
    }
    e.inverted = allow_inverse && unit(rng) < 0.3;
    w.push_back(std::move(e));
  }
  return circle_lift(std::move(w));
}

}  // namespace

TEST_CASE("evaluate applies the word left to right") {
  CHECK(circle_lift::translation(0.25).evaluate(0.0) == Approx(0.25));
  circle_lift f = circle_lift::translation(0.5) * circle_lift::translation(0.5);
  CHECK(f.evaluate(0.1) == Approx(1.1));
}

TEST_CASE("inverse primitives are solved by bisection to tolerance") {
  circle_lift finv = circle_lift::arnold(0.3, 0.05).inverse();
  double y = finv.evaluate(0.35);
  double residual = y + 0.3 + 0.05 * std::sin(kTwoPi * y) - 0.35;
  CHECK(std::abs(residual) < 1e-10);

  // round trip through the pair
  circle_lift f = circle_lift::arnold(0.3, 0.05);
  CHECK(f.evaluate(finv.evaluate(0.8)) == Approx(0.8).margin(1e-9));
}

TEST_CASE("constructor rejects non-monotone primitives") {
  CHECK_THROWS_AS(circle_lift::arnold(0.3, 0.2), error);  // 2*pi*0.2 > 1
}

TEST_CASE("lifts commute with the deck translation and are monotone", "[property]") {
  std::mt19937_64 rng(20260810);
  for (int t = 0; t < 25; ++t) {
    circle_lift f = random_lift(rng);
    for (int i = 0; i < 8; ++i) {
      double x = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
      CHECK(f.evaluate(x + 1.0) == Approx(f.evaluate(x) + 1.0).margin(1e-9));
    }
    double prev = f.evaluate(0.0);
    for (int i = 1; i <= 64; ++i) {
      double v = f.evaluate(i / 64.0);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("lift words round-trip through JSON", "[property]") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 10; ++t) {
    circle_lift f = random_lift(rng);
    circle_lift g = circle_lift::from_json(f.to_json());
    CHECK(f == g);
    for (int i = 0; i < 5; ++i) {
      double x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      CHECK(f.evaluate(x) == Approx(g.evaluate(x)).margin(1e-12));
    }
  }
}

TEST_CASE("dominates: translation pairs are decided exactly") {
  circle_model m;
  auto f = m.add(circle_lift::translation(0.5));
  auto g = m.add(circle_lift::translation(0.3));

  order_verdict yes = m.dominates(f, g);
  CHECK(yes.result == order_result::yes);
  CHECK(yes.margin == Approx(0.2));

  order_verdict no = m.dominates(g, f);
  REQUIRE(no.result == order_result::no);
  CHECK(no.witness_x.has_value());

  // boundary f = g as distinct words: equality is in the cone
  auto g2 = m.add(circle_lift::translation(0.3) * circle_lift::translation(0.0));
  CHECK(m.dominates(g, g2).result == order_result::yes);
}

TEST_CASE("dominates: sine pair has a witness where sin is negative") {
  circle_model m;
  auto f = m.add(circle_lift::arnold(0.4, 0.05));
  auto g = m.add(circle_lift::arnold(0.4, -0.05));
  order_verdict v = m.dominates(f, g);  // f - g = 0.1 sin(2 pi x)
  REQUIRE(v.result == order_result::no);
  REQUIRE(v.witness_x.has_value());
  CHECK(*v.witness_x > 0.5);
  CHECK(*v.witness_x < 1.0);
  CHECK(std::abs(*v.witness_x - 0.75) < 0.05);  // minimum of the difference
}

TEST_CASE("dominates: certified YES with margin") {
  circle_model m;
  auto f = m.add(circle_lift::arnold(0.4, 0.05));
  auto g = m.add(circle_lift::translation(0.3));
  order_verdict v = m.dominates(f, g);
  REQUIRE(v.result == order_result::yes);
  CHECK(v.margin > 0.0);
  CHECK(v.margin < 0.06);  // true min of d is 0.05
}

TEST_CASE("dominates: reflexive for every word") {
  circle_model m;
  std::mt19937_64 rng(99);
  for (int t = 0; t < 10; ++t) {
    auto f = m.add(random_lift(rng));
    CHECK(m.dominates(f, f).result == order_result::yes);
  }
}

TEST_CASE("dominates: near-tangent pairs are reported inconclusive, not guessed") {
  circle_model m;
  auto f = m.add(circle_lift::arnold(0.3 + 1e-13, 0.05));
  auto g = m.add(circle_lift::arnold(0.3, 0.05));
  order_verdict v = m.dominates(f, g);
  CHECK(v.result == order_result::inconclusive);
  CHECK(v.grid_used == m.options().refined_grid_points);
}

TEST_CASE("rotation number of translations is exact") {
  CHECK(rotation_number(circle_lift::translation(0.7), 5).rot.center == Approx(0.7));
  CHECK(rotation_number(translation_e(), 3).rot.center == Approx(1.0));
  CHECK(rotation_number(flow(0.37), 1000).rot.center == Approx(0.37));
}

TEST_CASE("rotation number enclosure is consistent across horizons") {
  circle_lift f = circle_lift::arnold(0.5, 0.1);
  rotation_estimate coarse = rotation_number(f, 100000);
  rotation_estimate fine = rotation_number(f, 1000000);
  CHECK(coarse.rot.halfwidth == Approx(1e-5));
  // the two enclosures must overlap
  CHECK(std::abs(coarse.rot.center - fine.rot.center) <=
        coarse.rot.halfwidth + fine.rot.halfwidth);
}

TEST_CASE("rotation number is monotone under domination") {
  circle_model m;
  auto f = m.add(circle_lift::arnold(0.5, 0.05));
  auto g = m.add(circle_lift::arnold(0.4, 0.05));
  REQUIRE(m.dominates(f, g).result == order_result::yes);
  rotation_estimate rf = rotation_number(*f.lift, 20000);
  rotation_estimate rg = rotation_number(*g.lift, 20000);
  CHECK(rf.rot.center >= rg.rot.center - rf.rot.halfwidth - rg.rot.halfwidth);
}

TEST_CASE("gamma_exact: interval quotient of rotation numbers") {
  CHECK(gamma_exact(circle_lift::translation(0.5), circle_lift::translation(2.0), 1000).center ==
        Approx(4.0).margin(1e-2));
  circle_lift f = circle_lift::arnold(0.45, 0.05, 1.0);
  enclosure one = gamma_exact(f, f, 100000);
  CHECK(one.contains(1.0));
  CHECK(one.center == Approx(1.0).margin(1e-4));
}

TEST_CASE("gamma_exact rejects rotation numbers near zero") {
  CHECK_THROWS_AS(gamma_exact(circle_lift::translation(0.0), circle_lift::translation(0.5), 100),
                  error);
  try {
    gamma_exact(circle_lift::arnold(0.0, 0.01), circle_lift::translation(0.5), 100);
    FAIL("expected ROT_F_NEAR_ZERO");
  } catch (const error& e) {
    CHECK(e.code() == errc::rot_f_near_zero);
  }
}

TEST_CASE("flow: rational power identity on the evaluation grid") {
  circle_lift lhs = flow(0.25).power(4);
  circle_lift rhs = translation_e();
  for (int i = 0; i < 128; ++i) {
    double x = i / 128.0;
    CHECK(std::abs(lhs.evaluate(x) - rhs.evaluate(x)) < 1e-10);
  }
}

TEST_CASE("derivative bounds enclose sampled difference quotients") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 10; ++t) {
    circle_lift f = random_lift(rng);
    auto [lo, hi] = f.derivative_bounds();
    CHECK(lo > 0.0);
    for (int i = 0; i < 32; ++i) {
      double x = i / 32.0;
      double d = (f.evaluate(x + 1e-6) - f.evaluate(x)) / 1e-6;
      CHECK(d >= lo - 1e-3);
      CHECK(d <= hi + 1e-3);
    }
  }
}

TEST_CASE("inverse solve reports a stall when the budget is too small") {
  circle_lift finv = circle_lift::arnold(0.3, 0.05).inverse();
  eval_params tight{1e-14, 3};
  try {
    finv.evaluate(0.35, tight);
    FAIL("expected BISECTION_STALL");
  } catch (const error& e) {
    CHECK(e.code() == errc::bisection_stall);
  }
}

TEST_CASE("rotation number of powers: log Rot(f^n) = log Rot(f) + log n") {
  circle_lift f = circle_lift::arnold(0.45, 0.05, 1.0);
  rotation_estimate r1 = rotation_number(f, 100000);
  rotation_estimate r3 = rotation_number(f.power(3), 100000);
  double widths = r1.rot.halfwidth * 3.0 / r1.rot.center + r3.rot.halfwidth / r3.rot.center;
  CHECK(std::abs(std::log(r3.rot.center) - std::log(r1.rot.center) - std::log(3.0)) <=
        widths + 1e-9);
}

TEST_CASE("order is transitive on sampled triples") {
  circle_model m;
  auto f = m.add(circle_lift::arnold(0.5, 0.04));
  auto g = m.add(circle_lift::arnold(0.4, 0.05, 2.0));
  auto h = m.add(circle_lift::arnold(0.3, 0.03, 1.0));
  REQUIRE(m.dominates(f, g).result == order_result::yes);
  REQUIRE(m.dominates(g, h).result == order_result::yes);
  CHECK(m.dominates(f, h).result == order_result::yes);
}
