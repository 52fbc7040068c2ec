#pragma once

// Lifts of orientation-preserving circle diffeomorphisms: monotone maps
// f: R -> R with f(x+1) = f(x) + 1, stored as composition words of primitive
// analytic maps x -> x + a + sum_j b_j sin(2*pi*j*x + phi_j). The cone
// {f : f(x) >= x} orders the group; dominates() decides the order with a
// certified grid scan.

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <utility>
#include <vector>

#include "common.hpp"
#include "errors.hpp"
#include "order_core.hpp"
#include "report.hpp"

namespace ordgrowth {

struct harmonic {
  int j = 1;
  double b = 0.0;
  double phi = 0.0;

  bool operator==(const harmonic&) const = default;
};

// x -> x + a + sum_j b_j sin(2*pi*j*x + phi_j). Strict monotonicity requires
// bend() = sum_j 2*pi*j*|b_j| < 1.
struct primitive_map {
  double a = 0.0;
  std::vector<harmonic> harmonics;

  double eval(double x) const {
    double v = x + a;
    for (const auto& h : harmonics) v += h.b * std::sin(detail::two_pi * h.j * x + h.phi);
    return v;
  }

  // sup |f'(x) - 1|
  double bend() const {
    double s = 0.0;
    for (const auto& h : harmonics) s += detail::two_pi * h.j * std::abs(h.b);
    return s;
  }

  // sup |f(x) - x - a|
  double osc() const {
    double s = 0.0;
    for (const auto& h : harmonics) s += std::abs(h.b);
    return s;
  }

  bool is_translation() const { return harmonics.empty(); }

  bool operator==(const primitive_map&) const = default;
};

struct word_entry {
  primitive_map map;
  bool inverted = false;

  bool operator==(const word_entry&) const = default;
};

struct eval_params {
  double tolerance = 1e-12;
  int bisection_budget = 240;
};

class circle_lift {
 public:
  circle_lift() = default;

  explicit circle_lift(std::vector<word_entry> word) : word_(std::move(word)) { validate(); }

  static circle_lift translation(double a) {
    return circle_lift({word_entry{primitive_map{a, {}}, false}});
  }

  // Arnold-family lift x + a + b*sin(2*pi*x + phi).
  static circle_lift arnold(double a, double b, double phi = 0.0) {
    return circle_lift({word_entry{primitive_map{a, {harmonic{1, b, phi}}}, false}});
  }

  const std::vector<word_entry>& word() const { return word_; }
  std::size_t size() const { return word_.size(); }

  bool operator==(const circle_lift& o) const { return word_ == o.word_; }

  // Group law (f*g)(x) = f(g(x)); the word lists maps in application order.
  friend circle_lift operator*(const circle_lift& f, const circle_lift& g) {
    std::vector<word_entry> w = g.word_;
    w.insert(w.end(), f.word_.begin(), f.word_.end());
    return circle_lift(std::move(w));
  }

  circle_lift inverse() const {
    std::vector<word_entry> w;
    w.reserve(word_.size());
    for (auto it = word_.rbegin(); it != word_.rend(); ++it)
      w.push_back({it->map, !it->inverted});
    return circle_lift(std::move(w));
  }

  circle_lift power(long long n) const {
    if (n == 0) return circle_lift();
    const circle_lift base = n > 0 ? *this : inverse();
    const long long reps = n > 0 ? n : -n;
    std::vector<word_entry> w;
    w.reserve(base.word_.size() * static_cast<std::size_t>(reps));
    for (long long i = 0; i < reps; ++i)
      w.insert(w.end(), base.word_.begin(), base.word_.end());
    return circle_lift(std::move(w));
  }

  bool is_pure_translation() const {
    for (const auto& e : word_)
      if (!e.map.is_translation()) return false;
    return true;
  }

  // Exact (compensated) translation amount of a pure-translation word.
  detail::dd translation_amount() const {
    detail::dd s{};
    for (const auto& e : word_) s = s + (e.inverted ? -e.map.a : e.map.a);
    return s;
  }

  // Enclosure of f' over R from per-primitive chain-rule bounds.
  std::pair<double, double> derivative_bounds() const {
    double lo = 1.0, hi = 1.0;
    for (const auto& e : word_) {
      double bend = e.map.bend();
      if (e.inverted) {
        lo /= 1.0 + bend;
        hi /= 1.0 - bend;
      } else {
        lo *= 1.0 - bend;
        hi *= 1.0 + bend;
      }
    }
    return {lo, hi};
  }

  double evaluate(double x, const eval_params& ep = {}) const {
    double v = x;
    for (const auto& e : word_) v = e.inverted ? solve_inverse(e.map, v, ep) : e.map.eval(v);
    return v;
  }

  json to_json() const {
    json w = json::array();
    for (const auto& e : word_) {
      json entry;
      entry["a"] = e.map.a;
      json hs = json::array();
      for (const auto& h : e.map.harmonics) hs.push_back({{"j", h.j}, {"b", h.b}, {"phi", h.phi}});
      entry["harmonics"] = std::move(hs);
      entry["inv"] = e.inverted;
      w.push_back(std::move(entry));
    }
    return json{{"word", std::move(w)}};
  }

  static circle_lift from_json(const json& j) {
    if (!j.contains("word") || !j["word"].is_array())
      raise(errc::config_error, "circle lift JSON must contain a \"word\" array");
    std::vector<word_entry> w;
    for (const auto& entry : j["word"]) {
      word_entry e;
      e.map.a = entry.at("a").get<double>();
      if (entry.contains("harmonics"))
        for (const auto& h : entry["harmonics"])
          e.map.harmonics.push_back(
              {h.at("j").get<int>(), h.at("b").get<double>(),
               h.contains("phi") ? h["phi"].get<double>() : 0.0});
      e.inverted = entry.value("inv", false);
      w.push_back(std::move(e));
    }
    return circle_lift(std::move(w));
  }

 private:
  void validate() const {
    for (const auto& e : word_) {
      for (const auto& h : e.map.harmonics)
        if (h.j < 1) raise(errc::config_error, "harmonic index j must be >= 1");
      double bend = e.map.bend();
      if (bend >= 1.0) {
        std::ostringstream os;
        os << "primitive violates sum_j 2*pi*j*|b_j| < 1 (got " << bend << ")";
        raise(errc::config_error, os.str());
      }
    }
  }

  static double solve_inverse(const primitive_map& m, double target, const eval_params& ep) {
    double osc = m.osc();
    double guess = target - m.a;
    double lb = guess - osc, ub = guess + osc;
    // Widen against rounding of the analytic bracket.
    int guard = 0;
    while (m.eval(lb) > target && guard++ < 8) lb -= std::max(1e-12, osc * 1e-12);
    guard = 0;
    while (m.eval(ub) < target && guard++ < 8) ub += std::max(1e-12, osc * 1e-12);
    if (m.eval(lb) > target || m.eval(ub) < target)
      raise(errc::bisection_stall, "could not bracket inverse solve");
    int budget = ep.bisection_budget;
    while (ub - lb > ep.tolerance) {
      if (budget-- == 0) {
        std::ostringstream os;
        os << "inverse solve not converged: interval width " << (ub - lb) << " > tolerance "
           << ep.tolerance;
        raise(errc::bisection_stall, os.str());
      }
      double mid = 0.5 * (lb + ub);
      if (m.eval(mid) < target)
        lb = mid;
      else
        ub = mid;
    }
    return 0.5 * (lb + ub);
  }

  std::vector<word_entry> word_;
};

inline circle_lift translation_e() { return circle_lift::translation(1.0); }

// Lift of the Reeb rotation flow at time t (the loop x -> x + t).
inline circle_lift flow(double t) { return circle_lift::translation(t); }

struct rotation_estimate {
  enclosure rot;       // value (f^n(0))/n, half-width 1/n
  long long n = 0;
};

inline rotation_estimate rotation_number(const circle_lift& f, long long n,
                                         const eval_params& ep = {}) {
  if (n < 1) raise(errc::config_error, "rotation_number requires n >= 1");
  if (f.is_pure_translation())
    return {enclosure{f.translation_amount().value(), 1.0 / static_cast<double>(n)}, n};
  double v = 0.0;
  for (long long i = 0; i < n; ++i) v = f.evaluate(v, ep);
  return {enclosure{v / static_cast<double>(n), 1.0 / static_cast<double>(n)}, n};
}

// gamma(f,g) = Rot(g)/Rot(f) as an interval quotient of rotation enclosures.
inline enclosure gamma_exact(const circle_lift& f, const circle_lift& g, long long n,
                             const eval_params& ep = {}) {
  rotation_estimate rf = rotation_number(f, n, ep);
  rotation_estimate rg = rotation_number(g, n, ep);
  if (rf.rot.lower() <= 0.0 && rf.rot.upper() >= 0.0) {
    std::ostringstream os;
    os << "Rot(f) enclosure [" << rf.rot.lower() << ", " << rf.rot.upper() << "] contains 0";
    raise(errc::rot_f_near_zero, os.str());
  }
  double c[4] = {rg.rot.lower() / rf.rot.lower(), rg.rot.lower() / rf.rot.upper(),
                 rg.rot.upper() / rf.rot.lower(), rg.rot.upper() / rf.rot.upper()};
  double lo = std::min(std::min(c[0], c[1]), std::min(c[2], c[3]));
  double hi = std::max(std::max(c[0], c[1]), std::max(c[2], c[3]));
  return {0.5 * (lo + hi), 0.5 * (hi - lo)};
}

struct circle_options {
  int grid_points = 2048;
  int refined_grid_points = 16384;
  double eval_tolerance = 1e-10;
  int bisection_budget = 240;
  long long q_max = 64;
};

// Concrete group model over circle lifts, with interned elements, a power
// cache and cached per-element grid tables for the order oracle.
class circle_model {
 public:
  struct element {
    std::shared_ptr<const circle_lift> lift;
    std::uint64_t id = 0;
  };

  explicit circle_model(circle_options opts = {}) : opts_(opts) {}

  const circle_options& options() const { return opts_; }

  element add(circle_lift f) { return intern(std::make_shared<circle_lift>(std::move(f)), 0, 0); }

  element identity() {
    std::lock_guard lk(mu_);
    if (!identity_) {
      element e{std::make_shared<circle_lift>(), next_id_++};
      provenance_[e.id] = {0, 0};
      elements_[e.id] = e;
      identity_ = e;
    }
    return *identity_;
  }

  element multiply(const element& f, const element& g) { return add(*f.lift * *g.lift); }

  element invert(const element& f) { return add(f.lift->inverse()); }

  element power(const element& f, long long n) {
    if (n == 1) return f;
    {
      std::lock_guard lk(mu_);
      auto it = power_cache_.find({f.id, n});
      if (it != power_cache_.end()) return it->second;
    }
    element p = intern(std::make_shared<circle_lift>(f.lift->power(n)), f.id, n);
    std::lock_guard lk(mu_);
    power_cache_.emplace(std::make_pair(f.id, n), p);
    return p;
  }

  double evaluate(const element& f, double x) const {
    return f.lift->evaluate(x, eval_params{opts_.eval_tolerance, opts_.bisection_budget});
  }

  order_verdict dominates(const element& f, const element& g) {
    // Equal words compare reflexively without any grid work.
    if (f.id == g.id || *f.lift == *g.lift) {
      order_verdict v;
      v.result = order_result::yes;
      v.margin = 0.0;
      v.grid_used = 0;
      return v;
    }
    // Pure translations are decided exactly from compensated sums; this is
    // what keeps boundary cases like f^(4k) >= g^k for translations by 1/2
    // and 2 conclusive.
    if (f.lift->is_pure_translation() && g.lift->is_pure_translation()) {
      detail::dd delta = f.lift->translation_amount() - g.lift->translation_amount();
      order_verdict v;
      v.result = delta.sign() >= 0 ? order_result::yes : order_result::no;
      v.margin = delta.value();
      if (v.result == order_result::no) v.witness_x = 0.0;
      v.grid_used = 0;
      return v;
    }
    order_verdict v = grid_scan(f, g, opts_.grid_points);
    if (v.result == order_result::inconclusive)
      v = grid_scan(f, g, opts_.refined_grid_points);
    return v;
  }

  // Smallest q in [0, q_max] with f^q >= g^{-1}; nullopt if none certified.
  std::optional<long long> dominant_witness(const element& f, const element& g) {
    element ginv = invert(g);
    for (long long q = 0; q <= opts_.q_max; ++q) {
      if (dominates(power(f, q), ginv).result == order_result::yes) return q;
    }
    return std::nullopt;
  }

 private:
  struct key_hash {
    std::size_t operator()(const std::pair<std::uint64_t, long long>& k) const {
      return std::hash<std::uint64_t>()(k.first * 1000003ull ^ static_cast<std::uint64_t>(k.second));
    }
  };

  element intern(std::shared_ptr<const circle_lift> lift, std::uint64_t base_id, long long exp) {
    std::lock_guard lk(mu_);
    element e{std::move(lift), next_id_++};
    provenance_[e.id] = {base_id, exp};
    elements_[e.id] = e;
    return e;
  }

  // Grid values f(x_i), x_i = i/N, i = 0..N (node N duplicates node 0 via
  // periodicity: f(1) = f(0) + 1). Power elements are filled incrementally
  // from the largest cached smaller power of the same base.
  std::shared_ptr<const std::vector<double>> grid_values(const element& f, int n_points) {
    {
      std::lock_guard lk(mu_);
      auto it = grid_cache_.find({f.id, n_points});
      if (it != grid_cache_.end()) return it->second;
    }
    auto vals = std::make_shared<std::vector<double>>();
    const eval_params ep{opts_.eval_tolerance, opts_.bisection_budget};
    std::pair<std::uint64_t, long long> prov{0, 0};
    {
      std::lock_guard lk(mu_);
      auto pit = provenance_.find(f.id);
      if (pit != provenance_.end()) prov = pit->second;
    }
    long long start_exp = 0;
    if (prov.first != 0 && std::abs(prov.second) > 1) {
      // Best cached power of the same base with the same sign.
      std::lock_guard lk(mu_);
      for (const auto& [key, cached] : grid_cache_) {
        if (key.second != n_points) continue;
        auto cp = provenance_.find(key.first);
        if (cp == provenance_.end() || cp->second.first != prov.first) continue;
        long long m = cp->second.second;
        if (m == 0 || (m > 0) != (prov.second > 0)) continue;
        if (std::abs(m) <= std::abs(prov.second) && std::abs(m) > std::abs(start_exp)) {
          start_exp = m;
          *vals = *cached;
        }
      }
    }
    if (start_exp == 0) {
      vals->resize(static_cast<std::size_t>(n_points) + 1);
      for (int i = 0; i <= n_points; ++i)
        (*vals)[static_cast<std::size_t>(i)] = static_cast<double>(i) / n_points;
    }
    if (prov.first != 0 && std::abs(prov.second) > 1) {
      element base;
      {
        std::lock_guard lk(mu_);
        base = elements_.at(prov.first);
      }
      const circle_lift step = prov.second > 0 ? *base.lift : base.lift->inverse();
      for (long long rep = std::abs(start_exp); rep < std::abs(prov.second); ++rep)
        for (double& v : *vals) v = step.evaluate(v, ep);
    } else {
      for (int i = 0; i <= n_points; ++i)
        (*vals)[static_cast<std::size_t>(i)] =
            f.lift->evaluate(static_cast<double>(i) / n_points, ep);
    }
    std::lock_guard lk(mu_);
    auto [it, inserted] = grid_cache_.emplace(std::make_pair(f.id, (long long)n_points),
                                              std::shared_ptr<const std::vector<double>>(vals));
    return it->second;
  }

  order_verdict grid_scan(const element& f, const element& g, int n_points) {
    auto fv = grid_values(f, n_points);
    auto gv = grid_values(g, n_points);
    const auto& fs = *fv;
    const auto& gs = *gv;
    const double h = 1.0 / n_points;
    const double tau = opts_.eval_tolerance;

    order_verdict v;
    v.grid_used = n_points;

    // NO: a grid point where f < g beyond the evaluation tolerance.
    double worst = 0.0;
    int worst_i = -1;
    for (int i = 0; i < n_points; ++i) {
      double d = fs[static_cast<std::size_t>(i)] - gs[static_cast<std::size_t>(i)];
      if (d < worst) {
        worst = d;
        worst_i = i;
      }
    }
    if (worst < -tau) {
      v.result = order_result::no;
      v.witness_x = static_cast<double>(worst_i) / n_points;
      v.margin = worst;
      return v;
    }

    // YES: certified positive lower bound of d over every cell. Two bounds
    // per cell, the better one wins:
    //  - monotone: for x in [x_i, x_{i+1}], f(x) >= f(x_i) and g(x) <= g(x_{i+1}),
    //    so d(x) >= d(x_i) - (g(x_{i+1}) - g(x_i)), and symmetrically from the
    //    right endpoint;
    //  - chain rule: |d'| bound from per-primitive derivative intervals.
    auto [flo, fhi] = f.lift->derivative_bounds();
    auto [glo, ghi] = g.lift->derivative_bounds();
    double chain = std::max(std::abs(flo - ghi), std::abs(fhi - glo));
    double lb = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_points; ++i) {
      std::size_t s = static_cast<std::size_t>(i);
      double d0 = fs[s] - gs[s];
      double d1 = fs[s + 1] - gs[s + 1];
      double mono = std::max(d0 - (gs[s + 1] - gs[s]), d1 - (fs[s + 1] - fs[s]));
      double cell = std::max(mono, std::max(d0, d1) - chain * h);
      lb = std::min(lb, cell);
    }
    v.margin = lb;
    if (lb > tau) {
      v.result = order_result::yes;
      return v;
    }
    v.result = order_result::inconclusive;
    return v;
  }

  circle_options opts_;
  mutable std::mutex mu_;
  std::uint64_t next_id_ = 1;
  std::optional<element> identity_;
  std::unordered_map<std::uint64_t, element> elements_;
  std::unordered_map<std::uint64_t, std::pair<std::uint64_t, long long>> provenance_;
  std::unordered_map<std::pair<std::uint64_t, long long>, element, key_hash> power_cache_;
  std::unordered_map<std::pair<std::uint64_t, long long>, std::shared_ptr<const std::vector<double>>,
                     key_hash>
      grid_cache_;
};

}  // namespace ordgrowth
