#pragma once

// Growth engine for groups carrying a normal cone. A model supplies the group
// operations and an order oracle; this header extracts the gamma_k sequences,
// their Fekete limit estimates, the kappa pseudo-metric, and batch checks of
// the cone axioms and growth inequalities.

#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "errors.hpp"
#include "report.hpp"

namespace ordgrowth {

enum class order_result { yes, no, inconclusive };

struct order_verdict {
  order_result result = order_result::inconclusive;
  std::optional<double> witness_x;  // set on NO
  double margin = 0.0;              // certified lower bound (YES) or violation depth (NO)
  int grid_used = 0;
};

template <class M>
concept group_model = requires(M& m, typename M::element e, long long n) {
  { m.identity() } -> std::convertible_to<typename M::element>;
  { m.multiply(e, e) } -> std::convertible_to<typename M::element>;
  { m.invert(e) } -> std::convertible_to<typename M::element>;
  { m.power(e, n) } -> std::convertible_to<typename M::element>;
  { m.dominates(e, e) } -> std::convertible_to<order_verdict>;
  { m.dominant_witness(e, e) } -> std::convertible_to<std::optional<long long>>;
};

struct growth_estimate {
  std::vector<long long> gamma;  // gamma[k-1] = gamma_k(f,g), k = 1..K
  long long horizon = 0;
  long long q_used = 0;  // gamma_k >= -k*q_used
  double upper_envelope = std::numeric_limits<double>::infinity();  // min_k gamma_k/k
  double trend = 0.0;                                               // gamma_K/K

  long long gamma_at(long long k) const { return gamma.at(static_cast<std::size_t>(k - 1)); }
};

// q with f^q >= g^{-1} (finiteness bound) and q' with f^{q'} >= g (start of
// the upward search).
struct dominant_witnesses {
  long long q = 0;
  long long q_prime = 0;
};

template <group_model M>
dominant_witnesses find_dominant_witnesses(M& model, const typename M::element& f,
                                           const typename M::element& g) {
  auto q = model.dominant_witness(f, g);
  if (!q)
    raise(errc::dominant_witness_not_found, "no q with f^q >= g^{-1} within the search bound");
  auto qp = model.dominant_witness(f, model.invert(g));
  if (!qp) raise(errc::dominant_witness_not_found, "no q' with f^{q'} >= g within the search bound");
  return {*q, *qp};
}

namespace detail {

[[noreturn]] inline void raise_inconclusive(long long k, long long p, const order_verdict& v) {
  std::ostringstream os;
  os << "order oracle inconclusive at gamma_k bracketing (k=" << k << ", p=" << p
     << "): certified margin " << v.margin << " on grid " << v.grid_used;
  raise(errc::order_inconclusive, os.str());
}

}  // namespace detail

// Least p with f^p >= g^k. Brackets inside [-k*q, k*q'] and binary-searches
// on the monotone map p -> dominates(f^p, g^k); an INCONCLUSIVE verdict
// aborts rather than being treated as NO.
template <group_model M>
long long gamma_k(M& model, const typename M::element& f, const typename M::element& g,
                  long long k, const dominant_witnesses& w,
                  std::optional<long long> upper_hint = std::nullopt) {
  if (k < 1) raise(errc::config_error, "gamma_k requires k >= 1");
  const long long lo_clamp = -k * w.q;
  const long long hi_clamp = k * w.q_prime;
  auto gk = model.power(g, k);
  auto is_yes = [&](long long p) {
    order_verdict v = model.dominates(model.power(f, p), gk);
    if (v.result == order_result::inconclusive) detail::raise_inconclusive(k, p, v);
    return v.result == order_result::yes;
  };

  long long hi = std::min(hi_clamp, std::max(lo_clamp, upper_hint.value_or(hi_clamp)));
  long long step = 1;
  while (!is_yes(hi)) {
    if (hi >= hi_clamp) {
      std::ostringstream os;
      os << "dominance failed at the certified upper bracket p=" << hi_clamp << " (k=" << k
         << "); oracle inconsistent with witness q'=" << w.q_prime;
      raise(errc::order_inconclusive, os.str());
    }
    hi = std::min(hi_clamp, hi + step);
    step *= 2;
  }

  long long lo = hi;  // becomes a strict NO bound below
  step = 1;
  bool have_no = false;
  while (lo > lo_clamp) {
    long long probe = std::max(lo_clamp, lo - step);
    step *= 2;
    if (is_yes(probe)) {
      hi = probe;
      lo = probe;
      continue;
    }
    lo = probe;
    have_no = true;
    break;
  }
  if (!have_no) return hi;  // YES all the way down to -k*q, which is the floor

  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    if (is_yes(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

template <group_model M>
growth_estimate relative_growth(M& model, const typename M::element& f,
                                const typename M::element& g, long long horizon) {
  if (horizon < 1) raise(errc::config_error, "relative_growth requires K >= 1");
  dominant_witnesses w = find_dominant_witnesses(model, f, g);
  growth_estimate est;
  est.horizon = horizon;
  est.q_used = w.q;
  est.gamma.reserve(static_cast<std::size_t>(horizon));
  long long gamma1 = 0;
  for (long long k = 1; k <= horizon; ++k) {
    std::optional<long long> hint;
    if (k > 1) hint = est.gamma.back() + gamma1;  // subadditivity: gamma_k <= gamma_{k-1} + gamma_1
    long long gk = gamma_k(model, f, g, k, w, hint);
    if (k == 1) gamma1 = gk;
    est.gamma.push_back(gk);
    est.upper_envelope = std::min(est.upper_envelope, static_cast<double>(gk) / k);
  }
  est.trend = static_cast<double>(est.gamma.back()) / horizon;
  return est;
}

struct kappa_estimate {
  double value = 0.0;            // max(log trend(f,g), log trend(g,f))
  double certified_upper = 0.0;  // same from the upper envelopes
  growth_estimate fg, gf;
};

template <group_model M>
kappa_estimate kappa(M& model, const typename M::element& f, const typename M::element& g,
                     long long horizon, double tolerance = 1e-9) {
  kappa_estimate out;
  out.fg = relative_growth(model, f, g, horizon);
  out.gf = relative_growth(model, g, f, horizon);
  if (out.fg.trend <= 0.0 || out.gf.trend <= 0.0) {
    std::ostringstream os;
    os << "nonpositive growth trend for a dominant pair (" << out.fg.trend << ", " << out.gf.trend
       << "); oracle inconsistent";
    raise(errc::negative_under_tolerance, os.str());
  }
  out.value = std::max(std::log(out.fg.trend), std::log(out.gf.trend));
  out.certified_upper =
      std::max(std::log(out.fg.upper_envelope), std::log(out.gf.upper_envelope));
  if (out.value < -tolerance) {
    std::ostringstream os;
    os << "kappa estimate " << out.value << " below 0 beyond tolerance " << tolerance
       << "; oracle inconsistent (the growth product bound forces kappa >= 0)";
    raise(errc::negative_under_tolerance, os.str());
  }
  return out;
}

namespace detail {

inline const char* verdict_note(const order_verdict& v) {
  switch (v.result) {
    case order_result::yes: return "";
    case order_result::no: return "violation";
    case order_result::inconclusive: return "ORDER_INCONCLUSIVE (reported, not a violation)";
  }
  return "";
}

}  // namespace detail

// Tests closure under products, conjugation stability and 1 in C on the given
// samples. NO verdicts are violations; INCONCLUSIVE ones are recorded but do
// not fail the report.
template <group_model M>
check_report check_cone_axioms(M& model, const std::vector<typename M::element>& samples) {
  check_report rep;
  rep.title = "cone_axioms";
  auto one = model.identity();

  order_verdict vi = model.dominates(one, one);
  rep.add("identity_in_cone", std::nullopt, vi.margin, 0.0, vi.result != order_result::no,
          detail::verdict_note(vi));

  std::vector<bool> member(samples.size(), false);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    order_verdict v = model.dominates(samples[i], one);
    member[i] = v.result == order_result::yes;
    std::ostringstream name;
    name << "membership(" << i << ")";
    // Non-membership is information, not an axiom violation.
    rep.add(name.str(), std::nullopt, v.margin, 0.0, true,
            v.result == order_result::yes
                ? "in cone"
                : (v.result == order_result::no ? "not in cone" : "inconclusive"));
  }

  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!member[i]) continue;  // product closure only binds cone members
    for (std::size_t j = 0; j < samples.size(); ++j) {
      if (!member[j]) continue;
      order_verdict v = model.dominates(model.multiply(samples[i], samples[j]), one);
      std::ostringstream name;
      name << "product_closure(" << i << "," << j << ")";
      rep.add(name.str(), std::nullopt, v.margin, 0.0, v.result != order_result::no,
              detail::verdict_note(v));
    }
  }

  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!member[i]) continue;
    for (std::size_t j = 0; j < samples.size(); ++j) {
      auto conj = model.multiply(model.multiply(samples[j], samples[i]), model.invert(samples[j]));
      order_verdict v = model.dominates(conj, one);
      std::ostringstream name;
      name << "conjugation_stability(" << i << " by " << j << ")";
      rep.add(name.str(), std::nullopt, v.margin, 0.0, v.result != order_result::no,
              detail::verdict_note(v));
    }
  }
  return rep;
}

// Finite-k product bound, triangle bound on trends, and subadditivity of
// gamma_n(f, .) over a commuting central pair.
template <group_model M>
check_report check_growth_inequalities(M& model, const typename M::element& f,
                                       const typename M::element& g, const typename M::element& h,
                                       const typename M::element& e1,
                                       const typename M::element& e2, long long horizon,
                                       double rel_tolerance = 5e-2) {
  check_report rep;
  rep.title = "growth_inequalities";

  growth_estimate fg = relative_growth(model, f, g, horizon);
  growth_estimate gf = relative_growth(model, g, f, horizon);
  for (long long k = 1; k <= horizon; ++k) {
    long long lhs = fg.gamma_at(k) * gf.gamma_at(k);
    long long rhs = k * k;
    rep.add("product_bound", k, static_cast<double>(lhs), static_cast<double>(rhs), lhs >= rhs);
  }

  growth_estimate fh = relative_growth(model, f, h, horizon);
  growth_estimate gh = relative_growth(model, g, h, horizon);
  {
    double lhs = fh.trend;
    double rhs = fg.trend * gh.trend;
    bool pass = lhs <= rhs * (1.0 + rel_tolerance) + rel_tolerance;
    rep.add("triangle_trend", std::nullopt, lhs, rhs, pass);
  }

  auto e12 = model.multiply(e1, e2);
  {
    auto e21 = model.multiply(e2, e1);
    bool commute = model.dominates(e12, e21).result == order_result::yes &&
                   model.dominates(e21, e12).result == order_result::yes;
    rep.add("central_pair_commutes", std::nullopt, commute ? 1.0 : 0.0, 1.0, commute);
  }
  dominant_witnesses w12 = find_dominant_witnesses(model, f, e12);
  dominant_witnesses w1 = find_dominant_witnesses(model, f, e1);
  dominant_witnesses w2 = find_dominant_witnesses(model, f, e2);
  for (long long n = 1; n <= horizon; ++n) {
    long long lhs = gamma_k(model, f, e12, n, w12);
    long long rhs = gamma_k(model, f, e1, n, w1) + gamma_k(model, f, e2, n, w2);
    rep.add("central_subadditivity", n, static_cast<double>(lhs), static_cast<double>(rhs),
            lhs <= rhs);
  }
  return rep;
}

}  // namespace ordgrowth
