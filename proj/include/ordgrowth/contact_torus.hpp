#pragma once

// Autonomous contact Hamiltonians on T*T^n that depend on the momentum only:
// degree-1 homogeneous functions F(p), stored by their restriction to the
// unit sphere. For this class the relative growth of the generated
// contactomorphisms is max_p G(p)/F(p), the shape values are r_-(a,f) =
// r_+(a,f) = F(a), and log(F/H_ref) embeds the class isometrically into
// (C(S^{n-1}), sup-norm).

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>
#include <vector>

#include "common.hpp"
#include "errors.hpp"
#include "report.hpp"

namespace ordgrowth {

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace detail

// A degree-1 homogeneous function scale * base(p). Group operations on the
// generated flow act on the scale alone (phi_F^k = phi_{kF}, phi_F^{-1} =
// phi_{-F}), so iterates compare bit-exactly.
struct homogeneous_hamiltonian {
  int dim = 0;
  double scale = 1.0;
  std::function<double(const std::vector<double>&)> base;
  double base_lipschitz = 0.0;  // Lipschitz constant of base restricted to the sphere
  json descriptor;

  double operator()(const std::vector<double>& p) const { return scale * base(p); }

  double lipschitz() const { return std::abs(scale) * base_lipschitz; }

  homogeneous_hamiltonian iterate(long long k) const {
    if (k == 0) raise(errc::config_error, "iterate requires k != 0");
    homogeneous_hamiltonian h = *this;
    h.scale = scale * static_cast<double>(k);
    h.descriptor = json{{"type", "iterate"}, {"k", k}, {"of", descriptor}};
    return h;
  }

  homogeneous_hamiltonian inverse() const {
    homogeneous_hamiltonian h = *this;
    h.scale = -scale;
    h.descriptor = json{{"type", "inverse"}, {"of", descriptor}};
    return h;
  }

  // Conjugation by a torus shift acts trivially on p-only Hamiltonians.
  homogeneous_hamiltonian shift_conjugate(const std::vector<double>& shift) const {
    homogeneous_hamiltonian h = *this;
    h.descriptor = json{{"type", "shift_conjugate"}, {"shift", shift}, {"of", descriptor}};
    return h;
  }
};

// --- fixed catalogue ---------------------------------------------------------

inline homogeneous_hamiltonian ham_zero(int dim) {
  homogeneous_hamiltonian h;
  h.dim = dim;
  h.base = [](const std::vector<double>&) { return 0.0; };
  h.base_lipschitz = 0.0;
  h.descriptor = json{{"type", "zero"}, {"dim", dim}};
  return h;
}

inline homogeneous_hamiltonian ham_euclidean(int dim) {
  homogeneous_hamiltonian h;
  h.dim = dim;
  h.base = [](const std::vector<double>& p) { return detail::norm2(p); };
  h.base_lipschitz = 0.0;  // constant 1 on the sphere
  h.descriptor = json{{"type", "euclidean_norm"}, {"dim", dim}};
  return h;
}

inline homogeneous_hamiltonian ham_linear(std::vector<double> e) {
  homogeneous_hamiltonian h;
  h.dim = static_cast<int>(e.size());
  h.base_lipschitz = detail::norm2(e);
  h.descriptor = json{{"type", "linear"}, {"e", e}};
  h.base = [e = std::move(e)](const std::vector<double>& p) { return detail::dot(e, p); };
  return h;
}

inline homogeneous_hamiltonian ham_weighted(std::vector<double> w) {
  for (double wi : w)
    if (wi <= 0.0) raise(errc::config_error, "weighted_norm weights must be positive");
  homogeneous_hamiltonian h;
  h.dim = static_cast<int>(w.size());
  h.base_lipschitz = std::sqrt(*std::max_element(w.begin(), w.end()));
  h.descriptor = json{{"type", "weighted_norm"}, {"weights", w}};
  h.base = [w = std::move(w)](const std::vector<double>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += w[i] * p[i] * p[i];
    return std::sqrt(s);
  };
  return h;
}

// sqrt(p^T M p) for symmetric positive definite M (row-major n x n).
inline homogeneous_hamiltonian ham_quadratic(int dim, std::vector<double> m) {
  if (static_cast<int>(m.size()) != dim * dim)
    raise(errc::config_error, "quadratic_norm matrix must be dim x dim");
  homogeneous_hamiltonian h;
  h.dim = dim;
  // |grad sqrt(p^T M p)| = |Mp|/sqrt(p^T M p) <= sqrt(lambda_max); bound
  // lambda_max by the row-sum norm.
  double row_max = 0.0;
  for (int i = 0; i < dim; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += std::abs(m[static_cast<std::size_t>(i * dim + j)]);
    row_max = std::max(row_max, s);
  }
  h.base_lipschitz = std::sqrt(row_max);
  h.descriptor = json{{"type", "quadratic_norm"}, {"dim", dim}, {"matrix", m}};
  h.base = [dim, m = std::move(m)](const std::vector<double>& p) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        s += p[static_cast<std::size_t>(i)] * m[static_cast<std::size_t>(i * dim + j)] *
             p[static_cast<std::size_t>(j)];
    return std::sqrt(std::max(0.0, s));
  };
  return h;
}

// sum_i c_i * H_i(p); the H_i enter with their scales.
inline homogeneous_hamiltonian ham_affine(
    std::vector<std::pair<double, homogeneous_hamiltonian>> terms, int dim_if_empty = 2) {
  homogeneous_hamiltonian h;
  h.dim = terms.empty() ? dim_if_empty : terms.front().second.dim;
  double lip = 0.0;
  json desc_terms = json::array();
  for (const auto& [c, t] : terms) {
    if (t.dim != h.dim) raise(errc::dimension_mismatch, "affine terms must share the dimension");
    lip += std::abs(c) * t.lipschitz();
    desc_terms.push_back(json{{"coef", c}, {"h", t.descriptor}});
  }
  h.base_lipschitz = lip;
  h.descriptor = json{{"type", "affine"}, {"terms", desc_terms}};
  h.base = [terms = std::move(terms)](const std::vector<double>& p) {
    double s = 0.0;
    for (const auto& [c, t] : terms) s += c * t(p);
    return s;
  };
  return h;
}

// --- sphere discretization ---------------------------------------------------

struct sphere_grid {
  int dim = 2;
  std::vector<std::vector<double>> dirs;
  double cover_radius = 0.0;  // every unit vector is within this of a node

  // n = 2: N uniform angles; cover radius pi/N in arc length.
  static sphere_grid circle(int n_points) {
    if (n_points < 8) raise(errc::config_error, "sphere grid needs at least 8 points");
    sphere_grid g;
    g.dim = 2;
    g.dirs.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
      double th = detail::two_pi * i / n_points;
      g.dirs.push_back({std::cos(th), std::sin(th)});
    }
    g.cover_radius = detail::pi / n_points;
    return g;
  }

  // n >= 3: primitive integer vectors of sup-norm <= range, normalized.
  // For unit u and w = round(range*u): |u - w/|w|| <= sqrt(n)/range.
  static sphere_grid lattice(int dim, int range) {
    if (dim < 2) raise(errc::config_error, "sphere grid needs dim >= 2");
    if (range < 2) raise(errc::config_error, "lattice range must be >= 2");
    sphere_grid g;
    g.dim = dim;
    std::vector<int> v(static_cast<std::size_t>(dim), -range);
    auto gcd_all = [](const std::vector<int>& x) {
      int d = 0;
      for (int xi : x) d = std::gcd(d, std::abs(xi));
      return d;
    };
    while (true) {
      if (gcd_all(v) == 1) {
        double len = 0.0;
        for (int vi : v) len += static_cast<double>(vi) * vi;
        len = std::sqrt(len);
        std::vector<double> dir(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) dir[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] / len;
        g.dirs.push_back(std::move(dir));
      }
      int i = 0;
      for (; i < dim; ++i) {
        if (v[static_cast<std::size_t>(i)] < range) {
          ++v[static_cast<std::size_t>(i)];
          break;
        }
        v[static_cast<std::size_t>(i)] = -range;
      }
      if (i == dim) break;
    }
    g.cover_radius = std::sqrt(static_cast<double>(dim)) / range;
    return g;
  }

  static sphere_grid make(int dim, int circle_points = 4096, int lattice_range = 24) {
    return dim == 2 ? circle(circle_points) : lattice(dim, lattice_range);
  }
};

inline std::vector<double> sphere_table(const homogeneous_hamiltonian& f, const sphere_grid& g) {
  if (f.dim != g.dim) raise(errc::dimension_mismatch, "hamiltonian/grid dimension mismatch");
  std::vector<double> vals;
  vals.reserve(g.dirs.size());
  for (const auto& d : g.dirs) vals.push_back(f(d));
  return vals;
}

struct positivity_certificate {
  double grid_min = 0.0;
  double slack = 0.0;  // lipschitz * cover_radius
  bool strict() const { return grid_min > slack; }
};

inline positivity_certificate positivity(const homogeneous_hamiltonian& f, const sphere_grid& g) {
  positivity_certificate c;
  c.grid_min = std::numeric_limits<double>::infinity();
  for (const auto& d : g.dirs) c.grid_min = std::min(c.grid_min, f(d));
  c.slack = f.lipschitz() * g.cover_radius;
  return c;
}

inline void ensure_strictly_positive(const homogeneous_hamiltonian& f, const sphere_grid& g,
                                     const char* who) {
  positivity_certificate c = positivity(f, g);
  if (!c.strict()) {
    std::ostringstream os;
    os << who << " is not certified strictly positive on the sphere: grid min " << c.grid_min
       << " <= slack " << c.slack;
    raise(errc::f_not_positive, os.str());
  }
}

// --- relative growth of autonomous flows --------------------------------------

struct gamma_torus_result {
  double value = 0.0;            // grid max of G/F (a certified lower bound of the max)
  double enclosure_width = 0.0;  // true max <= value + enclosure_width
  std::size_t argmax = 0;        // grid index of the maximizing direction

  enclosure as_enclosure() const { return {value + 0.5 * enclosure_width, 0.5 * enclosure_width}; }
};

inline gamma_torus_result gamma_torus(const homogeneous_hamiltonian& f,
                                      const homogeneous_hamiltonian& g, const sphere_grid& grid) {
  if (f.dim != g.dim) raise(errc::dimension_mismatch, "gamma_torus needs matching dimensions");
  if (f.dim != grid.dim) raise(errc::dimension_mismatch, "grid dimension mismatch");
  ensure_strictly_positive(f, grid, "F");

  // Scales cancel through a single ratio so that gamma(mF, mG) == gamma(F, G)
  // bit-exactly.
  const double scale_ratio = g.scale / f.scale;
  double fmin = std::numeric_limits<double>::infinity();
  double gabs = 0.0;
  double gmax = -std::numeric_limits<double>::infinity();
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < grid.dirs.size(); ++i) {
    double fv = f.base(grid.dirs[i]);
    double gv = g.base(grid.dirs[i]);
    double r = scale_ratio * (gv / fv);
    if (r > best) {
      best = r;
      best_i = i;
    }
    fmin = std::min(fmin, f.scale * fv);
    gabs = std::max(gabs, std::abs(g.scale * gv));
    gmax = std::max(gmax, g.scale * gv);
  }
  if (gmax <= 0.0)
    raise(errc::hypothesis_failed, "G is nowhere positive on the sphere grid");

  const double h = grid.cover_radius;
  const double fmin_lb = fmin - f.lipschitz() * h;
  const double gabs_ub = gabs + g.lipschitz() * h;
  gamma_torus_result out;
  out.value = best;
  out.argmax = best_i;
  out.enclosure_width = (g.lipschitz() / fmin_lb + gabs_ub * f.lipschitz() / (fmin_lb * fmin_lb)) * h;
  return out;
}

// --- shape values ------------------------------------------------------------

struct shape_values_result {
  std::vector<double> direction;
  double r_minus = 0.0;
  double r_plus = 0.0;
};

inline shape_values_result shape_values(const std::vector<double>& a,
                                        const homogeneous_hamiltonian& f) {
  if (static_cast<int>(a.size()) != f.dim)
    raise(errc::dimension_mismatch, "class/hamiltonian dimension mismatch");
  bool zero = true;
  for (double ai : a) zero = zero && ai == 0.0;
  if (zero) raise(errc::zero_class, "shape values need a nonzero cohomology class");
  double r = f(a);
  return {a, r, r};
}

// Shape^+(f) = {(a,b) : b >= -F(a)} and Shape^-(f) = {(a,b) : b <= -F(a)} in
// the autonomous split model.
inline bool shape_plus_contains(const std::vector<double>& a, double b,
                                const homogeneous_hamiltonian& f) {
  return b >= -f(a);
}
inline bool shape_minus_contains(const std::vector<double>& a, double b,
                                 const homogeneous_hamiltonian& f) {
  return b <= -f(a);
}

// Shape-value bound: gamma(f,g) >= r_-(a,g)/r_+(a,f) whenever r_-(a,g) > 0.
inline double growth_lower_bound(const homogeneous_hamiltonian& f,
                                 const homogeneous_hamiltonian& g, const std::vector<double>& a,
                                 const sphere_grid& grid) {
  ensure_strictly_positive(f, grid, "F");
  shape_values_result sg = shape_values(a, g);
  if (sg.r_minus <= 0.0) {
    std::ostringstream os;
    os << "r_-(a,g) = " << sg.r_minus << " <= 0; the lower-bound hypothesis fails for this class";
    raise(errc::hypothesis_failed, os.str());
  }
  shape_values_result sf = shape_values(a, f);
  return sg.r_minus / sf.r_plus;
}

// The shape-value identities of the autonomous model, where everything
// reduces to arithmetic on F(a): half-line membership, ordering of the two
// extremes, normalization, monotonicity, iteration and inverse behaviour,
// class scaling and shift-conjugation invariance.
inline check_report check_shape_properties(const homogeneous_hamiltonian& f,
                                           const homogeneous_hamiltonian& g,
                                           const std::vector<double>& a, double c, long long k,
                                           const sphere_grid& grid) {
  if (c <= 0.0) raise(errc::config_error, "class scaling needs c > 0");
  if (k < 1) raise(errc::config_error, "the iteration check needs k >= 1");
  check_report rep;
  rep.title = "shape_properties";
  const double rel = 2e-13;  // rounding allowance for re-evaluated expressions
  auto close = [&](double x, double y) {
    return x == y || std::abs(x - y) <= rel * std::max({1.0, std::abs(x), std::abs(y)});
  };

  shape_values_result sf = shape_values(a, f);

  // half-line membership around the threshold -r_-(a,f)
  {
    bool ok = true;
    for (double eps : {1e-9, 1e-3, 0.5, 2.0}) {
      ok = ok && shape_plus_contains(a, -sf.r_minus + eps, f);
      ok = ok && shape_minus_contains(a, -sf.r_plus - eps, f);
    }
    rep.add("halfline_membership", std::nullopt, ok ? 1.0 : 0.0, 1.0, ok);
  }
  // the two extremes are ordered
  rep.add("rplus_ge_rminus", std::nullopt, sf.r_plus, sf.r_minus, sf.r_plus >= sf.r_minus);
  // normalization at the identity
  {
    shape_values_result s1 = shape_values(a, ham_zero(f.dim));
    rep.add("normalization", std::nullopt, s1.r_plus, 0.0, s1.r_plus == 0.0 && s1.r_minus == 0.0);
  }
  // monotonicity, tested in whichever direction the grid certifies
  {
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = -std::numeric_limits<double>::infinity();
    for (const auto& dir : grid.dirs) {
      double d = f(dir) - g(dir);
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
    double slack = (f.lipschitz() + g.lipschitz()) * grid.cover_radius;
    shape_values_result sg = shape_values(a, g);
    if (dmin > slack) {
      rep.add("monotonicity(F>=G)", std::nullopt, sf.r_plus, sg.r_plus,
              sf.r_plus >= sg.r_plus - rel * std::max(1.0, std::abs(sg.r_plus)));
    } else if (dmax < -slack) {
      rep.add("monotonicity(G>=F)", std::nullopt, sg.r_plus, sf.r_plus,
              sg.r_plus >= sf.r_plus - rel * std::max(1.0, std::abs(sf.r_plus)));
    } else {
      rep.add("monotonicity", std::nullopt, 0.0, 0.0, true, "pair not grid-comparable; skipped");
    }
  }
  // iterations: the value is k*F(a), which refines the one-sided bounds
  {
    shape_values_result sk = shape_values(a, f.iterate(k));
    double expect = static_cast<double>(k) * sf.r_minus;
    rep.add("iteration_value", k, sk.r_minus, expect, sk.r_minus == expect);
    rep.add("iteration_lower", k, sk.r_minus, expect, sk.r_minus >= expect);
    rep.add("iteration_upper", k, sk.r_plus, expect, sk.r_plus <= expect);
  }
  // inverse
  {
    shape_values_result si = shape_values(a, f.inverse());
    rep.add("inverse_flip", std::nullopt, si.r_plus, -sf.r_minus, si.r_plus == -sf.r_minus);
  }
  // positive homogeneity in the class
  {
    std::vector<double> ca(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) ca[i] = c * a[i];
    shape_values_result sc = shape_values(ca, f);
    rep.add("class_scaling", std::nullopt, sc.r_plus, c * sf.r_plus,
            close(sc.r_plus, c * sf.r_plus));
  }
  // conjugation invariance under torus shifts
  {
    std::vector<double> shift(a.size(), 0.25);
    shape_values_result sc = shape_values(a, f.shift_conjugate(shift));
    rep.add("shift_conjugation", std::nullopt, sc.r_plus, sf.r_plus, sc.r_plus == sf.r_plus);
  }
  return rep;
}

// --- sup-log chart of the autonomous class -------------------------------------

inline std::vector<double> zk_embed(const homogeneous_hamiltonian& f,
                                    const homogeneous_hamiltonian& h_ref,
                                    const sphere_grid& grid) {
  ensure_strictly_positive(f, grid, "F");
  ensure_strictly_positive(h_ref, grid, "H_ref");
  std::vector<double> u;
  u.reserve(grid.dirs.size());
  for (const auto& d : grid.dirs) u.push_back(std::log(f(d)) - std::log(h_ref(d)));
  return u;
}

struct kappa_torus_result {
  double via_gamma = 0.0;      // max(log gamma(F,G), log gamma(G,F))
  double via_embedding = 0.0;  // sup |log F - log G| on the grid
  gamma_torus_result fg, gf;
};

inline kappa_torus_result kappa_torus(const homogeneous_hamiltonian& f,
                                      const homogeneous_hamiltonian& g, const sphere_grid& grid) {
  kappa_torus_result out;
  out.fg = gamma_torus(f, g, grid);
  out.gf = gamma_torus(g, f, grid);
  out.via_gamma = std::max(std::log(out.fg.value), std::log(out.gf.value));
  double sup = 0.0;
  for (const auto& d : grid.dirs) sup = std::max(sup, std::abs(std::log(f(d)) - std::log(g(d))));
  out.via_embedding = sup;
  return out;
}

// --- serialization -----------------------------------------------------------

inline void sphere_table_csv(const homogeneous_hamiltonian& f, const sphere_grid& g,
                             std::ostream& os) {
  for (int i = 0; i < g.dim; ++i) os << "p" << i + 1 << ",";
  os << "value\n";
  char buf[64];
  for (const auto& d : g.dirs) {
    for (double di : d) {
      std::snprintf(buf, sizeof buf, "%.17g", di);
      os << buf << ",";
    }
    std::snprintf(buf, sizeof buf, "%.17g", f(d));
    os << buf << "\n";
  }
}

inline json sphere_table_json(const homogeneous_hamiltonian& f, const sphere_grid& g) {
  json dirs = json::array();
  json vals = json::array();
  for (const auto& d : g.dirs) {
    dirs.push_back(d);
    vals.push_back(f(d));
  }
  return json{{"descriptor", f.descriptor},
              {"cover_radius", g.cover_radius},
              {"directions", std::move(dirs)},
              {"values", std::move(vals)}};
}

}  // namespace ordgrowth
