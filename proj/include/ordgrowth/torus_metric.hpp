#pragma once

// Periodic Riemannian metrics on T^n = [0,1)^n, n = 2 or 3: constant
// matrices, conformal fields lambda(q)^2 * Id from the catalogue, or grid
// tables with multilinear interpolation.

#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "errors.hpp"
#include "report.hpp"

namespace ordgrowth {

namespace detail {

inline double sym2_min_eig(double a, double b, double c) {
  // eigenvalues of [[a, b], [b, c]]
  double tr = a + c;
  double disc = std::sqrt(std::max(0.0, (a - c) * (a - c) + 4.0 * b * b));
  return 0.5 * (tr - disc);
}

// Gershgorin lower bound, clamped at 0; exact value not needed in 3D.
inline double gershgorin_min(const double* m, int n) {
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) off += std::abs(m[i * n + j]);
    lo = std::min(lo, m[i * n + i] - off);
  }
  return std::max(lo, 0.0);
}

inline void invert_spd(const double* m, int n, double* out) {
  if (n == 2) {
    double det = m[0] * m[3] - m[1] * m[2];
    if (det <= 0.0) raise(errc::config_error, "metric matrix is not positive definite");
    out[0] = m[3] / det;
    out[1] = -m[1] / det;
    out[2] = -m[2] / det;
    out[3] = m[0] / det;
    return;
  }
  if (n == 3) {
    double c00 = m[4] * m[8] - m[5] * m[7];
    double c01 = m[5] * m[6] - m[3] * m[8];
    double c02 = m[3] * m[7] - m[4] * m[6];
    double det = m[0] * c00 + m[1] * c01 + m[2] * c02;
    if (det <= 0.0) raise(errc::config_error, "metric matrix is not positive definite");
    out[0] = c00 / det;
    out[1] = (m[2] * m[7] - m[1] * m[8]) / det;
    out[2] = (m[1] * m[5] - m[2] * m[4]) / det;
    out[3] = c01 / det;
    out[4] = (m[0] * m[8] - m[2] * m[6]) / det;
    out[5] = (m[2] * m[3] - m[0] * m[5]) / det;
    out[6] = c02 / det;
    out[7] = (m[1] * m[6] - m[0] * m[7]) / det;
    out[8] = (m[0] * m[4] - m[1] * m[3]) / det;
    return;
  }
  raise(errc::config_error, "metric inversion supports n = 2 or 3");
}

}  // namespace detail

class torus_metric {
 public:
  static constexpr int max_dim = 3;

  static torus_metric identity(int dim) {
    std::vector<double> m(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) m[static_cast<std::size_t>(i * dim + i)] = 1.0;
    return constant(dim, std::move(m));
  }

  static torus_metric constant(int dim, std::vector<double> matrix) {
    torus_metric g;
    g.kind_ = kind::constant;
    g.dim_ = check_dim(dim);
    g.matrix_ = std::move(matrix);
    if (static_cast<int>(g.matrix_.size()) != dim * dim)
      raise(errc::config_error, "constant metric matrix must be dim x dim");
    g.validate_node(g.matrix_.data());
    g.min_eig_ = g.node_min_eig(g.matrix_.data());
    return g;
  }

  // lambda(q)^2 * Id with lambda(q) = 1 + amplitude * cos(2*pi*q_axis).
  static torus_metric conformal_cos(int dim, double amplitude, int axis = 0) {
    if (std::abs(amplitude) >= 1.0)
      raise(errc::config_error, "conformal amplitude must satisfy |A| < 1");
    if (axis < 0 || axis >= dim) raise(errc::config_error, "conformal axis out of range");
    torus_metric g;
    g.kind_ = kind::conformal_cos;
    g.dim_ = check_dim(dim);
    g.amplitude_ = amplitude;
    g.axis_ = axis;
    double lmin = 1.0 - std::abs(amplitude);
    g.min_eig_ = lmin * lmin;
    return g;
  }

  // Grid table at resolution R per axis; node (i_0,...,i_{n-1}) holds a
  // row-major dim x dim matrix at q = (i_0/R, ..., i_{n-1}/R).
  static torus_metric from_table(int dim, int resolution, std::vector<double> values) {
    torus_metric g;
    g.kind_ = kind::table;
    g.dim_ = check_dim(dim);
    g.resolution_ = resolution;
    g.table_ = std::move(values);
    std::size_t nodes = 1;
    for (int i = 0; i < dim; ++i) nodes *= static_cast<std::size_t>(resolution);
    if (g.table_.size() != nodes * static_cast<std::size_t>(dim) * dim)
      raise(errc::config_error, "metric table has the wrong number of entries");
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < nodes; ++n) {
      const double* m = g.table_.data() + n * static_cast<std::size_t>(dim) * dim;
      g.validate_node(m);
      lo = std::min(lo, g.node_min_eig(m));
    }
    // min eigenvalue is concave, so multilinear blends stay above the node min
    g.min_eig_ = lo;
    return g;
  }

  // CSV rows "q1,..,qn,g11,..,gnn" in lexicographic node order.
  static torus_metric from_csv(std::istream& is, int dim, int resolution) {
    std::string line;
    if (!std::getline(is, line)) raise(errc::config_error, "empty metric CSV");
    std::vector<double> values;
    std::size_t nodes = 1;
    for (int i = 0; i < dim; ++i) nodes *= static_cast<std::size_t>(resolution);
    values.reserve(nodes * static_cast<std::size_t>(dim) * dim);
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string cell;
      int col = 0;
      while (std::getline(ls, cell, ',')) {
        if (col++ < dim) continue;  // node coordinates are positional
        values.push_back(std::stod(cell));
      }
      if (col != dim + dim * dim) raise(errc::config_error, "metric CSV row has wrong column count");
    }
    return from_table(dim, resolution, std::move(values));
  }

  void to_csv(std::ostream& os, int resolution) const {
    for (int i = 0; i < dim_; ++i) os << "q" << i + 1 << ",";
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) os << "g" << i + 1 << j + 1 << (i == dim_ - 1 && j == dim_ - 1 ? "\n" : ",");
    std::vector<int> idx(static_cast<std::size_t>(dim_), 0);
    std::vector<double> q(static_cast<std::size_t>(dim_));
    std::array<double, 9> m{};
    char buf[64];
    while (true) {
      for (int i = 0; i < dim_; ++i) q[static_cast<std::size_t>(i)] = static_cast<double>(idx[static_cast<std::size_t>(i)]) / resolution;
      eval(q.data(), m.data());
      for (int i = 0; i < dim_; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", q[static_cast<std::size_t>(i)]);
        os << buf << ",";
      }
      for (int i = 0; i < dim_ * dim_; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", m[static_cast<std::size_t>(i)]);
        os << buf << (i == dim_ * dim_ - 1 ? "\n" : ",");
      }
      int ax = dim_ - 1;
      for (; ax >= 0; --ax) {
        if (++idx[static_cast<std::size_t>(ax)] < resolution) break;
        idx[static_cast<std::size_t>(ax)] = 0;
      }
      if (ax < 0) break;
    }
  }

  int dim() const { return dim_; }
  bool is_constant() const { return kind_ == kind::constant; }
  double min_eigenvalue() const { return min_eig_; }
  const std::vector<double>& constant_matrix() const { return matrix_; }

  // g(q), periodic in every coordinate; out is row-major dim x dim.
  void eval(const double* q, double* out) const {
    switch (kind_) {
      case kind::constant:
        for (int i = 0; i < dim_ * dim_; ++i) out[i] = matrix_[static_cast<std::size_t>(i)];
        return;
      case kind::conformal_cos: {
        double x = q[axis_] - std::floor(q[axis_]);
        double lam = 1.0 + amplitude_ * std::cos(detail::two_pi * x);
        for (int i = 0; i < dim_ * dim_; ++i) out[i] = 0.0;
        for (int i = 0; i < dim_; ++i) out[i * dim_ + i] = lam * lam;
        return;
      }
      case kind::table:
        interpolate(q, out);
        return;
    }
  }

  double length_of(const double* q, const double* delta) const {
    std::array<double, 9> m{};
    eval(q, m.data());
    double s = 0.0;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) s += delta[i] * m[static_cast<std::size_t>(i * dim_ + j)] * delta[j];
    return std::sqrt(std::max(0.0, s));
  }

 private:
  enum class kind { constant, conformal_cos, table };

  static int check_dim(int dim) {
    if (dim < 2 || dim > max_dim) raise(errc::config_error, "torus metric supports n = 2 or 3");
    return dim;
  }

  void validate_node(const double* m) const {
    for (int i = 0; i < dim_; ++i)
      for (int j = i + 1; j < dim_; ++j)
        if (std::abs(m[i * dim_ + j] - m[j * dim_ + i]) > 1e-12)
          raise(errc::config_error, "metric matrix must be symmetric");
    // Sylvester: leading principal minors positive.
    bool spd = m[0] > 0.0;
    if (dim_ >= 2) spd = spd && m[0] * m[dim_ + 1] - m[1] * m[dim_] > 0.0;
    if (dim_ == 3) {
      double det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                   m[2] * (m[3] * m[7] - m[4] * m[6]);
      spd = spd && det > 0.0;
    }
    if (!spd) raise(errc::config_error, "metric matrix must be positive definite at every node");
  }

  // Certified lower bound of the smallest eigenvalue (may be 0 in 3D, which
  // only degrades the A* heuristic to plain Dijkstra).
  double node_min_eig(const double* m) const {
    if (dim_ == 2) return detail::sym2_min_eig(m[0], m[1], m[3]);
    return detail::gershgorin_min(m, dim_);
  }

  void interpolate(const double* q, double* out) const {
    const int R = resolution_;
    int base[3] = {0, 0, 0};
    double frac[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < dim_; ++i) {
      double x = q[i] - std::floor(q[i]);
      double s = x * R;
      base[i] = static_cast<int>(std::floor(s));
      frac[i] = s - base[i];
      if (base[i] >= R) {
        base[i] = 0;
        frac[i] = 0.0;
      }
    }
    const int entries = dim_ * dim_;
    for (int i = 0; i < entries; ++i) out[i] = 0.0;
    int corners = 1 << dim_;
    for (int c = 0; c < corners; ++c) {
      double w = 1.0;
      std::size_t node = 0;
      for (int i = 0; i < dim_; ++i) {
        int bit = (c >> i) & 1;
        w *= bit ? frac[i] : 1.0 - frac[i];
        int coord = (base[i] + bit) % R;
        node = node * static_cast<std::size_t>(R) + static_cast<std::size_t>(coord);
      }
      if (w == 0.0) continue;
      const double* m = table_.data() + node * static_cast<std::size_t>(entries);
      for (int i = 0; i < entries; ++i) out[i] += w * m[i];
    }
  }

  kind kind_ = kind::constant;
  int dim_ = 2;
  std::vector<double> matrix_;
  double amplitude_ = 0.0;
  int axis_ = 0;
  int resolution_ = 0;
  std::vector<double> table_;
  double min_eig_ = 1.0;
};

}  // namespace ordgrowth
