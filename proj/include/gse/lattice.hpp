#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace gse {

enum class Boundary { dirichlet, periodic };

/// Finite box of the lattice thetaZ^d with shift eta.
/// dirichlet: sites k in {-N..N}^d, missing neighbors dropped.
/// periodic(q): sites k in {0..q-1}^d wrapping after q sites; valid when
/// q*theta is an integer (theta = p/q), so the potential matches across the
/// wrap.
struct LatticeBox {
  int dim = 1;
  double theta = 0.5;
  std::vector<double> eta;  // empty means 0
  Boundary boundary = Boundary::dirichlet;
  int radius = 2;  // N, dirichlet only
  int period = 0;  // q, periodic only

  static LatticeBox dirichlet_box(int d, double th, int N,
                                  std::vector<double> eta_ = {}) {
    if (!(th > 0.0) || th > 1.0) throw std::invalid_argument("theta must be in (0,1]");
    if (N < 2) throw std::invalid_argument("radius N >= 2");
    LatticeBox b;
    b.dim = d; b.theta = th; b.radius = N; b.boundary = Boundary::dirichlet;
    b.eta = std::move(eta_);
    if (b.eta.empty()) b.eta.assign(d, 0.0);
    return b;
  }

  static LatticeBox periodic_box(int d, double th, int q,
                                 std::vector<double> eta_ = {}) {
    if (!(th > 0.0) || th > 1.0) throw std::invalid_argument("theta must be in (0,1]");
    if (q < 2) throw std::invalid_argument("period q >= 2");
    if (std::abs(q * th - std::round(q * th)) > 1e-12)
      throw std::invalid_argument("periodic box requires q*theta integral");
    LatticeBox b;
    b.dim = d; b.theta = th; b.period = q; b.boundary = Boundary::periodic;
    b.eta = std::move(eta_);
    if (b.eta.empty()) b.eta.assign(d, 0.0);
    return b;
  }

  int axis_size() const {
    return boundary == Boundary::dirichlet ? 2 * radius + 1 : period;
  }
  int kmin() const { return boundary == Boundary::dirichlet ? -radius : 0; }
  int kmax() const {
    return boundary == Boundary::dirichlet ? radius : period - 1;
  }

  std::int64_t size() const {
    std::int64_t s = 1;
    for (int i = 0; i < dim; ++i) s *= axis_size();
    return s;
  }

  // Row-major linear index over the site range (axis 0 slowest).
  std::int64_t index_of(std::span<const int> k) const {
    const int n = axis_size(), lo = kmin();
    std::int64_t idx = 0;
    for (int i = 0; i < dim; ++i) idx = idx * n + (k[i] - lo);
    return idx;
  }

  void multi_of(std::int64_t idx, std::span<int> k) const {
    const int n = axis_size(), lo = kmin();
    for (int i = dim - 1; i >= 0; --i) {
      k[i] = static_cast<int>(idx % n) + lo;
      idx /= n;
    }
  }

  /// Physical coordinate of site k: k*theta + eta.
  void site_coord(std::span<const int> k, std::span<double> x) const {
    for (int i = 0; i < dim; ++i) x[i] = k[i] * theta + eta[i];
  }

  bool contains(std::span<const int> k) const {
    for (int i = 0; i < dim; ++i)
      if (k[i] < kmin() || k[i] > kmax()) return false;
    return true;
  }

  int wrap(int ki) const {
    int q = period;
    return ((ki % q) + q) % q;
  }

  /// Base points y of lattice cubes C(y) = y + {0,theta}^d handled by the
  /// cube analysis: dirichlet boxes use fully-interior cubes with bases
  /// k in {-N..N-1}^d; periodic boxes use all sites as bases (wrap).
  int cube_axis_size() const {
    return boundary == Boundary::dirichlet ? 2 * radius : period;
  }
  std::int64_t cube_count() const {
    std::int64_t s = 1;
    for (int i = 0; i < dim; ++i) s *= cube_axis_size();
    return s;
  }
  void cube_base(std::int64_t cidx, std::span<int> y) const {
    const int n = cube_axis_size(), lo = kmin();
    for (int i = dim - 1; i >= 0; --i) {
      y[i] = static_cast<int>(cidx % n) + lo;
      cidx /= n;
    }
  }
};

/// Real values on a LatticeBox.
struct LatticeFunction {
  LatticeBox box;
  std::vector<double> values;

  explicit LatticeFunction(LatticeBox b)
      : box(std::move(b)), values(static_cast<size_t>(box.size()), 0.0) {}

  double& at(std::span<const int> k) {
    return values[static_cast<size_t>(box.index_of(k))];
  }
  double at(std::span<const int> k) const {
    return values[static_cast<size_t>(box.index_of(k))];
  }

  /// Value at corner b (bitmask, bit i set = +theta offset along axis i) of
  /// the cube with base y; periodic boxes wrap.
  double corner(std::span<const int> y, unsigned mask) const {
    std::vector<int> k(y.begin(), y.end());
    for (int i = 0; i < box.dim; ++i)
      if (mask & (1u << i)) k[i] += 1;
    if (box.boundary == Boundary::periodic)
      for (int i = 0; i < box.dim; ++i) k[i] = box.wrap(k[i]);
    return at(k);
  }

  double norm2() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
  }
};

}  // namespace gse
