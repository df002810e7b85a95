#pragma once

#include <bit>
#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "cube_fourier.hpp"
#include "lattice.hpp"

namespace gse {

/// Piecewise-multilinear extension of a LatticeFunction: on each lattice cube
/// C(y) the unique interpolant of degree <= 1 per axis through the corner
/// values, stored as the cube's Boolean Fourier coefficients. Agrees with the
/// source at lattice points exactly and is continuous across cube faces.
class MultilinearFunction {
 public:
  explicit MultilinearFunction(const LatticeFunction& f) : box_(f.box) {
    const int d = box_.dim;
    const unsigned nc = 1u << d;
    const std::int64_t cubes = box_.cube_count();
    coeffs_.resize(static_cast<size_t>(cubes) * nc);
    std::vector<int> y(d);
    for (std::int64_t c = 0; c < cubes; ++c) {
      box_.cube_base(c, y);
      CubeCoeffs cc = cube_coefficients(f, y);
      for (unsigned S = 0; S < nc; ++S)
        coeffs_[static_cast<size_t>(c) * nc + S] = cc.coeffs[S];
    }
  }

  const LatticeBox& box() const { return box_; }

  std::span<const double> cube_coeffs(std::int64_t cube_index) const {
    const unsigned nc = 1u << box_.dim;
    return {coeffs_.data() + static_cast<size_t>(cube_index) * nc, nc};
  }

  /// Linear index of the cube with base y (same ordering as
  /// LatticeBox::cube_base).
  std::int64_t cube_index(std::span<const int> y) const {
    const int n = box_.cube_axis_size(), lo = box_.kmin();
    std::int64_t idx = 0;
    for (int i = 0; i < box_.dim; ++i) idx = idx * n + (y[i] - lo);
    return idx;
  }

  /// Evaluate g at x: locate the cube C(y) containing x (periodic boxes wrap
  /// the base), map it to [-1,1]^d, evaluate the chi_S expansion.
  double eval(std::span<const double> x) const {
    const int d = box_.dim;
    const double th = box_.theta;
    std::vector<int> y(d);
    std::vector<double> u(d);
    for (int i = 0; i < d; ++i) {
      double s = std::floor(x[i] / th);
      int yi = static_cast<int>(s);
      if (box_.boundary == Boundary::periodic) {
        u[i] = 2.0 * (x[i] / th - s) - 1.0;
        y[i] = box_.wrap(yi);
      } else {
        // Clamp to the covered cube range so face/edge points stay valid.
        int lo = box_.kmin(), hi = lo + box_.cube_axis_size() - 1;
        if (yi < lo) yi = lo;
        if (yi > hi) yi = hi;
        u[i] = 2.0 * (x[i] / th - yi) - 1.0;
        y[i] = yi;
      }
    }
    std::span<const double> c = cube_coeffs(cube_index(y));
    const unsigned nc = 1u << d;
    double acc = 0.0;
    for (unsigned S = 0; S < nc; ++S) {
      double term = c[S];
      for (int i = 0; i < d; ++i)
        if (S & (1u << i)) term *= u[i];
      acc += term;
    }
    return acc;
  }

  /// ||g||^2, exact: theta^d * sum_cubes sum_S (1/3)^{|S|} coeffs^2.
  double norm2() const {
    return moment_sum(0) * std::pow(box_.theta, box_.dim);
  }

  /// <g, -Delta g>, exact: 4 theta^{d-2} sum_cubes sum_S |S| (1/3)^{|S|-1} c^2.
  double dirichlet_form() const {
    return 4.0 * moment_sum(1) * std::pow(box_.theta, box_.dim - 2);
  }

  /// Per-cube squared L2 mass theta^d sum_S (1/3)^{|S|} coeffs^2.
  double cube_mass(std::int64_t cube_idx) const {
    std::span<const double> c = cube_coeffs(cube_idx);
    double acc = 0.0;
    for (unsigned S = 0; S < c.size(); ++S)
      acc += std::pow(1.0 / 3.0, std::popcount(S)) * c[S] * c[S];
    return acc * std::pow(box_.theta, box_.dim);
  }

 private:
  // mode 0: sum (1/3)^k m_k;  mode 1: sum k (1/3)^{k-1} m_k.
  double moment_sum(int mode) const {
    const unsigned nc = 1u << box_.dim;
    double acc = 0.0;
    const std::int64_t cubes = box_.cube_count();
    for (std::int64_t c = 0; c < cubes; ++c) {
      std::span<const double> cc = cube_coeffs(c);
      for (unsigned S = 0; S < nc; ++S) {
        int k = std::popcount(S);
        double w = mode == 0 ? std::pow(1.0 / 3.0, k)
                             : k * std::pow(1.0 / 3.0, k - 1);
        acc += w * cc[S] * cc[S];
      }
    }
    return acc;
  }

  LatticeBox box_;
  std::vector<double> coeffs_;
};

inline MultilinearFunction multilinear_extend(const LatticeFunction& f) {
  return MultilinearFunction(f);
}

/// Mass distributions over cubes: nu_f(y) = ||f||^2_{C(y)} / (2^d ||f||^2),
/// nu_g(y) = ||g||^2_{C(y)} / ||g||^2. Both sum to 1 on periodic boxes.
struct NuMeasures {
  std::vector<double> nu_f;  // indexed by cube linear index
  std::vector<double> nu_g;
};

inline NuMeasures nu_measures(const LatticeFunction& f,
                              const MultilinearFunction& g) {
  const int d = f.box.dim;
  const std::int64_t cubes = f.box.cube_count();
  double f2 = f.norm2();
  double g2 = g.norm2();
  if (!(f2 > 0) || !(g2 > 0))
    throw std::invalid_argument("nu_measures: zero norm");
  NuMeasures out;
  out.nu_f.resize(static_cast<size_t>(cubes));
  out.nu_g.resize(static_cast<size_t>(cubes));
  std::vector<int> y(d);
  const double corner_scale = 1.0 / (std::pow(2.0, d) * f2);
  for (std::int64_t c = 0; c < cubes; ++c) {
    f.box.cube_base(c, y);
    double loc = 0.0;
    for (unsigned b = 0; b < (1u << d); ++b) {
      double v = f.corner(y, b);
      loc += v * v;
    }
    out.nu_f[static_cast<size_t>(c)] = loc * corner_scale;
    out.nu_g[static_cast<size_t>(c)] = g.cube_mass(c) / g2;
  }
  return out;
}

}  // namespace gse
