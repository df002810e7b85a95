#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gse {

/// Gauss-Legendre nodes and weights on [-1,1], computed by Newton iteration
/// on the three-term Legendre recurrence.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    assert(n >= 1);
    for (int i = 0; i < n; ++i) {
      // Chebyshev-like initial guess
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

/// Integrate f over the axis-aligned box [lo, hi]^d by a tensor-product
/// Gauss-Legendre rule with `order` points per axis.
inline double integrate_box(const std::function<double(std::span<const double>)>& f,
                            std::span<const double> lo, std::span<const double> hi,
                            int order) {
  const int d = static_cast<int>(lo.size());
  GaussLegendre gl(order);
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  double jac = 1.0;
  for (int i = 0; i < d; ++i) jac *= 0.5 * (hi[i] - lo[i]);
  double sum = 0.0;
  while (true) {
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      x[i] = 0.5 * (lo[i] + hi[i]) + 0.5 * (hi[i] - lo[i]) * gl.nodes[idx[i]];
      w *= gl.weights[idx[i]];
    }
    sum += w * f(x);
    int axis = 0;
    while (axis < d && ++idx[axis] == order) idx[axis++] = 0;
    if (axis == d) break;
  }
  return sum * jac;
}

/// 1-d convenience overload.
inline double integrate_interval(const std::function<double(double)>& f, double a,
                                 double b, int order) {
  const double lo[1] = {a}, hi[1] = {b};
  return integrate_box([&](std::span<const double> x) { return f(x[0]); }, lo, hi,
                       order);
}

}  // namespace gse
