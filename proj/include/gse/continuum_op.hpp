#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "discrete_op.hpp"
#include "eigensolve.hpp"
#include "multilinear.hpp"
#include "potential.hpp"
#include "quadrature.hpp"

namespace gse {

/// Uniform periodic grid of the unit cell [0,1)^d.
struct GridCell {
  int dim = 1;
  int n = 64;  // points per axis
  double spacing() const { return 1.0 / n; }
};

/// Finite-difference discretization of B_theta = -theta^2 Delta + V on one
/// periodic unit cell (second-order central differences, zero-quasimomentum
/// reduction: the ground band bottom is attained by a positive periodic
/// state).
inline SymmetricOperator assemble_continuum(const PotentialSpec& spec,
                                            double theta, const GridCell& cell) {
  if (cell.n < 8) throw std::invalid_argument("assemble_continuum: n >= 8");
  if (spec.dim() != cell.dim)
    throw std::invalid_argument("assemble_continuum: dimension mismatch");
  const int d = cell.dim, n = cell.n;
  const double h = cell.spacing();
  const double w = theta * theta / (h * h);

  std::int64_t total = 1;
  for (int i = 0; i < d; ++i) total *= n;

  auto diag = std::make_shared<std::vector<double>>(static_cast<size_t>(total));
  {
    std::vector<int> k(d);
    std::vector<double> x(d);
    for (std::int64_t idx = 0; idx < total; ++idx) {
      std::int64_t t = idx;
      for (int i = d - 1; i >= 0; --i) { k[i] = static_cast<int>(t % n); t /= n; }
      for (int i = 0; i < d; ++i) x[i] = k[i] * h;
      (*diag)[static_cast<size_t>(idx)] = 2.0 * d * w + spec(x);
    }
  }

  std::vector<std::int64_t> stride(d);
  stride[d - 1] = 1;
  for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * n;

  SymmetricOperator op;
  op.n = total;
  op.upper_bound = 4.0 * d * w + spec.sup_norm();
  op.apply = [diag, stride, d, n, total, w](const double* in, double* out) {
    std::vector<int> pos(d, 0);
    for (std::int64_t idx = 0; idx < total; ++idx) {
      double acc = (*diag)[static_cast<size_t>(idx)] * in[idx];
      for (int i = 0; i < d; ++i) {
        const std::int64_t s = stride[i];
        acc -= w * ((pos[i] + 1 < n) ? in[idx + s] : in[idx + s - s * n]);
        acc -= w * ((pos[i] > 0) ? in[idx - s] : in[idx - s + s * n]);
      }
      out[idx] = acc;
      int a = d - 1;
      while (a >= 0 && ++pos[a] == n) pos[a--] = 0;
    }
  };
  return op;
}

struct MuBResult {
  double value = 0.0;        // Richardson-extrapolated (h^2 order)
  double raw_last = 0.0;     // last unextrapolated grid value
  std::vector<double> raws;  // full doubling sequence
  int final_n = 0;
  bool converged = false;
};

/// Ground state energy of B_theta on the periodic unit cell: grid-doubling
/// until the raw values are Cauchy within tol, then h^2 Richardson
/// extrapolation of the last pair.
inline MuBResult mu_B(const PotentialSpec& spec, double theta, GridCell cell,
                      double tol, int max_n = 1 << 13, double rel_tol = 0.0) {
  if (!(tol > 0)) throw std::invalid_argument("mu_B: tol must be > 0");
  const int d = cell.dim;
  const double site_budget = 6e5;
  MuBResult out;
  double prev = std::numeric_limits<double>::infinity();
  for (int n = cell.n;; n *= 2) {
    if (n > max_n || std::pow(static_cast<double>(n), d) > site_budget) break;
    GridCell c{d, n};
    SymmetricOperator op = assemble_continuum(spec, theta, c);
    EigResult r = smallest_eig(op, std::min(1e-9, tol), 100000, tol / 8);
    out.raws.push_back(r.value);
    out.raw_last = r.value;
    out.final_n = n;
    if (std::isfinite(prev) &&
        std::abs(prev - r.value) < tol + rel_tol * std::abs(r.value)) {
      // Second-order scheme: eliminate the h^2 term from the last pair.
      out.value = r.value + (r.value - prev) / 3.0;
      out.converged = true;
      return out;
    }
    prev = r.value;
  }
  if (out.raws.size() >= 2) {
    size_t k = out.raws.size();
    out.value = out.raws[k - 1] + (out.raws[k - 1] - out.raws[k - 2]) / 3.0;
  } else if (!out.raws.empty()) {
    out.value = out.raws.back();
  }
  out.converged = false;
  return out;
}

/// Continuum Rayleigh quotient pieces of a piecewise-multilinear g:
/// norm2 and grad2 exact via the cube Fourier identities, pot by
/// tensor-product Gauss-Legendre per cube.
struct ContinuumRayleigh {
  double grad2 = 0.0;  // theta^2 ||grad g||^2
  double pot = 0.0;    // <g, V g>
  double norm2 = 0.0;  // ||g||^2
};

inline ContinuumRayleigh rayleigh_multilinear(const MultilinearFunction& g,
                                              const PotentialSpec& spec,
                                              double theta, int quad_order = 8) {
  if (quad_order < 4)
    throw std::invalid_argument("rayleigh_multilinear: quad_order >= 4");
  const LatticeBox& box = g.box();
  const int d = box.dim;
  ContinuumRayleigh out;
  out.norm2 = g.norm2();
  if (!(out.norm2 > 0)) throw std::invalid_argument("rayleigh_multilinear: empty support");
  out.grad2 = theta * theta * g.dirichlet_form();

  std::vector<int> y(d);
  std::vector<double> lo(d), hi(d);
  const std::int64_t cubes = box.cube_count();
  for (std::int64_t c = 0; c < cubes; ++c) {
    box.cube_base(c, y);
    for (int i = 0; i < d; ++i) {
      lo[i] = y[i] * theta;
      hi[i] = lo[i] + theta;
    }
    out.pot += integrate_box(
        [&](std::span<const double> x) {
          double gv = g.eval(x);
          return spec(x) * gv * gv;
        },
        lo, hi, quad_order);
  }
  return out;
}

/// Closed-form semiclassical upper bound for potentials behaving like
/// H ||x||^p near the minimum: the minimum over sigma of the Gaussian trial
/// energy  phi(sigma) = d theta^2 / (2 sigma^2) + b sigma^p  with
/// b = 2^{(p+d)/2} H Gamma((p+d)/2) / Gamma(d/2).  Scales as theta^{2p/(p+2)}.
struct GaussianBound {
  double value = 0.0;
  double sigma = 0.0;  // minimizing width
};

inline GaussianBound gaussian_upper_bound(double H, int p, int d, double theta) {
  if (p < 2 || p % 2 != 0)
    throw std::invalid_argument("gaussian_upper_bound: p even >= 2");
  if (d < 1 || !(H > 0) || !(theta > 0))
    throw std::invalid_argument("gaussian_upper_bound: bad arguments");
  const double a = 0.5 * d * theta * theta;
  const double b = std::pow(2.0, 0.5 * (p + d)) * H *
                   std::tgamma(0.5 * (p + d)) / std::tgamma(0.5 * d);
  GaussianBound out;
  out.sigma = std::pow(2.0 * a / (p * b), 1.0 / (p + 2));
  out.value = a / (out.sigma * out.sigma) + b * std::pow(out.sigma, p);
  return out;
}

/// Least-squares slope of log mu_B vs log theta over a sweep.
struct SlopeFit {
  double slope = 0.0;
  double bracket_lo = 0.0;  // 2p/(p+2), always
  double bracket_hi = 0.0;  // 2p/(p+1) for d <= 2, else 2p/(p+2)
  std::vector<double> mus;
};

inline SlopeFit slope_fit_muB(const PotentialSpec& spec, int p,
                              const std::vector<double>& thetas, GridCell cell,
                              double tol = 1e-8, double rel_tol = 1e-4) {
  if (thetas.size() < 4)
    throw std::invalid_argument("slope_fit_muB: need >= 4 theta values");
  SlopeFit out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double th : thetas) {
    // slope fits need relative accuracy of mu, not absolute
    MuBResult r = mu_B(spec, th, cell, tol, 1 << 13, rel_tol);
    if (!r.converged)
      throw std::runtime_error("slope_fit_muB: mu_B not converged");
    if (!(r.value > 1e-14))
      throw std::runtime_error("slope_fit_muB: vanishing mu_B, slope undefined");
    out.mus.push_back(r.value);
    double lx = std::log(th), ly = std::log(r.value);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  const double m = static_cast<double>(thetas.size());
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  out.bracket_lo = 2.0 * p / (p + 2.0);
  out.bracket_hi = spec.dim() <= 2 ? 2.0 * p / (p + 1.0) : out.bracket_lo;
  return out;
}

}  // namespace gse
