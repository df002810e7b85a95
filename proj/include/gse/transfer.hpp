#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "continuum_op.hpp"
#include "discrete_op.hpp"
#include "lattice.hpp"
#include "multilinear.hpp"
#include "potential.hpp"
#include "quadrature.hpp"

namespace gse {

/// Smooth test function with analytic gradient and a declared compact
/// support radius (support contained in [-R, R]^d).
struct SmoothTestFunction {
  int dim = 1;
  std::function<double(std::span<const double>)> eval;
  std::function<void(std::span<const double>, std::span<double>)> grad;
  double support_radius = 1.0;
  std::string name;

  double operator()(std::span<const double> x) const { return eval(x); }
};

/// Gaussian bump exp(-c ||x||^2) truncated by a smooth cutoff at radius R
/// (mass beyond R is negligible for c R^2 >> 1; the gradient stays exact).
inline SmoothTestFunction make_gaussian_bump(int dim, double c, double R) {
  SmoothTestFunction g;
  g.dim = dim;
  g.support_radius = R;
  g.name = "gaussian_bump";
  g.eval = [c](std::span<const double> x) {
    double r2 = 0;
    for (double xi : x) r2 += xi * xi;
    return std::exp(-c * r2);
  };
  g.grad = [c](std::span<const double> x, std::span<double> out) {
    double r2 = 0;
    for (double xi : x) r2 += xi * xi;
    double e = std::exp(-c * r2);
    for (size_t i = 0; i < x.size(); ++i) out[i] = -2.0 * c * x[i] * e;
  };
  return g;
}

/// Product of cosine half-wave bumps: prod_i cos(pi x_i / (2R))^2 on
/// [-R, R]^d, zero outside (C^1 across the boundary).
inline SmoothTestFunction make_cosine_bump(int dim, double R) {
  SmoothTestFunction g;
  g.dim = dim;
  g.support_radius = R;
  g.name = "cosine_bump";
  const double w = M_PI / (2.0 * R);
  g.eval = [w, R](std::span<const double> x) {
    double p = 1.0;
    for (double xi : x) {
      if (std::abs(xi) >= R) return 0.0;
      double c = std::cos(w * xi);
      p *= c * c;
    }
    return p;
  };
  g.grad = [w, R](std::span<const double> x, std::span<double> out) {
    const size_t d = x.size();
    for (size_t i = 0; i < d; ++i) out[i] = 0.0;
    for (double xi : x)
      if (std::abs(xi) >= R) return;
    for (size_t i = 0; i < d; ++i) {
      double p = 1.0;
      for (size_t j = 0; j < d; ++j) {
        double c = std::cos(w * x[j]);
        if (j == i)
          p *= -2.0 * w * c * std::sin(w * x[j]);
        else
          p *= c * c;
      }
      out[i] = p;
    }
  };
  return g;
}

/// Sampling transfer f_eta(k theta) := g(k theta + eta).
inline LatticeFunction sample(const SmoothTestFunction& g, const LatticeBox& box) {
  LatticeFunction f(box);
  const int d = box.dim;
  std::vector<int> k(d);
  std::vector<double> x(d);
  for (std::int64_t idx = 0; idx < box.size(); ++idx) {
    box.multi_of(idx, k);
    box.site_coord(k, x);
    f.values[static_cast<size_t>(idx)] = g(x);
  }
  return f;
}

/// The three lattice quadratic forms of a sampled function: (||f||^2,
/// sum over lattice edges (f(u)-f(v))^2, sum_k V(k theta + eta) f(k)^2).
struct SampledForms {
  double norm2 = 0.0;
  double lap = 0.0;
  double pot = 0.0;
};

inline SampledForms lattice_forms(const LatticeFunction& f,
                                  const PotentialSpec& spec) {
  const LatticeBox& box = f.box;
  const int d = box.dim;
  SampledForms out;
  std::vector<int> k(d), kn(d);
  std::vector<double> x(d);
  for (std::int64_t idx = 0; idx < box.size(); ++idx) {
    box.multi_of(idx, k);
    double v = f.values[static_cast<size_t>(idx)];
    out.norm2 += v * v;
    box.site_coord(k, x);
    out.pot += spec(x) * v * v;
    for (int i = 0; i < d; ++i) {
      kn = k;
      kn[i] += 1;
      double w;
      if (box.boundary == Boundary::periodic) {
        kn[i] = box.wrap(kn[i]);
        w = f.at(kn);
      } else if (kn[i] <= box.kmax()) {
        w = f.at(kn);
      } else {
        w = 0.0;  // Dirichlet edge to the zero exterior
      }
      double diff = v - w;
      out.lap += diff * diff;
    }
  }
  return out;
}

/// eta-averaged quadratic forms of f_eta over [0, theta]^d by tensor
/// Gauss-Legendre quadrature: E_eta[||f_eta||^2], E_eta[<f_eta, L f_eta>],
/// E_eta[<f_eta, V f_eta>]. The identities say these equal theta^{-d}||g||^2,
/// <= theta^{-(d-2)}||grad g||^2, and theta^{-d}<g, V g>.
struct ExpectedForms {
  double norm2 = 0.0;
  double lap = 0.0;
  double pot = 0.0;
};

inline ExpectedForms expected_sampling_forms(const SmoothTestFunction& g,
                                             const PotentialSpec& spec,
                                             double theta, int eta_quad = 8) {
  if (eta_quad < 8)
    throw std::invalid_argument("expected_sampling_forms: eta_quad >= 8");
  const int d = g.dim;
  // Box large enough that the sampled support fits with margin.
  int N = static_cast<int>(std::ceil(g.support_radius / theta)) + 2;
  GaussLegendre gl(eta_quad);

  ExpectedForms out;
  std::vector<int> idx(d, 0);
  std::vector<double> eta(d);
  while (true) {
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      eta[i] = 0.5 * theta * (1.0 + gl.nodes[idx[i]]);
      w *= 0.5 * gl.weights[idx[i]];  // weight of the normalized average
    }
    LatticeBox box = LatticeBox::dirichlet_box(d, theta, N, eta);
    LatticeFunction f = sample(g, box);
    SampledForms sf = lattice_forms(f, spec);
    if (!std::isfinite(sf.norm2 + sf.lap + sf.pot))
      throw std::runtime_error("expected_sampling_forms: non-finite quadrature");
    out.norm2 += w * sf.norm2;
    out.lap += w * sf.lap;
    out.pot += w * sf.pot;
    int a = 0;
    while (a < d && ++idx[a] == eta_quad) idx[a++] = 0;
    if (a == d) break;
  }
  return out;
}

/// Continuum reference values ||g||^2, ||grad g||^2, <g, V g> by quadrature
/// over the support box.
struct ContinuumForms {
  double norm2 = 0.0;
  double grad2 = 0.0;
  double pot = 0.0;
};

inline ContinuumForms continuum_forms(const SmoothTestFunction& g,
                                      const PotentialSpec& spec,
                                      int quad_order = 40) {
  const int d = g.dim;
  std::vector<double> lo(d, -g.support_radius), hi(d, g.support_radius);
  ContinuumForms out;
  std::vector<double> gr(d);
  out.norm2 = integrate_box(
      [&](std::span<const double> x) { double v = g(x); return v * v; }, lo, hi,
      quad_order);
  out.grad2 = integrate_box(
      [&](std::span<const double> x) {
        g.grad(x, gr);
        double s = 0;
        for (double gi : gr) s += gi * gi;
        return s;
      },
      lo, hi, quad_order);
  out.pot = integrate_box(
      [&](std::span<const double> x) {
        double v = g(x);
        return spec(x) * v * v;
      },
      lo, hi, quad_order);
  return out;
}

/// Direct check of the discrete <= continuum ground state comparison at a
/// single theta: mu_A(theta, eta=0) against mu_B(theta).
struct Thm11Instance {
  double mu_A_hat = 0.0;
  double mu_B_hat = 0.0;
  double margin = 0.0;  // mu_B*(1+rel) + abs - mu_A
  bool holds = false;
  bool converged = false;
};

inline Thm11Instance verify_thm11_instance(const PotentialSpec& spec, double theta,
                                           double tol, double rel_tol = 1e-3,
                                           double abs_tol = 1e-6,
                                           int max_radius = 1 << 14,
                                           int max_grid = 1 << 13) {
  MuResult a = mu_A(spec, theta, {}, tol, max_radius);
  MuBResult b = mu_B(spec, theta, GridCell{spec.dim(), 64}, tol, max_grid);
  Thm11Instance out;
  out.mu_A_hat = a.value;
  out.mu_B_hat = b.value;
  out.converged = a.converged && b.converged;
  out.margin = b.value * (1.0 + rel_tol) + abs_tol - a.value;
  out.holds = out.margin >= 0.0;
  return out;
}

}  // namespace gse
