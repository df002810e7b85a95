#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "eigensolve.hpp"
#include "lattice.hpp"
#include "potential.hpp"

namespace gse {

/// Best rational approximation p/q of x with q <= qmax, by continued
/// fractions; returns it only when |x - p/q| <= tol.
inline std::optional<std::pair<int, int>> rational_approx(double x, double tol = 1e-12,
                                                          int qmax = 1000) {
  long long p0 = 1, q0 = 0, p1 = static_cast<long long>(std::floor(x)), q1 = 1;
  double frac = x - std::floor(x);
  for (int it = 0; it < 64 && q1 <= qmax; ++it) {
    if (std::abs(x - static_cast<double>(p1) / q1) <= tol)
      return std::make_pair(static_cast<int>(p1), static_cast<int>(q1));
    if (frac < 1e-15) break;
    double inv = 1.0 / frac;
    long long a = static_cast<long long>(std::floor(inv));
    frac = inv - std::floor(inv);
    long long p2 = a * p1 + p0, q2 = a * q1 + q0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
  }
  return std::nullopt;
}

/// Truncated discrete Schroedinger operator on the box:
/// apply(f)(k) = 2d f(k) - sum_{j~k} f(j) + V(k*theta + eta) f(k).
inline SymmetricOperator assemble_discrete(const PotentialSpec& spec,
                                           const LatticeBox& box) {
  if (spec.dim() != box.dim)
    throw std::invalid_argument("assemble_discrete: dimension mismatch");
  const int d = box.dim;
  const std::int64_t n = box.size();
  const int axis = box.axis_size();

  // Diagonal: 2d + V at each site.
  auto diag = std::make_shared<std::vector<double>>(static_cast<size_t>(n));
  {
    std::vector<int> k(d);
    std::vector<double> x(d);
    for (std::int64_t idx = 0; idx < n; ++idx) {
      box.multi_of(idx, k);
      box.site_coord(k, x);
      (*diag)[static_cast<size_t>(idx)] = 2.0 * d + spec(x);
    }
  }

  // Row-major strides, axis 0 slowest.
  std::vector<std::int64_t> stride(d);
  stride[d - 1] = 1;
  for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * axis;

  const bool periodic = box.boundary == Boundary::periodic;
  SymmetricOperator op;
  op.n = n;
  op.upper_bound = 4.0 * d + spec.sup_norm();
  op.apply = [diag, stride, d, axis, n, periodic](const double* in, double* out) {
    std::vector<int> pos(d, 0);  // offset from kmin along each axis
    for (std::int64_t idx = 0; idx < n; ++idx) {
      double acc = (*diag)[static_cast<size_t>(idx)] * in[idx];
      for (int i = 0; i < d; ++i) {
        const std::int64_t s = stride[i];
        if (pos[i] + 1 < axis) acc -= in[idx + s];
        else if (periodic) acc -= in[idx + s - s * axis];
        if (pos[i] > 0) acc -= in[idx - s];
        else if (periodic) acc -= in[idx - s + s * axis];
      }
      out[idx] = acc;
      int a = d - 1;
      while (a >= 0 && ++pos[a] == axis) pos[a--] = 0;
    }
  };
  return op;
}

struct MuResult {
  double value = 0.0;
  bool converged = false;
  bool exact_periodic = false;  // computed on one rational-theta supercell
  int final_extent = 0;         // last radius N (dirichlet) or period q
  double residual = 0.0;
};

namespace detail {
inline MuResult solve_box(const PotentialSpec& spec, const LatticeBox& box,
                          double tol) {
  SymmetricOperator op = assemble_discrete(spec, box);
  // Residual tolerance stays primary; value stagnation (tied to the caller's
  // truncation tolerance) handles clustered bottom spectra of large boxes.
  EigResult r = smallest_eig(op, std::min(1e-9, tol), 100000, tol / 8);
  MuResult m;
  m.value = r.value;
  m.converged = r.converged;
  m.residual = r.residual;
  return m;
}
}  // namespace detail

/// Ground state energy of A_{theta,eta}, approximated from above.
/// Rational theta = p/q (detected by continued fractions): exact on one
/// periodic supercell of q sites per axis — the ground band bottom sits at
/// zero quasimomentum since the ground state is positive.
/// Otherwise: Dirichlet boxes with radius doubling and Cauchy stopping; the
/// Dirichlet sequence is non-increasing in N.
inline MuResult mu_A(const PotentialSpec& spec, double theta,
                     std::vector<double> eta, double tol,
                     int max_radius = 1 << 14) {
  if (!(tol > 0)) throw std::invalid_argument("mu_A: tol must be > 0");
  const int d = spec.dim();
  if (eta.empty()) eta.assign(d, 0.0);

  if (auto pq = rational_approx(theta)) {
    int q = pq->second;
    double sites = std::pow(static_cast<double>(q), d);
    if (q >= 2 && sites <= 4e5) {
      LatticeBox box = LatticeBox::periodic_box(d, theta, q, eta);
      MuResult m = detail::solve_box(spec, box, tol);
      m.exact_periodic = true;
      m.final_extent = q;
      return m;
    }
  }

  // Cap the site count per box (dimension-aware).
  const double site_budget = 6e5;
  MuResult last;
  double prev = std::numeric_limits<double>::infinity();
  for (int N = 64;; N *= 2) {
    if (N > max_radius) break;
    if (std::pow(2.0 * N + 1.0, d) > site_budget) break;
    LatticeBox box = LatticeBox::dirichlet_box(d, theta, N, eta);
    last = detail::solve_box(spec, box, tol);
    last.final_extent = N;
    if (last.value > prev + tol)
      throw std::runtime_error("mu_A: Dirichlet sequence not monotone");
    if (std::abs(prev - last.value) < tol) {
      last.converged = true;
      return last;
    }
    prev = last.value;
  }
  last.converged = false;
  return last;
}

/// Cube-local quadratic forms on C(y) = y + {0,theta}^d:
/// (sum f^2, sum over cube edges (f(u)-f(v))^2, sum V f^2).
struct LocalForms {
  double norm2 = 0.0;
  double lap = 0.0;
  double pot = 0.0;
};

inline LocalForms local_forms(const LatticeFunction& f, const PotentialSpec& spec,
                              std::span<const int> y) {
  const LatticeBox& box = f.box;
  const int d = box.dim;
  if (box.boundary == Boundary::dirichlet)
    for (int i = 0; i < d; ++i)
      if (y[i] < box.kmin() || y[i] + 1 > box.kmax())
        throw std::invalid_argument("local_forms: cube outside box");

  const unsigned corners = 1u << d;
  std::vector<double> val(corners);
  for (unsigned b = 0; b < corners; ++b) val[b] = f.corner(y, b);

  LocalForms out;
  std::vector<double> x(d);
  for (unsigned b = 0; b < corners; ++b) {
    out.norm2 += val[b] * val[b];
    for (int i = 0; i < d; ++i)
      x[i] = (y[i] + ((b >> i) & 1u)) * box.theta + box.eta[i];
    out.pot += spec(x) * val[b] * val[b];
    for (int i = 0; i < d; ++i) {
      if ((b >> i) & 1u) continue;  // each edge once, from its lower corner
      double diff = val[b] - val[b | (1u << i)];
      out.lap += diff * diff;
    }
  }
  return out;
}

/// Infimum of the union spectrum over shifts, approximated by minimizing
/// mu_A over a uniform eta grid (eta_i = i*theta/grid per axis; the endpoint
/// theta is lattice-shift equivalent to 0 and omitted).
inline MuResult union_spectrum_inf(const PotentialSpec& spec, double theta,
                                   int eta_grid, double tol) {
  if (eta_grid < 2) throw std::invalid_argument("union_spectrum_inf: eta_grid >= 2");
  const int d = spec.dim();
  std::vector<int> idx(d, 0);
  MuResult best;
  best.value = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<double> eta(d);
    for (int i = 0; i < d; ++i) eta[i] = idx[i] * theta / eta_grid;
    MuResult m = mu_A(spec, theta, eta, tol);
    if (m.value < best.value) best = m;
    int a = 0;
    while (a < d && ++idx[a] == eta_grid) idx[a++] = 0;
    if (a == d) break;
  }
  return best;
}

}  // namespace gse
