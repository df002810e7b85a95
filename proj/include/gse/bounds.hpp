#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "continuum_op.hpp"
#include "discrete_op.hpp"
#include "potential.hpp"
#include "quadrature.hpp"

namespace gse {

/// Explicit semiclassical comparison bound evaluated from potential metadata:
/// an upper bound on mu(B_theta) in terms of mu(A_theta). Applicability
/// preconditions are reported, never thrown, so sweeps can distinguish
/// "holds" from "vacuous".
struct ComparisonBound {
  double value = 0.0;
  bool applicable = false;
  std::string reason;  // why not applicable, empty when applicable
};

inline ComparisonBound thm_comparison_rhs(double mu_A_val, double eps,
                                          const PotentialSpec& spec, double theta,
                                          double q) {
  ComparisonBound out;
  const double L = spec.lipschitz();
  const double M = spec.deriv_bound();
  const Coercivity& co = spec.coercivity();
  const int d = spec.dim();
  if (!(q > 0.0 && q < 1.0)) { out.reason = "q outside (0,1)"; return out; }
  if (std::pow(theta, q) > co.t0) { out.reason = "theta^q exceeds t0"; return out; }
  if (!(mu_A_val + eps < 1.0)) { out.reason = "mu_A + eps >= 1"; return out; }
  const double Lt = L * std::pow(theta, 1.0 - q);
  if (!(Lt < 1.0)) { out.reason = "L*theta^(1-q) >= 1"; return out; }

  const double P = co.P;
  const double sampling = 2.0 * M * co.K * std::sqrt(static_cast<double>(d)) *
                          std::pow(theta, 1.0 + q * (P - 1.0) / P);
  out.value = mu_A_val + (1.0 / (1.0 - mu_A_val - eps)) *
                             (sampling +
                              (mu_A_val + eps + 2.0 * Lt / (1.0 - Lt)) * mu_A_val);
  out.applicable = true;
  return out;
}

/// Worst-case ratio a(theta) of continuous to discrete cube-averages of V:
/// smallest a with theta^{-d} int_{C(y)} V <= a * 2^{-d} sum_{corners} V(k)
/// over all cube bases y in theta Z^d mod 1. Returns nullopt when some cube's
/// corner sum vanishes while its integral does not (a does not exist).
/// squared=true uses V^2 on both sides.
inline std::optional<double> a_parameter(const PotentialSpec& spec, double theta,
                                         bool squared = false, int resolution = 256,
                                         int quad_order = 8) {
  const int d = spec.dim();
  // Distinct cube positions mod 1: q per axis for rational theta = p/q,
  // otherwise a quasi-dense scan of j*theta mod 1.
  int per_axis = resolution;
  if (auto pq = rational_approx(theta)) per_axis = pq->second;

  auto V = [&](std::span<const double> x) {
    double v = spec(x);
    return squared ? v * v : v;
  };

  double a = 0.0;
  std::vector<int> j(d, 0);
  std::vector<double> base(d), lo(d), hi(d), corner(d);
  const double vol = std::pow(theta, d);
  const double tiny = 1e-13 * std::max(1.0, spec.sup_norm());
  while (true) {
    for (int i = 0; i < d; ++i) {
      base[i] = std::fmod(j[i] * theta, 1.0);
      lo[i] = base[i];
      hi[i] = base[i] + theta;
    }
    double integral = integrate_box(V, lo, hi, quad_order) / vol;
    double corner_sum = 0.0;
    for (unsigned b = 0; b < (1u << d); ++b) {
      for (int i = 0; i < d; ++i) corner[i] = base[i] + ((b >> i) & 1u) * theta;
      corner_sum += V(corner);
    }
    corner_sum /= std::pow(2.0, d);
    if (corner_sum <= tiny) {
      if (integral > tiny) return std::nullopt;  // a does not exist
    } else {
      a = std::max(a, integral / corner_sum);
    }
    int ax = 0;
    while (ax < d && ++j[ax] == per_axis) j[ax++] = 0;
    if (ax == d) break;
  }
  return a;
}

enum class CdVariant { thm14, thm41 };

/// Dimension constant c_d of the discrete-to-continuum comparison, with its
/// components.
struct CdConstant {
  double value = 0.0;
  double first_term = 0.0;   // 3^d/2^d + 5*3^d
  double second_term = 0.0;  // 4*(3/2)^d*a  or  (3/2)^d * a/r
  double alpha = 0.0;        // 1/(10*2^d)   (thm41 only)
  double r = 1.0;            // corner-ratio constant (thm41 only)
};

inline CdConstant c_d_constant(int d, double a, CdVariant variant) {
  if (!(a > 0)) throw std::invalid_argument("c_d_constant: a > 0 required");
  CdConstant out;
  const double p32 = std::pow(1.5, d);
  const double p3 = std::pow(3.0, d);
  out.first_term = p32 + 5.0 * p3;
  if (variant == CdVariant::thm14) {
    out.second_term = 4.0 * p32 * a;
  } else {
    out.alpha = 1.0 / (10.0 * std::pow(2.0, d));
    const double s = std::sqrt(std::pow(2.0, d) * out.alpha);
    const double sr = (std::sqrt(1.0 - out.alpha) - s) / (1.0 + s);
    // 1 - alpha > 2^d alpha for alpha = 1/(10*2^d), so sqrt(r) > 0.
    if (!(sr > 0)) throw std::logic_error("c_d_constant: nonpositive sqrt(r)");
    out.r = sr * sr;
    out.second_term = p32 * a / out.r;
  }
  out.value = std::max(out.first_term, out.second_term);
  return out;
}

/// Result of checking c_d * mu(A) >= mu(B) at one theta (the a-ratio
/// comparison theorem). Requires ||V||_inf <= 1; larger potentials are
/// rescaled to V/||V||_inf and the rescaling recorded.
struct CdCheck {
  double mu_A_hat = 0.0;
  double mu_B_hat = 0.0;
  double a = 0.0;
  double c_d = 0.0;
  double margin = 0.0;  // c_d*mu_A - mu_B + tol
  double rescale = 1.0;
  bool a_exists = false;
  bool holds = false;
  bool converged = false;
};

inline CdCheck verify_thm41(const PotentialSpec& spec_in, double theta,
                            double tol = 1e-8, double mu_tol = 1e-7,
                            CdVariant variant = CdVariant::thm14,
                            bool squared = false) {
  CdCheck out;
  PotentialSpec spec = spec_in;
  if (spec.sup_norm() > 1.0) {
    out.rescale = spec.sup_norm();
    spec = spec_in.scaled(out.rescale);
  }
  auto a = a_parameter(spec, theta, squared);
  if (!a) return out;  // theorem not applicable, recorded via a_exists=false
  out.a_exists = true;
  out.a = *a;
  out.c_d = c_d_constant(spec.dim(), out.a, variant).value;
  MuResult ma = mu_A(spec, theta, {}, mu_tol);
  MuBResult mb = mu_B(spec, theta, GridCell{spec.dim(), 64}, mu_tol);
  out.mu_A_hat = ma.value;
  out.mu_B_hat = mb.value;
  out.converged = ma.converged && mb.converged;
  out.margin = out.c_d * out.mu_A_hat - out.mu_B_hat + tol;
  out.holds = out.margin >= 0.0;
  return out;
}

/// Ratio bound mu(B)/mu(A) <= value for the almost-Mathieu potential,
/// general exponent q; mu_A may be the computed value or its a-priori
/// theta^2 bound.
inline ComparisonBound mathieu_ratio_bound(double lambda, double theta,
                                           double mu_A_val, double q) {
  ComparisonBound out;
  const double den = 1.0 - 4.0 * M_PI * lambda * std::pow(theta, 1.0 - q);
  const double sl = std::sqrt(lambda);
  // The value is always evaluated (two-path consistency checks use it even
  // outside the valid range); applicability is reported separately.
  out.value = 1.0 + (1.0 / (1.0 - mu_A_val)) *
                        (8.0 * M_PI * sl * std::pow(theta, q / 2.0 - 1.0 / 3.0) +
                         mu_A_val +
                         8.0 * M_PI * lambda * std::pow(theta, 1.0 - q) / den);
  if (!(mu_A_val < 1.0)) { out.reason = "mu_A >= 1"; return out; }
  if (!(den > 0.0)) { out.reason = "Lipschitz denominator nonpositive"; return out; }
  out.applicable = true;
  return out;
}

/// A-priori small-theta bound on mu(A_theta) for almost-Mathieu: the
/// constant 8^{1/4} pi sqrt(lambda) times theta^2.
inline double mathieu_muA_apriori(double lambda, double theta) {
  return std::pow(8.0, 0.25) * M_PI * std::sqrt(lambda) * theta * theta;
}

/// Full record for one (potential, theta) sweep point.
struct BoundReport {
  std::string potential;
  int dim = 1;
  double theta = 0.0;
  double mu_A_hat = 0.0;
  double mu_B_hat = 0.0;
  double ratio = 0.0;  // mu_A / mu_B (0 when mu_B == 0)
  bool mu_A_converged = false;
  bool mu_B_converged = false;
  // direct comparison
  bool thm11_holds = false;
  double thm11_margin = 0.0;
  // explicit metadata bound
  double q = 0.0;
  ComparisonBound thm31;
  bool thm31_holds = false;  // applicable -> value >= mu_B
  // a-ratio comparison
  CdCheck thm41;
};

}  // namespace gse
