#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gse {

/// Coercivity triple (t0, K, P): V(y) <= t with t <= t0 forces y within
/// K * t^(1/p) of a critical point of order p <= P.
struct Coercivity {
  double t0 = 0.0;
  double K = 1.0;
  int P = 2;
};

/// A Z^d-periodic nonnegative potential together with the analytic metadata
/// consumed by the bound formulas (Lipschitz constant L, directional
/// derivative bound M_P, coercivity parameters, sup norm).
class PotentialSpec {
 public:
  using EvalFn = std::function<double(std::span<const double>)>;

  PotentialSpec() = default;
  PotentialSpec(int dim, EvalFn eval, double lipschitz, double deriv_bound,
                double sup_norm, Coercivity coer, std::string name,
                bool estimated = false)
      : dim_(dim),
        eval_(std::move(eval)),
        lipschitz_(lipschitz),
        deriv_bound_(deriv_bound),
        sup_norm_(sup_norm),
        coercivity_(coer),
        name_(std::move(name)),
        estimated_(estimated) {}

  int dim() const { return dim_; }
  double lipschitz() const { return lipschitz_; }
  double deriv_bound() const { return deriv_bound_; }
  double sup_norm() const { return sup_norm_; }
  const Coercivity& coercivity() const { return coercivity_; }
  const std::string& name() const { return name_; }
  bool estimated() const { return estimated_; }

  double operator()(std::span<const double> x) const { return eval_(x); }
  double operator()(double x) const {
    const double xv[1] = {x};
    return eval_(std::span<const double>(xv, 1));
  }

  /// Scaled copy V/s (metadata scales linearly).
  PotentialSpec scaled(double s) const {
    EvalFn base = eval_;
    return PotentialSpec(
        dim_, [base, s](std::span<const double> x) { return base(x) / s; },
        lipschitz_ / s, deriv_bound_ / s, sup_norm_ / s, coercivity_,
        name_ + "/scaled", estimated_);
  }

 private:
  int dim_ = 1;
  EvalFn eval_;
  double lipschitz_ = 0.0;
  double deriv_bound_ = 0.0;
  double sup_norm_ = 0.0;
  Coercivity coercivity_;
  std::string name_;
  bool estimated_ = false;
};

/// Almost-Mathieu potential V(x) = lambda*(2 - 2 cos(2 pi x)) in d=1.
/// Metadata: sup 4L, Lipschitz 4*pi*lambda, M_P = 8*pi^2*lambda,
/// coercivity (4*lambda, 1/(2*pi*sqrt(lambda)), 2).
inline PotentialSpec make_almost_mathieu(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("almost_mathieu: lambda must be > 0");
  auto eval = [lambda](std::span<const double> x) {
    return lambda * (2.0 - 2.0 * std::cos(2.0 * M_PI * x[0]));
  };
  Coercivity c{4.0 * lambda, 1.0 / (2.0 * M_PI * std::sqrt(lambda)), 2};
  return PotentialSpec(1, eval, 4.0 * M_PI * lambda, 8.0 * M_PI * M_PI * lambda,
                       4.0 * lambda, c, "almost_mathieu");
}

/// Identically-zero potential in dimension d.
inline PotentialSpec make_zero(int dim) {
  auto eval = [](std::span<const double>) { return 0.0; };
  // t0 = +inf: coercivity is vacuous for V == 0 and must not block bound
  // applicability checks.
  Coercivity c{std::numeric_limits<double>::infinity(), 1.0, 2};
  return PotentialSpec(dim, eval, 0.0, 0.0, 0.0, c, "zero");
}

namespace detail {
inline double separable_power_eval(std::span<const double> x, int p, double H) {
  double s = 0.0;
  for (double xi : x) {
    double t = std::sin(M_PI * xi) / M_PI;  // ~ xi near lattice points
    s += std::pow(t, p);
  }
  return H * s;
}
}  // namespace detail

PotentialSpec estimate_metadata(const PotentialSpec& spec, int samples);

/// Z^d-periodic potential V(x) = H * sum_i (sin(pi x_i)/pi)^p with even p.
/// Vanishes to order exactly p at lattice points and matches H*||x||^p near
/// the origin in d=1. Metadata is filled by dense sampling and flagged as
/// estimated.
inline PotentialSpec make_separable_power(int dim, int p, double H) {
  if (p < 2 || p % 2 != 0)
    throw std::invalid_argument("separable_power: p must be even and >= 2");
  if (!(H > 0.0)) throw std::invalid_argument("separable_power: H must be > 0");
  auto eval = [p, H](std::span<const double> x) {
    return detail::separable_power_eval(x, p, H);
  };
  PotentialSpec raw(dim, eval, 0.0, 0.0, 0.0, Coercivity{0, 1, p},
                    "separable_power");
  PotentialSpec est = estimate_metadata(raw, 1 << 11);
  // Coercivity near the minimum: V ~ H*|x_i|^p per axis, so |y - m| <=
  // (t/H)^(1/p) per axis up to the sine flattening; K from sampling.
  double K = 0.0;
  int grid = 4096;
  for (int i = 1; i <= grid / 2; ++i) {
    double y = static_cast<double>(i) / grid * 0.5;
    double xv[3] = {y, 0.0, 0.0};
    double t = est(std::span<const double>(xv, static_cast<size_t>(dim)));
    if (t > 0) K = std::max(K, y / std::pow(t, 1.0 / p));
  }
  Coercivity c{detail::separable_power_eval(std::vector<double>{0.25, 0, 0}, p, H),
               1.05 * K * std::sqrt(static_cast<double>(dim)), p};
  return PotentialSpec(
      dim, eval, est.lipschitz(), est.deriv_bound(), est.sup_norm(), c,
      "separable_power", true);
}

/// Fill lipschitz, sup_norm and deriv_bound of an evaluation-only spec by
/// dense finite-difference sampling over one period; sampled values are
/// inflated by 1.05 so the bound formulas stay conservative.
inline PotentialSpec estimate_metadata(const PotentialSpec& spec, int samples) {
  if (samples < 1000) throw std::invalid_argument("estimate_metadata: samples >= 1000");
  const int d = spec.dim();
  // Per-axis sample count, capped so the total grid stays tractable in d=3.
  int n = samples;
  while (std::pow(static_cast<double>(n), d) > 4e6) n /= 2;
  if (n < 32) n = 32;

  double sup = 0.0, lip = 0.0, d2 = 0.0;
  std::vector<double> x(d), xp(d), xm(d);
  std::vector<int> idx(d, 0);
  const double h = 1.0 / n;
  const double fd = 1e-5;
  while (true) {
    for (int i = 0; i < d; ++i) x[i] = idx[i] * h;
    double v = spec(x);
    if (!std::isfinite(v))
      throw std::runtime_error("estimate_metadata: non-finite potential value");
    sup = std::max(sup, v);
    for (int i = 0; i < d; ++i) {
      xp = x; xm = x;
      xp[i] += fd; xm[i] -= fd;
      double g = (spec(xp) - spec(xm)) / (2 * fd);
      lip = std::max(lip, std::abs(g));
      double s = (spec(xp) - 2 * v + spec(xm)) / (fd * fd);
      d2 = std::max(d2, std::abs(s));
    }
    int axis = 0;
    while (axis < d && ++idx[axis] == n) idx[axis++] = 0;
    if (axis == d) break;
  }
  // Gradient norm over all directions is at most sqrt(d) * max axis slope.
  lip *= std::sqrt(static_cast<double>(d));
  // M_P bounds D_v^k D_u V / k! for k <= P-1; for P=2 that is max(|DV|, |D2V|).
  double mp = std::max(lip, d2);
  return PotentialSpec(d, [spec](std::span<const double> xx) { return spec(xx); },
                       1.05 * lip, 1.05 * mp, 1.05 * sup, spec.coercivity(),
                       spec.name() + "/estimated", true);
}

/// Parse a config-style potential selector:
///   almost_mathieu{lambda}, separable_power{dim,p,H}, zero{dim}
inline PotentialSpec parse_potential(const std::string& s) {
  auto open = s.find('{');
  auto close = s.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::invalid_argument("potential selector must look like name{args}: " + s);
  std::string name = s.substr(0, open);
  std::string args = s.substr(open + 1, close - open - 1);
  std::vector<double> vals;
  size_t pos = 0;
  while (pos < args.size()) {
    size_t comma = args.find(',', pos);
    if (comma == std::string::npos) comma = args.size();
    vals.push_back(std::stod(args.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (name == "almost_mathieu") {
    if (vals.size() != 1) throw std::invalid_argument("almost_mathieu{lambda}");
    return make_almost_mathieu(vals[0]);
  }
  if (name == "separable_power") {
    if (vals.size() != 3) throw std::invalid_argument("separable_power{dim,p,H}");
    return make_separable_power(static_cast<int>(vals[0]), static_cast<int>(vals[1]),
                                vals[2]);
  }
  if (name == "zero") {
    if (vals.size() != 1) throw std::invalid_argument("zero{dim}");
    return make_zero(static_cast<int>(vals[0]));
  }
  throw std::invalid_argument("unknown potential: " + name);
}

}  // namespace gse
