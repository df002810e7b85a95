#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace gse {

/// Matrix-free symmetric positive-semidefinite operator with an a priori
/// spectral upper bound (e.g. 4d + ||V||_inf for discrete Schroedinger
/// operators).
struct SymmetricOperator {
  std::int64_t n = 0;
  std::function<void(const double*, double*)> apply;
  double upper_bound = 0.0;

  Eigen::VectorXd apply_vec(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out(n);
    apply(v.data(), out.data());
    return out;
  }
};

struct EigResult {
  double value = 0.0;
  std::vector<double> vector;  // unit norm, sign-fixed
  double residual = 0.0;       // ||A v - value * v||
  int iterations = 0;
  bool converged = false;
  bool converged_by_value = false;  // stagnation accepted instead of residual
};

namespace detail {

inline void sign_fix(std::vector<double>& v) {
  double best = 0.0;
  for (double x : v)
    if (std::abs(x) > std::abs(best)) best = x;
  if (best < 0)
    for (double& x : v) x = -x;
}

/// One full run of thick-restart Lanczos (full reorthogonalization) from a
/// given seed. Returns the best Ritz pair found.
inline EigResult lanczos_run(const SymmetricOperator& op, Eigen::VectorXd v0,
                             double tol, int max_iter, double value_tol) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const std::int64_t n = op.n;
  const int m = static_cast<int>(std::min<std::int64_t>(n, 256));  // basis cap
  const int keep = std::min(m / 2, 24);                            // thick restart

  MatrixXd V(n, m);   // orthonormal basis
  MatrixXd AV(n, m);  // A times basis columns
  int nb = 0;         // current basis size

  v0.normalize();
  V.col(0) = v0;
  AV.col(0) = op.apply_vec(v0);
  nb = 1;

  EigResult res;
  double prev_value = std::numeric_limits<double>::infinity();
  int stagnant = 0;
  int it = 0;

  VectorXd ritz_vec;  // current best Ritz vector in R^n
  while (true) {
    // Expand the basis to m columns (or until the Krylov space exhausts).
    bool exhausted = false;
    while (nb < m && it < max_iter) {
      VectorXd w = AV.col(nb - 1);
      // Full reorthogonalization, two passes.
      for (int pass = 0; pass < 2; ++pass)
        w -= V.leftCols(nb) * (V.leftCols(nb).transpose() * w);
      double beta = w.norm();
      if (beta < 1e-13 * std::max(1.0, op.upper_bound)) {
        // Invariant subspace found; inject a random direction to continue
        // only if the space is smaller than n.
        if (nb >= n) { exhausted = true; break; }
        std::mt19937_64 rng(0x9e3779b97f4a7c15ULL + static_cast<unsigned long long>(nb));
        std::normal_distribution<double> nd;
        for (std::int64_t i = 0; i < n; ++i) w[i] = nd(rng);
        for (int pass = 0; pass < 2; ++pass)
          w -= V.leftCols(nb) * (V.leftCols(nb).transpose() * w);
        beta = w.norm();
        if (beta < 1e-13) { exhausted = true; break; }
      }
      w /= beta;
      V.col(nb) = w;
      AV.col(nb) = op.apply_vec(w);
      ++nb;
      ++it;
    }

    // Rayleigh-Ritz on the current basis.
    MatrixXd B = V.leftCols(nb).transpose() * AV.leftCols(nb);
    B = 0.5 * (B + B.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(B);
    const VectorXd& evals = es.eigenvalues();
    const MatrixXd& Y = es.eigenvectors();

    ritz_vec = V.leftCols(nb) * Y.col(0);
    VectorXd Aritz = AV.leftCols(nb) * Y.col(0);
    double lambda = evals(0);
    double rnorm = (Aritz - lambda * ritz_vec).norm();

    res.value = lambda;
    res.residual = rnorm;
    res.iterations = it;

    if (rnorm <= tol) {
      res.converged = true;
      break;
    }
    if (value_tol > 0 && std::abs(lambda - prev_value) <=
                             value_tol * std::max(1.0, std::abs(lambda))) {
      if (++stagnant >= 2) {
        res.converged = true;
        res.converged_by_value = true;
        break;
      }
    } else {
      stagnant = 0;
    }
    prev_value = lambda;
    if (it >= max_iter || exhausted) break;

    // Thick restart: keep the lowest Ritz vectors, re-expand from there.
    int l = std::min(keep, nb);
    MatrixXd W = V.leftCols(nb) * Y.leftCols(l);
    MatrixXd AW = AV.leftCols(nb) * Y.leftCols(l);
    V.leftCols(l) = W;
    AV.leftCols(l) = AW;
    nb = l;
  }

  ritz_vec.normalize();
  res.vector.assign(ritz_vec.data(), ritz_vec.data() + n);
  sign_fix(res.vector);
  return res;
}

}  // namespace detail

/// Smallest eigenpair by thick-restart Lanczos with full reorthogonalization.
/// Convergence is declared on residual <= tol; if value_tol > 0, stagnation of
/// the Ritz value across restarts is also accepted (flagged in the result).
/// Seeded with the all-ones vector (ground vectors of the target operators are
/// near-constant); a random-seed retry guards against unlucky starts.
inline EigResult smallest_eig(const SymmetricOperator& op, double tol,
                              int max_iter, double value_tol = 0.0) {
  if (!(tol > 0)) throw std::invalid_argument("smallest_eig: tol must be > 0");
  if (op.n <= 0) throw std::invalid_argument("smallest_eig: empty operator");

  Eigen::VectorXd seed = Eigen::VectorXd::Ones(op.n);
  // Tiny deterministic perturbation so the seed is never exactly orthogonal
  // to the ground vector of arbitrary symmetric test operators.
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  for (std::int64_t i = 0; i < op.n; ++i) seed[i] += 1e-3 * nd(rng);

  EigResult best = detail::lanczos_run(op, seed, tol, max_iter, value_tol);
  if (!best.converged || best.residual > tol) {
    Eigen::VectorXd rseed(op.n);
    for (std::int64_t i = 0; i < op.n; ++i) rseed[i] = nd(rng);
    EigResult retry = detail::lanczos_run(op, rseed, tol, max_iter, value_tol);
    bool retry_better =
        (retry.converged && !best.converged) ||
        (retry.converged == best.converged && retry.value < best.value);
    if (retry_better) best = retry;
  }
  return best;
}

/// Dense brute-force oracle: materializes the matrix column by column and
/// runs a direct symmetric eigensolve. Independent verification path.
inline EigResult dense_eig_oracle(const SymmetricOperator& op) {
  if (op.n > 2048) throw std::invalid_argument("dense_eig_oracle: n <= 2048");
  const int n = static_cast<int>(op.n);
  Eigen::MatrixXd A(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n), col(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    op.apply(e.data(), col.data());
    A.col(j) = col;
    e[j] = 0.0;
  }
  A = 0.5 * (A + A.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  EigResult res;
  res.value = es.eigenvalues()(0);
  Eigen::VectorXd v = es.eigenvectors().col(0);
  res.residual = (A * v - res.value * v).norm();
  res.vector.assign(v.data(), v.data() + n);
  detail::sign_fix(res.vector);
  res.converged = true;
  return res;
}

}  // namespace gse
