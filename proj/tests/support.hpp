#pragma once

// Shared generators and independent (Eigen-based) oracles for the tests.

#include <Eigen/Dense>

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <random>

#include "covsel/matrix.hpp"
#include "covsel/model.hpp"

namespace covsel::testing {

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  }
  return e;
}

inline Matrix from_eigen(const Eigen::MatrixXd& e) {
  Matrix m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  }
  return m;
}

inline double min_eigenvalue(const Matrix& m) {
  Eigen::MatrixXd e = to_eigen(m);
  e = 0.5 * (e + e.transpose()).eval();
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(e, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double lo = -1.0,
                            double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (double& v : m.values()) v = u(rng);
  return m;
}

/// Q·diag(eigs)·Qᵀ with a random orthogonal Q.
inline Matrix with_spectrum(const Eigen::VectorXd& eigs, std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(eigs.size());
  const Eigen::MatrixXd g = to_eigen(random_matrix(n, n, rng));
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd q = qr.householderQ();
  Matrix out = from_eigen(q * eigs.asDiagonal() * q.transpose());
  symmetrize(out);
  return out;
}

inline Matrix random_spd(std::size_t n, std::mt19937_64& rng, double lo = 0.2, double hi = 3.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd eigs(n);
  for (std::size_t i = 0; i < n; ++i) eigs(i) = u(rng);
  return with_spectrum(eigs, rng);
}

/// Sample covariance (about zero) of m standard-normal-ish samples mixed by a
/// random matrix; rank min(m, n).
inline EmpiricalCovariance random_sample_covariance(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  const Matrix mix = random_matrix(n, n, rng, -0.7, 0.7);
  Eigen::MatrixXd x(m, n);
  for (std::size_t s = 0; s < m; ++s) {
    Eigen::VectorXd v(n);
    for (std::size_t i = 0; i < n; ++i) v(i) = z(rng);
    x.row(s) = (to_eigen(mix) * v + v).transpose();
  }
  Matrix cov = from_eigen(x.transpose() * x / static_cast<double>(m));
  return EmpiricalCovariance(std::move(cov));
}

inline ElementwisePenalty random_penalty(std::size_t n, std::mt19937_64& rng, double lo, double hi,
                                         double diag = 0.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    l(i, i) = diag;
    for (std::size_t j = i + 1; j < n; ++j) l(i, j) = l(j, i) = u(rng);
  }
  return ElementwisePenalty(std::move(l));
}

/// A random feasible box point: uniform inside the box, shrunk until Σ̂+W ≻ 0.
inline Matrix random_feasible_box_point(const EmpiricalCovariance& cov, const ElementwisePenalty& p,
                                        std::mt19937_64& rng) {
  const std::size_t n = cov.n();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    w(i, i) = p(i, i);
    for (std::size_t j = i + 1; j < n; ++j) w(i, j) = w(j, i) = u(rng) * p(i, j);
  }
  for (double shrink = 1.0;; shrink *= 0.5) {
    Matrix trial = w;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) trial(i, j) *= shrink;
      }
    }
    if (min_eigenvalue(cov.entries() + trial) > 1e-6) return trial;
  }
}

}  // namespace covsel::testing

namespace covsel::testing {

/// Box-constrained dual optimum by projected gradient with a small fixed
/// step, written against Eigen only. Diagonal pinned at λ_ii.
inline Matrix box_dual_by_fixed_steps(const Matrix& cov, const Matrix& lambda, double step,
                                      std::size_t max_steps = 2'000'000, double tol = 1e-14) {
  const Eigen::Index n = static_cast<Eigen::Index>(cov.rows());
  const Eigen::MatrixXd s = to_eigen(cov);
  const Eigen::MatrixXd l = to_eigen(lambda);
  Eigen::MatrixXd w = l.diagonal().asDiagonal();
  for (std::size_t it = 0; it < max_steps; ++it) {
    const Eigen::LLT<Eigen::MatrixXd> llt(s + w);
    if (llt.info() != Eigen::Success) throw std::runtime_error("fixed-step oracle left the PD cone");
    const Eigen::MatrixXd g = llt.solve(Eigen::MatrixXd::Identity(n, n));
    double moved = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double next = std::clamp(w(i, j) + step * g(i, j), -l(i, j), l(i, j));
        moved = std::max(moved, std::abs(next - w(i, j)));
        w(i, j) = next;
      }
    }
    if (moved < tol) break;
  }
  return from_eigen((s + w).inverse());
}

}  // namespace covsel::testing
