#include <doctest.h>

#include <cmath>
#include <random>

#include "covsel/duality.hpp"
#include "covsel/error.hpp"
#include "covsel/linalg.hpp"
#include "covsel/solver_box.hpp"
#include "../support.hpp"

using namespace covsel;
using namespace covsel::testing;

namespace {

EmpiricalCovariance toy(double off = 0.5) {
  return EmpiricalCovariance(Matrix::from_rows({{1.0, off}, {off, 1.0}}));
}

// Solves with an observer asserting feasibility of every iterate, and checks
// the report's objective sequence.
SolveResult checked_solve(const EmpiricalCovariance& cov, const ElementwisePenalty& pen, const SolveOptions& opts) {
  std::size_t seen = 0;
  auto observer = [&](std::size_t, const Matrix& w) {
    ++seen;
    for (std::size_t i = 0; i < w.rows(); ++i) {
      REQUIRE(w(i, i) == pen(i, i));
      for (std::size_t j = 0; j < w.cols(); ++j) REQUIRE(std::abs(w(i, j)) <= pen(i, j) + 1e-10);
    }
    REQUIRE(Eigen::LLT<Eigen::MatrixXd>(to_eigen(cov.entries() + w)).info() == Eigen::Success);
  };
  auto res = solve_box(cov, pen, opts, observer);
  const auto& r = res.report;
  CHECK(seen == r.iterations + 1);
  CHECK(r.gaps.size() == r.iterations);
  CHECK(r.objectives.size() == r.iterations);
  double prev = r.initial_objective;
  for (double f : r.objectives) {
    CHECK(f > prev);
    prev = f;
  }
  return res;
}

}  // namespace

TEST_CASE("masked_gradient examples") {
  {
    const auto cov = toy();
    const DualPoint w(Matrix(2, 2));
    const Matrix g = masked_gradient(cov, w, ElementwisePenalty::uniform(2, 0.6));
    const Matrix inv = spd_inverse(cholesky(cov.entries()));
    CHECK(g(0, 0) == 0.0);
    CHECK(g(1, 1) == 0.0);
    CHECK(g(0, 1) == inv(0, 1));
  }
  {
    // W at +λ with a positive inverse entry: outward, masked.
    const auto cov = toy(-0.5);
    const DualPoint w(Matrix::from_rows({{0.0, 0.2}, {0.2, 0.0}}));
    CHECK(masked_gradient(cov, w, ElementwisePenalty::uniform(2, 0.2))(0, 1) == 0.0);
  }
  {
    // W at +λ with a negative inverse entry: inward, kept.
    const auto cov = toy(0.5);
    const DualPoint w(Matrix::from_rows({{0.0, 0.2}, {0.2, 0.0}}));
    CHECK(masked_gradient(cov, w, ElementwisePenalty::uniform(2, 0.2))(0, 1) == doctest::Approx(-0.7 / 0.51));
  }
  {
    // W at -λ with a negative inverse entry: outward, masked.
    const auto cov = toy(0.5);
    const DualPoint w(Matrix::from_rows({{0.0, -0.2}, {-0.2, 0.0}}));
    CHECK(masked_gradient(cov, w, ElementwisePenalty::uniform(2, 0.2))(0, 1) == 0.0);
  }
  {
    // Within the relative activity tolerance counts as active.
    const auto cov = toy(-0.5);
    const DualPoint w(Matrix::from_rows({{0.0, 0.2 * (1 - 1e-14)}, {0.2 * (1 - 1e-14), 0.0}}));
    CHECK(masked_gradient(cov, w, ElementwisePenalty::uniform(2, 0.2))(0, 1) == 0.0);
  }
}

TEST_CASE("quadratic_line_search: initial step from the second-order model") {
  const EmpiricalCovariance cov(Matrix::identity(4));
  const ElementwisePenalty pen(Matrix(4, 4, 100.0));
  const auto step = quadratic_line_search(cov, DualPoint(Matrix(4, 4)), Matrix::identity(4), pen, SolveOptions{});
  CHECK(step.initial_t == doctest::Approx(1.0));
  CHECK(step.t == doctest::Approx(1.0));
  CHECK(step.halvings == 0);
  CHECK_FALSE(step.stalled);
  CHECK(step.objective == doctest::Approx(4.0 * std::log(2.0)));
}

TEST_CASE("quadratic_line_search: overshooting into the indefinite region halves t") {
  // G has eigenvalues 0.5 (×9) and -1, so the model step tr(G)/tr(G²) = 3.5/3.25
  // exceeds the distance 1 to the PD boundary.
  const std::size_t n = 10;
  const EmpiricalCovariance cov(Matrix::identity(n));
  const ElementwisePenalty pen(Matrix(n, n, 100.0));
  Matrix g = Matrix::identity(n);
  for (double& v : g.values()) v *= 0.5;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) g(i, j) -= 1.5 * 0.5;
  }
  const auto step = quadratic_line_search(cov, DualPoint(Matrix(n, n)), g, pen, SolveOptions{});
  CHECK(step.initial_t == doctest::Approx(3.5 / 3.25));
  CHECK(step.halvings >= 1);
  CHECK_FALSE(step.stalled);
  CHECK(step.t == doctest::Approx(3.5 / 3.25 / 2.0));
  CHECK(step.objective > 0.0);
}

TEST_CASE("quadratic_line_search: zero direction stalls") {
  const auto cov = toy();
  const auto step =
      quadratic_line_search(cov, DualPoint(Matrix(2, 2)), Matrix(2, 2), ElementwisePenalty::uniform(2, 0.2), SolveOptions{});
  CHECK(step.stalled);
}

TEST_CASE("gradient matches finite differences per ordered entry") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 6;
    const auto cov = random_sample_covariance(n, 3 * n, rng);
    const auto pen = random_penalty(n, rng, 0.05, 0.5, 0.1);
    const Matrix w = random_feasible_box_point(cov, pen, rng);
    const Matrix grad = spd_inverse(cholesky(cov.entries() + w));
    const Eigen::MatrixXd x = to_eigen(cov.entries() + w);
    const double h = 1e-5;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Eigen::MatrixXd up = x, down = x;
        up(i, j) += h;
        down(i, j) -= h;
        const double fd = (std::log(std::abs(up.partialPivLu().determinant())) -
                           std::log(std::abs(down.partialPivLu().determinant()))) /
                          (2 * h);
        CHECK(std::abs(fd - grad(j, i)) <= 1e-5 * std::max(std::abs(grad(j, i)), 1e-3));
      }
    }
  }
}

TEST_CASE("solve_box: 2x2 closed forms") {
  SolveOptions opts;
  opts.gap_tol = 1e-8;
  {
    const auto res = checked_solve(toy(), ElementwisePenalty::uniform(2, 0.2), opts);
    CHECK(res.report.termination == Termination::GapReached);
    CHECK(res.report.final_gap() < 1e-8);
    CHECK(res.dual.w()(0, 1) == doctest::Approx(-0.2).epsilon(1e-9));
    CHECK(res.estimate.k(0, 1) == doctest::Approx(-0.3 / 0.91).epsilon(1e-6));
    CHECK(res.estimate.k(0, 0) == doctest::Approx(1.0 / 0.91).epsilon(1e-6));
    CHECK(res.estimate.edges == std::vector<Edge>{Edge(0, 1)});
  }
  {
    const auto res = checked_solve(toy(), ElementwisePenalty::uniform(2, 0.6), opts);
    CHECK(res.dual.w()(0, 1) == doctest::Approx(-0.5));
    CHECK(max_abs_diff(res.estimate.k, Matrix::identity(2)) < 1e-6);
    CHECK(res.estimate.edges.empty());
  }
  {
    const auto res = checked_solve(toy(), ElementwisePenalty::uniform(2, 0.5), opts);
    CHECK(res.estimate.edges.empty());
    CHECK(max_abs_diff(res.estimate.k, Matrix::identity(2)) < 1e-6);
  }
}

TEST_CASE("solve_box: λ = |Σ̂| gives a diagonal precision") {
  std::mt19937_64 rng(52);
  SolveOptions opts;
  opts.gap_tol = 1e-8;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng() % 6;
    const auto cov = random_sample_covariance(n, 2 * n, rng);
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) l(i, j) = i == j ? 0.0 : std::abs(cov(i, j));
    }
    const auto res = checked_solve(cov, ElementwisePenalty(l), opts);
    CHECK(res.estimate.edges.empty());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(res.estimate.k(i, i) == doctest::Approx(1.0 / cov(i, i)).epsilon(1e-6));
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) CHECK(std::abs(res.estimate.k(i, j)) < 1e-6);
      }
    }
  }
}

TEST_CASE("solve_box matches a fixed-step projected gradient oracle") {
  std::mt19937_64 rng(53);
  SolveOptions opts;
  opts.gap_tol = 1e-6;
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 2 + rng() % 4;
    // Bounded spectrum keeps the fixed step practical.
    const EmpiricalCovariance cov(random_spd(n, rng, 0.3, 2.0));
    const auto pen = random_penalty(n, rng, 0.02, 0.4, trial % 2 == 0 ? 0.0 : 0.2);
    const auto res = checked_solve(cov, pen, opts);
    CHECK(res.report.termination == Termination::GapReached);
    CHECK(res.report.final_gap() < 1e-6);

    const double lmin = min_eigenvalue(cov.entries() + Matrix::diagonal(pen.lambda().diag()));
    const Matrix oracle = box_dual_by_fixed_steps(cov.entries(), pen.lambda(), 0.2 * lmin * lmin);
    CHECK(max_abs_diff(res.estimate.k, oracle) < 1e-4);
  }
}

TEST_CASE("solve_box invariants on larger random instances") {
  std::mt19937_64 rng(54);
  SolveOptions opts;
  opts.gap_tol = 1e-6;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 5 + rng() % 20;
    const auto cov = random_sample_covariance(n, 1 + rng() % (2 * n), rng);
    const auto pen = random_penalty(n, rng, 0.01, 0.3, trial % 2 == 0 ? 0.0 : 0.1);
    const auto res = checked_solve(cov, pen, opts);
    CHECK(res.report.final_gap() >= -1e-10);
    CHECK(res.report.termination == Termination::GapReached);
  }
}

TEST_CASE("solve_box: termination reasons and errors") {
  const auto cov = toy();
  SolveOptions opts;
  opts.gap_tol = 1e-8;
  // Loose penalty: the starting point is already optimal.
  const auto at_start = solve_box(cov, ElementwisePenalty::uniform(2, 0.6), opts);
  CHECK(at_start.report.iterations == 0);
  CHECK(at_start.report.termination == Termination::GapReached);

  std::mt19937_64 rng(55);
  const auto big = random_sample_covariance(15, 10, rng);
  opts.max_iter = 1;
  opts.gap_tol = 1e-12;
  const auto capped = solve_box(big, ElementwisePenalty::uniform(15, 0.05), opts);
  CHECK(capped.report.iterations == 1);
  CHECK(capped.report.termination == Termination::MaxIter);

  CHECK_THROWS_AS(solve_box(cov, ElementwisePenalty::uniform(2, 0.0)), Error);
  SolveOptions bad;
  bad.gap_tol = -1;
  CHECK_THROWS_AS(solve_box(cov, ElementwisePenalty::uniform(2, 0.2), bad), Error);
}
