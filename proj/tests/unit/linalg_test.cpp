#include <doctest.h>

#include <cmath>
#include <random>

#include "covsel/error.hpp"
#include "covsel/linalg.hpp"
#include "../support.hpp"

using namespace covsel;
using covsel::testing::to_eigen;

TEST_CASE("cholesky examples") {
  const auto f = cholesky(Matrix::identity(3));
  CHECK(f.lower() == Matrix::identity(3));

  const auto g = cholesky(Matrix::from_rows({{4.0}}));
  CHECK(g.lower()(0, 0) == 2.0);

  CHECK_FALSE(try_cholesky(Matrix::from_rows({{1.0, 2.0}, {2.0, 1.0}})).has_value());
  CHECK_THROWS_AS(cholesky(Matrix::from_rows({{1.0, 2.0}, {2.0, 1.0}})), Error);
}

TEST_CASE("log_det examples") {
  CHECK(log_det(cholesky(Matrix::identity(4))) == 0.0);
  CHECK(log_det(cholesky(Matrix::from_rows({{4.0}}))) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(log_det(cholesky(Matrix::from_rows({{1.0, 0.3}, {0.3, 1.0}}))) ==
        doctest::Approx(std::log(0.91)).epsilon(1e-12));
}

TEST_CASE("spd_inverse examples") {
  CHECK(spd_inverse(cholesky(Matrix::identity(3))) == Matrix::identity(3));
  const Matrix d = spd_inverse(cholesky(Matrix::from_rows({{2.0, 0.0}, {0.0, 4.0}})));
  CHECK(d(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d(1, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(d(0, 1) == 0.0);
  const Matrix a = spd_inverse(cholesky(Matrix::from_rows({{1.0, 0.3}, {0.3, 1.0}})));
  CHECK(a(0, 0) == doctest::Approx(1.0 / 0.91).epsilon(1e-13));
  CHECK(a(0, 1) == doctest::Approx(-0.3 / 0.91).epsilon(1e-13));
  CHECK(a(1, 0) == a(0, 1));
}

TEST_CASE("trace_product examples") {
  CHECK(trace_product(Matrix::identity(5), Matrix::identity(5)) == 5.0);
  CHECK(trace_product(Matrix::from_rows({{1, 0}, {0, 2}}), Matrix::from_rows({{3, 0}, {0, 4}})) == 11.0);
  CHECK(trace_product(Matrix::from_rows({{0, 1}, {1, 0}}), Matrix::from_rows({{0, 2}, {2, 0}})) == 4.0);
  // Unsymmetric operands: tr(AB) = (1·5 + 2·7) + (3·6 + 4·8).
  CHECK(trace_product(Matrix::from_rows({{1, 2}, {3, 4}}), Matrix::from_rows({{5, 6}, {7, 8}})) == 69.0);
}

TEST_CASE("quadratic_form and solve_upper_transposed") {
  const Matrix a = Matrix::from_rows({{2.0, 1.0}, {1.0, 3.0}});
  const std::vector<double> x{1.0, -2.0};
  CHECK(quadratic_form(a, x) == doctest::Approx(2.0 - 4.0 + 12.0));

  std::mt19937_64 rng(4);
  const Matrix s = testing::random_spd(7, rng);
  const auto f = cholesky(s);
  std::vector<double> z(7);
  for (std::size_t i = 0; i < 7; ++i) z[i] = static_cast<double>(i) - 3.0;
  std::vector<double> sol = z;
  solve_upper_transposed(f, sol);
  for (std::size_t i = 0; i < 7; ++i) {
    double lt_x = 0.0;
    for (std::size_t j = 0; j < 7; ++j) lt_x += f.lower()(j, i) * sol[j];
    CHECK(lt_x == doctest::Approx(z[i]).epsilon(1e-10));
  }
}

TEST_CASE("spd_inverse residual on random SPD matrices") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    const Matrix a = testing::random_spd(n, rng, 0.05, 5.0);
    const Matrix inv = spd_inverse(cholesky(a));
    CHECK(is_symmetric(inv));
    CHECK(max_abs_diff(multiply(a, inv), Matrix::identity(n)) < 1e-8);
  }
}

TEST_CASE("log_det matches the eigenvalue oracle") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 10;
    const Matrix a = testing::random_spd(n, rng, 0.01, 10.0);
    const Eigen::VectorXd eig =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(to_eigen(a), Eigen::EigenvaluesOnly).eigenvalues();
    const double oracle = eig.array().log().sum();
    CHECK(std::abs(log_det(cholesky(a)) - oracle) <= 1e-8 * std::max(1.0, std::abs(oracle)));
  }
}

TEST_CASE("cholesky fails exactly when the symmetrized input is not PD") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> mag(0.1, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    Eigen::VectorXd eig(n);
    for (std::size_t i = 0; i < n; ++i) eig(i) = (rng() % 3 == 0 ? -1.0 : 1.0) * mag(rng);
    Matrix a = testing::with_spectrum(eig, rng);
    // Add an antisymmetric part: it must not matter.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double s = 0.1 * static_cast<double>(static_cast<int>(rng() % 7) - 3);
        a(i, j) += s;
        a(j, i) -= s;
      }
    }
    const bool oracle_pd = testing::min_eigenvalue(a) > 0.0;
    CHECK(try_cholesky(a).has_value() == oracle_pd);
  }
}
