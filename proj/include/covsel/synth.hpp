#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "covsel/matrix.hpp"
#include "covsel/model.hpp"

namespace covsel {

struct GaussianModel {
  std::vector<double> mean;
  PrecisionEstimate precision;

  std::size_t n() const noexcept { return mean.size(); }
};

/// m×n sample matrix, one sample per row.
struct Dataset {
  Matrix samples;

  std::size_t m() const noexcept { return samples.rows(); }
  std::size_t n() const noexcept { return samples.cols(); }
};

/// Sparse, strictly diagonally dominant precision with ⌊n·edges_per_node/2⌋
/// uniformly chosen edges and off-diagonal values uniform in [-1, 1].
PrecisionEstimate random_sparse_precision(std::size_t n, double edges_per_node, std::uint64_t seed);

/// Same ensemble, with round(density·n(n-1)/2) edges.
PrecisionEstimate random_sparse_precision_with_density(std::size_t n, double density,
                                                       std::uint64_t seed);

/// Same value ensemble on an explicit support.
PrecisionEstimate precision_on_support(std::size_t n, const std::vector<Edge>& support,
                                       std::uint64_t seed);

/// Random partition of {0..n-1} into `count` nonempty groups.
std::vector<std::vector<std::size_t>> random_partition(std::size_t n, std::size_t count,
                                                       std::uint64_t seed);

/// Precision whose support is block structured: every group pair {q, r}
/// (q = r included) is switched on with probability block_prob, and inside
/// an active group pair each variable pair becomes an edge with probability
/// edge_density.
PrecisionEstimate random_block_precision(const std::vector<std::vector<std::size_t>>& groups,
                                         double block_prob, double edge_density,
                                         std::uint64_t seed);

/// i.i.d. draws from N(mean, K^{-1}) via x = mean + L^{-T} z, K = L·Lᵀ.
Dataset sample_gaussian(const GaussianModel& model, std::size_t m, std::uint64_t seed);

/// (1/m) Σ (x - μ)(x - μ)ᵀ about `mean`, or about the sample mean when none is
/// given (then m ≥ 2 is required). Throws DegenerateData when a coordinate
/// has zero variance.
EmpiricalCovariance empirical_covariance(const Dataset& data,
                                         std::optional<std::vector<double>> mean = std::nullopt);

std::vector<double> sample_mean(const Dataset& data);

/// Ridge baseline: covariance cov + νI, precision (cov + νI)^{-1}.
GaussianModel tikhonov(const Matrix& cov, double nu, std::vector<double> mean = {});
GaussianModel tikhonov(const EmpiricalCovariance& cov, double nu, std::vector<double> mean = {});

/// Rows [begin, end) of a dataset.
Dataset slice_rows(const Dataset& data, std::size_t begin, std::size_t end);

}  // namespace covsel
