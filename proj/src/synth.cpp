#include "covsel/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "covsel/error.hpp"
#include "covsel/kernels.hpp"
#include "covsel/linalg.hpp"

namespace covsel {
namespace {

PrecisionEstimate fill_values(std::size_t n, std::vector<Edge> support, std::mt19937_64& rng) {
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  std::uniform_real_distribution<double> off(-1.0, 1.0);
  std::uniform_real_distribution<double> slack(0.1, 1.1);
  Matrix k(n, n);
  for (const auto& e : support) {
    if (e.first == e.second || e.second >= n) throw Error(Errc::IndexOutOfRange, "bad support pair");
    const double v = off(rng);
    k(e.first, e.second) = v;
    k(e.second, e.first) = v;
  }
  // Strict diagonal dominance with a positive diagonal implies K ≻ 0.
  for (std::size_t i = 0; i < n; ++i) {
    k(i, i) = active_kernels().abs_sum(k.row(i).data(), n) + slack(rng);
  }
  return {std::move(k), std::move(support), false};
}

std::vector<Edge> all_pairs(std::size_t n) {
  std::vector<Edge> pairs;
  pairs.reserve(n * (n > 0 ? n - 1 : 0) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

PrecisionEstimate random_with_edge_count(std::size_t n, std::size_t edges, std::mt19937_64& rng) {
  std::vector<Edge> pairs = all_pairs(n);
  if (edges > pairs.size()) throw Error(Errc::InvalidArgument, "more edges requested than pairs exist");
  std::shuffle(pairs.begin(), pairs.end(), rng);
  pairs.resize(edges);
  return fill_values(n, std::move(pairs), rng);
}

}  // namespace

PrecisionEstimate random_sparse_precision(std::size_t n, double edges_per_node, std::uint64_t seed) {
  if (!(edges_per_node >= 0.0) || (n > 0 && edges_per_node >= static_cast<double>(n))) {
    throw Error(Errc::InvalidArgument, "edges_per_node must lie in [0, n)");
  }
  std::mt19937_64 rng(seed);
  const auto edges = static_cast<std::size_t>(std::floor(static_cast<double>(n) * edges_per_node / 2.0));
  return random_with_edge_count(n, edges, rng);
}

PrecisionEstimate random_sparse_precision_with_density(std::size_t n, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) throw Error(Errc::InvalidArgument, "density must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  const double pairs = static_cast<double>(n) * static_cast<double>(n > 0 ? n - 1 : 0) / 2.0;
  return random_with_edge_count(n, static_cast<std::size_t>(std::llround(density * pairs)), rng);
}

PrecisionEstimate precision_on_support(std::size_t n, const std::vector<Edge>& support, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return fill_values(n, support, rng);
}

std::vector<std::vector<std::size_t>> random_partition(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (count == 0 || count > n) throw Error(Errc::InvalidArgument, "group count must lie in [1, n]");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> groups(count);
  std::uniform_int_distribution<std::size_t> pick(0, count - 1);
  for (std::size_t p = 0; p < n; ++p) groups[p < count ? p : pick(rng)].push_back(order[p]);
  for (auto& g : groups) std::sort(g.begin(), g.end());
  return groups;
}

PrecisionEstimate random_block_precision(const std::vector<std::vector<std::size_t>>& groups, double block_prob,
                                         double edge_density, std::uint64_t seed) {
  if (!(block_prob >= 0.0 && block_prob <= 1.0) || !(edge_density >= 0.0 && edge_density <= 1.0)) {
    throw Error(Errc::InvalidArgument, "probabilities must lie in [0, 1]");
  }
  std::size_t n = 0;
  for (const auto& g : groups) n += g.size();
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution block_on(block_prob);
  std::bernoulli_distribution edge_on(edge_density);
  std::vector<Edge> support;
  for (std::size_t q = 0; q < groups.size(); ++q) {
    for (std::size_t r = q; r < groups.size(); ++r) {
      if (!block_on(rng)) continue;
      for (std::size_t a = 0; a < groups[q].size(); ++a) {
        for (std::size_t b = (q == r ? a + 1 : 0); b < groups[r].size(); ++b) {
          if (edge_on(rng)) support.emplace_back(groups[q][a], groups[r][b]);
        }
      }
    }
  }
  return fill_values(n, std::move(support), rng);
}

Dataset sample_gaussian(const GaussianModel& model, std::size_t m, std::uint64_t seed) {
  const std::size_t n = model.n();
  if (m == 0) throw Error(Errc::InvalidArgument, "sample count must be >= 1");
  if (model.precision.k.rows() != n) throw Error(Errc::DimensionMismatch, "mean and precision differ in size");
  const CholeskyFactor factor = cholesky(model.precision.k);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset data{Matrix(m, n)};
  for (std::size_t s = 0; s < m; ++s) {
    auto row = data.samples.row(s);
    for (double& z : row) z = normal(rng);
    // Cov(L^{-T} z) = L^{-T} L^{-1} = K^{-1}
    solve_upper_transposed(factor, row);
    for (std::size_t i = 0; i < n; ++i) row[i] += model.mean[i];
  }
  return data;
}

std::vector<double> sample_mean(const Dataset& data) {
  std::vector<double> mean(data.n(), 0.0);
  for (std::size_t s = 0; s < data.m(); ++s) {
    active_kernels().axpy(1.0, data.samples.row(s).data(), mean.data(), data.n());
  }
  for (double& v : mean) v /= static_cast<double>(data.m());
  return mean;
}

EmpiricalCovariance empirical_covariance(const Dataset& data, std::optional<std::vector<double>> mean) {
  const std::size_t n = data.n();
  const std::size_t m = data.m();
  if (!mean) {
    if (m < 2) throw Error(Errc::DegenerateData, "need at least 2 samples to estimate the mean");
    mean = sample_mean(data);
  }
  if (m == 0) throw Error(Errc::DegenerateData, "empty dataset");
  if (mean->size() != n) throw Error(Errc::DimensionMismatch, "mean has the wrong length");

  const auto& kern = active_kernels();
  Matrix cov(n, n);
  std::vector<double> centered(n);
  for (std::size_t s = 0; s < m; ++s) {
    const auto row = data.samples.row(s);
    for (std::size_t i = 0; i < n; ++i) centered[i] = row[i] - (*mean)[i];
    for (std::size_t i = 0; i < n; ++i) {
      if (centered[i] != 0.0) kern.axpy(centered[i], centered.data(), cov.row(i).data(), n);
    }
  }
  const double inv_m = 1.0 / static_cast<double>(m);
  for (double& v : cov.values()) v *= inv_m;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(cov(i, i) > 0.0)) {
      throw Error(Errc::DegenerateData, "coordinate " + std::to_string(i) + " has zero variance");
    }
  }
  return EmpiricalCovariance(std::move(cov));
}

GaussianModel tikhonov(const Matrix& cov, double nu, std::vector<double> mean) {
  if (!(nu > 0.0)) throw Error(Errc::InvalidArgument, "nu must be > 0");
  if (!cov.is_square()) throw Error(Errc::DimensionMismatch, "covariance must be square");
  const std::size_t n = cov.rows();
  if (mean.empty()) mean.assign(n, 0.0);
  if (mean.size() != n) throw Error(Errc::DimensionMismatch, "mean has the wrong length");
  Matrix shifted = cov;
  symmetrize(shifted);
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) += nu;
  PrecisionEstimate precision;
  precision.k = spd_inverse(cholesky(shifted));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (precision.k(i, j) != 0.0) precision.edges.emplace_back(i, j);
    }
  }
  return {std::move(mean), std::move(precision)};
}

GaussianModel tikhonov(const EmpiricalCovariance& cov, double nu, std::vector<double> mean) {
  return tikhonov(cov.entries(), nu, std::move(mean));
}

Dataset slice_rows(const Dataset& data, std::size_t begin, std::size_t end) {
  if (begin > end || end > data.m()) throw Error(Errc::InvalidArgument, "row range out of bounds");
  Dataset out{Matrix(end - begin, data.n())};
  for (std::size_t r = begin; r < end; ++r) {
    std::copy(data.samples.row(r).begin(), data.samples.row(r).end(), out.samples.row(r - begin).begin());
  }
  return out;
}

}  // namespace covsel
