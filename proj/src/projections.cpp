#include "covsel/projections.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "covsel/error.hpp"
#include "covsel/kernels.hpp"

namespace covsel {

Matrix project_box(const Matrix& m, const ElementwisePenalty& penalty) {
  const Matrix& lambda = penalty.lambda();
  if (m.rows() != lambda.rows() || m.cols() != lambda.cols()) {
    throw Error(Errc::DimensionMismatch, "project_box shape mismatch");
  }
  Matrix out(m.rows(), m.cols());
  active_kernels().clamp(m.data(), lambda.data(), out.data(), m.size());
  return out;
}

double l1_ball_threshold(std::span<const double> v, double radius) {
  if (radius < 0.0) throw Error(Errc::InvalidArgument, "l1 ball radius must be >= 0");
  const auto& k = active_kernels();
  if (k.abs_sum(v.data(), v.size()) <= radius) return 0.0;
  if (radius == 0.0) return k.max_abs(v.data(), v.size());

  std::vector<double> u(v.size());
  std::transform(v.begin(), v.end(), u.begin(), [](double x) { return std::abs(x); });
  std::sort(u.begin(), u.end(), std::greater<>());

  // θ = (Σ_{j≤ρ} u_j - r)/ρ for the largest ρ with u_ρ > (Σ_{j≤ρ} u_j - r)/ρ.
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double candidate = (cumsum - radius) / static_cast<double>(j + 1);
    if (u[j] > candidate) {
      theta = candidate;
    } else {
      break;
    }
  }
  return std::max(theta, 0.0);
}

std::vector<double> project_l1_ball(std::span<const double> v, double radius) {
  const double theta = l1_ball_threshold(v, radius);
  std::vector<double> out(v.begin(), v.end());
  if (theta > 0.0) active_kernels().soft_threshold(out.data(), theta, out.data(), out.size());
  return out;
}

Matrix project_block_constraints(const Matrix& m, const BlockPenalty& penalty) {
  if (!m.is_square() || m.rows() != penalty.n()) {
    throw Error(Errc::DimensionMismatch, "project_block_constraints shape mismatch");
  }
  Matrix out = m;
  std::vector<double> buffer;
  for (const auto& block : penalty.blocks()) {
    buffer.resize(block.pairs.size());
    for (std::size_t p = 0; p < block.pairs.size(); ++p) {
      buffer[p] = m(block.pairs[p].first, block.pairs[p].second);
    }
    const double theta = l1_ball_threshold(buffer, block.radius);
    if (theta > 0.0) {
      active_kernels().soft_threshold(buffer.data(), theta, buffer.data(), buffer.size());
    }
    for (std::size_t p = 0; p < block.pairs.size(); ++p) {
      const auto& e = block.pairs[p];
      out(e.first, e.second) = buffer[p];
      out(e.second, e.first) = buffer[p];
    }
  }
  return out;
}

}  // namespace covsel
