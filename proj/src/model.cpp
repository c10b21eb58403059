#include "covsel/model.hpp"

#include <cmath>
#include <sstream>

#include "covsel/linalg.hpp"

namespace covsel {
namespace {

std::string pair_text(std::size_t i, std::size_t j) {
  std::ostringstream s;
  s << '(' << i << ',' << j << ')';
  return s.str();
}

// Index of an unordered off-diagonal pair in row-major upper-triangle order.
std::size_t pair_slot(std::size_t n, const Edge& e) {
  return e.first * n - e.first * (e.first + 1) / 2 + (e.second - e.first - 1);
}

}  // namespace

EmpiricalCovariance::EmpiricalCovariance(Matrix entries) : entries_(std::move(entries)) {
  if (!entries_.is_square()) {
    throw Error(Errc::DimensionMismatch, "covariance must be square");
  }
  symmetrize(entries_);
  for (std::size_t i = 0; i < n(); ++i) {
    if (!(entries_(i, i) > 0.0)) {
      throw Error(Errc::DegenerateCovariance, "diagonal entry " + std::to_string(i) + " is not positive");
    }
  }
  // λ_min ≥ -δ  ⇔  Σ̂ + δI ⪰ 0; the Frobenius norm bounds the spectral norm.
  const double delta = 1e-8 * frobenius_norm(entries_);
  Matrix shifted = entries_;
  for (std::size_t i = 0; i < n(); ++i) shifted(i, i) += delta;
  if (!try_cholesky(shifted)) {
    throw Error(Errc::NotPositiveSemidefinite, "covariance has a significantly negative eigenvalue");
  }
}

ElementwisePenalty ElementwisePenalty::uniform(std::size_t n, double off_diagonal, double diagonal) {
  Matrix lambda(n, n, off_diagonal);
  for (std::size_t i = 0; i < n; ++i) lambda(i, i) = diagonal;
  return ElementwisePenalty(std::move(lambda));
}

BlockPenalty::BlockPenalty(std::size_t n, std::vector<PairBlock> blocks, std::vector<double> diag_lambda)
    : n_(n), blocks_(std::move(blocks)), diag_lambda_(std::move(diag_lambda)) {}

BlockPenalty BlockPenalty::with_default(std::size_t n, std::vector<PairBlock> blocks,
                                        std::vector<double> diag_lambda, double default_radius) {
  std::vector<bool> covered(n * (n > 0 ? n - 1 : 0) / 2, false);
  for (const auto& b : blocks) {
    for (const auto& e : b.pairs) {
      if (e.second < n && e.first != e.second) covered[pair_slot(n, e)] = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!covered[pair_slot(n, Edge(i, j))]) blocks.push_back({{Edge(i, j)}, default_radius});
    }
  }
  return BlockPenalty(n, std::move(blocks), std::move(diag_lambda));
}

BlockPenalty BlockPenalty::singletons(const ElementwisePenalty& penalty) {
  const std::size_t n = penalty.n();
  std::vector<PairBlock> blocks;
  blocks.reserve(n * (n > 0 ? n - 1 : 0) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) blocks.push_back({{Edge(i, j)}, penalty(i, j)});
  }
  return BlockPenalty(n, std::move(blocks), penalty.lambda().diag());
}

std::optional<Violation> validate_penalty(const ElementwisePenalty& penalty) {
  const Matrix& l = penalty.lambda();
  if (!l.is_square()) return Violation{Errc::DimensionMismatch, "penalty matrix is not square"};
  const std::size_t n = l.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (l(i, j) != l(j, i)) {
        return Violation{Errc::AsymmetricPenalty, "lambda" + pair_text(i, j) + " != lambda" + pair_text(j, i)};
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(l(i, i) >= 0.0) || !std::isfinite(l(i, i))) {
      return Violation{Errc::NegativeDiagonalPenalty, "lambda" + pair_text(i, i) + " must be >= 0"};
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(l(i, j) > 0.0) || !std::isfinite(l(i, j))) {
        return Violation{Errc::NonPositiveOffDiagonal, "lambda" + pair_text(i, j) + " must be > 0"};
      }
    }
  }
  return std::nullopt;
}

std::optional<Violation> validate_penalty(const BlockPenalty& penalty) {
  const std::size_t n = penalty.n();
  if (penalty.diag_lambda().size() != n) {
    return Violation{Errc::DimensionMismatch, "diag_lambda has the wrong length"};
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double d = penalty.diag_lambda()[i];
    if (!(d >= 0.0) || !std::isfinite(d)) {
      return Violation{Errc::NegativeDiagonalPenalty, "diag_lambda[" + std::to_string(i) + "] must be >= 0"};
    }
  }
  const auto& blocks = penalty.blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (!(blocks[b].radius > 0.0) || !std::isfinite(blocks[b].radius)) {
      return Violation{Errc::NonPositiveOffDiagonal, "block " + std::to_string(b) + " radius must be > 0"};
    }
    for (const auto& e : blocks[b].pairs) {
      if (e.second >= n) {
        return Violation{Errc::IndexOutOfRange, "block " + std::to_string(b) + " pair " + pair_text(e.first, e.second)};
      }
      if (e.first == e.second) {
        return Violation{Errc::IndexOutOfRange,
                         "block " + std::to_string(b) + " holds diagonal pair " + pair_text(e.first, e.second)};
      }
    }
  }
  std::vector<std::size_t> owner(n * (n > 0 ? n - 1 : 0) / 2, blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (const auto& e : blocks[b].pairs) {
      std::size_t& slot = owner[pair_slot(n, e)];
      if (slot != blocks.size()) {
        return Violation{Errc::OverlappingBlocks, "pair " + pair_text(e.first, e.second) + " is in blocks " +
                                                      std::to_string(slot) + " and " + std::to_string(b)};
      }
      slot = b;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (owner[pair_slot(n, Edge(i, j))] == blocks.size()) {
        return Violation{Errc::UncoveredPair, "pair " + pair_text(i, j) + " is in no block"};
      }
    }
  }
  return std::nullopt;
}

void require_valid(const ElementwisePenalty& penalty) {
  if (auto v = validate_penalty(penalty)) throw Error(v->code, v->detail);
}

void require_valid(const BlockPenalty& penalty) {
  if (auto v = validate_penalty(penalty)) throw Error(v->code, v->detail);
}

BlockPenalty blocks_from_groups(const std::vector<std::vector<std::size_t>>& groups, double scale,
                                std::vector<double> diag_lambda) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(Errc::InvalidArgument, "group scale must be > 0");
  }
  std::size_t n = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw Error(Errc::EmptyGroup, "group " + std::to_string(g) + " is empty");
    n += groups[g].size();
  }
  std::vector<char> seen(n, 0);
  for (const auto& group : groups) {
    for (std::size_t v : group) {
      if (v >= n || seen[v]) {
        throw Error(Errc::NonPartition, "groups do not partition 0.." + std::to_string(n == 0 ? 0 : n - 1));
      }
      seen[v] = 1;
    }
  }
  if (diag_lambda.empty()) diag_lambda.assign(n, 0.0);
  if (diag_lambda.size() != n) throw Error(Errc::DimensionMismatch, "diag_lambda has the wrong length");

  std::vector<PairBlock> blocks;
  for (std::size_t q = 0; q < groups.size(); ++q) {
    for (std::size_t r = q; r < groups.size(); ++r) {
      PairBlock block;
      if (q == r) {
        const auto& g = groups[q];
        for (std::size_t a = 0; a < g.size(); ++a) {
          for (std::size_t b = a + 1; b < g.size(); ++b) block.pairs.emplace_back(g[a], g[b]);
        }
      } else {
        for (std::size_t i : groups[q]) {
          for (std::size_t j : groups[r]) block.pairs.emplace_back(i, j);
        }
      }
      if (block.pairs.empty()) continue;
      block.radius = scale * static_cast<double>(block.pairs.size());
      blocks.push_back(std::move(block));
    }
  }
  return BlockPenalty(n, std::move(blocks), std::move(diag_lambda));
}

DualPoint::DualPoint(Matrix w) : w_(std::move(w)) {
  if (!w_.is_square()) throw Error(Errc::DimensionMismatch, "dual point must be square");
  symmetrize(w_);
}

DualPoint DualPoint::checked(const EmpiricalCovariance& cov, Matrix w) {
  DualPoint p(std::move(w));
  if (p.n() != cov.n()) throw Error(Errc::DimensionMismatch, "dual point and covariance differ in size");
  cholesky(cov.entries() + p.w());
  return p;
}

void SolveOptions::validate() const {
  auto fail = [](const char* what) { throw Error(Errc::InvalidArgument, what); };
  if (!(gap_tol > 0.0)) fail("gap_tol must be > 0");
  if (!(armijo_alpha > 0.0 && armijo_alpha < 1.0)) fail("armijo_alpha must lie in (0,1)");
  if (!(armijo_beta > 0.0 && armijo_beta < 1.0)) fail("armijo_beta must lie in (0,1)");
  if (!(halving_min_t > 0.0)) fail("halving_min_t must be > 0");
  if (!(sparsity_tol >= 0.0)) fail("sparsity_tol must be >= 0");
  if (!(complementarity_margin >= 0.0)) fail("complementarity_margin must be >= 0");
}

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::GapReached: return "GapReached";
    case Termination::MaxIter: return "MaxIter";
    case Termination::LineSearchStalled: return "LineSearchStalled";
  }
  return "Unknown";
}

}  // namespace covsel
