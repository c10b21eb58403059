#pragma once

#include <span>
#include <string>
#include <vector>

#include "covsel/matrix.hpp"
#include "covsel/model.hpp"
#include "covsel/synth.hpp"

namespace covsel {

/// log det K - tr(Σ̂_test·K). The -(n/2)·log 2π constant is dropped, so only
/// compare values computed on the same test data.
double avg_loglik(const Matrix& test_cov, const Matrix& k);
double avg_loglik(const EmpiricalCovariance& test_cov, const Matrix& k);

struct StructureMetrics {
  std::size_t true_pos = 0;
  std::size_t false_pos = 0;
  std::size_t false_neg = 0;
  double precision = 1.0;  // 1 when nothing was recovered
  double recall = 1.0;     // 1 when the truth is empty
};

StructureMetrics structure_metrics(const std::vector<Edge>& truth, const std::vector<Edge>& recovered);

struct LabeledModel {
  std::string label;
  GaussianModel model;
};

/// log det K - (v-μ)ᵀK(v-μ)
double class_score(std::span<const double> v, const GaussianModel& model);

/// Label of the highest-scoring model; ties go to the earliest model.
const std::string& classify(std::span<const double> v, std::span<const LabeledModel> models);

}  // namespace covsel
