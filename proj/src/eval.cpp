#include "covsel/eval.hpp"

#include <algorithm>
#include <iterator>

#include "covsel/error.hpp"
#include "covsel/linalg.hpp"

namespace covsel {

double avg_loglik(const Matrix& test_cov, const Matrix& k) {
  if (!k.is_square() || test_cov.rows() != k.rows() || test_cov.cols() != k.cols()) {
    throw Error(Errc::DimensionMismatch, "avg_loglik shape mismatch");
  }
  return log_det(cholesky(k)) - trace_product(test_cov, k);
}

double avg_loglik(const EmpiricalCovariance& test_cov, const Matrix& k) {
  return avg_loglik(test_cov.entries(), k);
}

StructureMetrics structure_metrics(const std::vector<Edge>& truth, const std::vector<Edge>& recovered) {
  std::vector<Edge> t = truth;
  std::vector<Edge> r = recovered;
  std::sort(t.begin(), t.end());
  std::sort(r.begin(), r.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());

  std::vector<Edge> common;
  std::set_intersection(t.begin(), t.end(), r.begin(), r.end(), std::back_inserter(common));

  StructureMetrics out;
  out.true_pos = common.size();
  out.false_pos = r.size() - common.size();
  out.false_neg = t.size() - common.size();
  if (!r.empty()) out.precision = static_cast<double>(out.true_pos) / static_cast<double>(r.size());
  if (!t.empty()) out.recall = static_cast<double>(out.true_pos) / static_cast<double>(t.size());
  return out;
}

double class_score(std::span<const double> v, const GaussianModel& model) {
  if (v.size() != model.n() || model.precision.k.rows() != model.n()) {
    throw Error(Errc::DimensionMismatch, "sample and model differ in dimension");
  }
  std::vector<double> centered(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) centered[i] = v[i] - model.mean[i];
  return log_det(cholesky(model.precision.k)) - quadratic_form(model.precision.k, centered);
}

const std::string& classify(std::span<const double> v, std::span<const LabeledModel> models) {
  if (models.empty()) throw Error(Errc::InvalidArgument, "classify needs at least one model");
  std::size_t best = 0;
  double best_score = class_score(v, models[0].model);
  for (std::size_t c = 1; c < models.size(); ++c) {
    const double s = class_score(v, models[c].model);
    if (s > best_score) {
      best = c;
      best_score = s;
    }
  }
  return models[best].label;
}

}  // namespace covsel
