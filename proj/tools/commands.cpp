#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "covsel/error.hpp"
#include "covsel/eval.hpp"
#include "covsel/harness.hpp"
#include "covsel/io.hpp"
#include "covsel/kernels.hpp"
#include "covsel/solver_block.hpp"
#include "covsel/solver_box.hpp"
#include "covsel/synth.hpp"

namespace covsel::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct DataArgs {
  std::string cov;
  std::string data;
  std::string mean;
};

struct SolveArgs {
  DataArgs input;
  std::optional<double> lambda;
  std::string lambda_file;
  std::string blocks;
  std::string groups;
  std::optional<double> group_scale;
  std::optional<double> default_radius;
  std::optional<double> diag_lambda;
  double gap_tol = 0.1;
  std::size_t max_iter = 1000;
  std::string out;
  bool timestamped = false;
};

struct SweepArgs {
  DataArgs train;
  std::string test_cov;
  std::string test_data;
  std::size_t points = 20;
  std::optional<double> lambda_max;
  double lambda_min = 1e-3;
  double diag_lambda = 0.0;
  std::string groups;
  bool tikhonov = false;
  double nu_min = 1e-3;
  double nu_max = 10.0;
  std::optional<std::size_t> target_edges;
  double gap_tol = 0.1;
  std::size_t max_iter = 1000;
  std::string out;
};

struct SynthArgs {
  std::size_t n = 0;
  std::optional<double> edges_per_node;
  std::optional<double> density;
  std::optional<std::size_t> groups;
  double block_prob = 0.5;
  std::size_t m = 0;
  std::optional<std::size_t> test_m;
  std::uint64_t seed = 0;
  std::string out;
};

struct EvalArgs {
  DataArgs test;
  std::string precision;
  std::string model;
  std::string truth;
  double sparsity_tol = 0.0;
};

struct ClassifyArgs {
  std::vector<std::string> models;
  std::string data;
  std::string labels;
  std::string out;
};

std::vector<double> read_vector(const std::string& path) {
  const Matrix m = io::read_matrix(path);
  return std::vector<double>(m.values().begin(), m.values().end());
}

// Covariance from --cov, or from --data about --mean (sample mean when absent).
// Also returns the mean used, zero for --cov without --mean.
EmpiricalCovariance load_covariance(const DataArgs& a, std::vector<double>* mean_out = nullptr) {
  if (a.cov.empty() == a.data.empty()) {
    throw Error(Errc::InvalidArgument, "give exactly one of --cov / --data");
  }
  std::optional<std::vector<double>> mean;
  if (!a.mean.empty()) mean = read_vector(a.mean);
  if (!a.cov.empty()) {
    EmpiricalCovariance cov(io::read_matrix(a.cov));
    if (mean_out) *mean_out = mean ? *mean : std::vector<double>(cov.n(), 0.0);
    return cov;
  }
  const Dataset data{io::read_matrix(a.data)};
  if (!mean) mean = sample_mean(data);
  if (mean_out) *mean_out = *mean;
  return empirical_covariance(data, mean);
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  localtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y%m%d-%H%M%S");
  return s.str();
}

fs::path prepare_out(const std::string& out, bool timestamped) {
  fs::path dir = out;
  if (timestamped) dir /= timestamp();
  fs::create_directories(dir);
  return dir;
}

json report_json(const SolveReport& r, const PrecisionEstimate& est) {
  return json{
      {"termination", std::string(to_string(r.termination))},
      {"iterations", r.iterations},
      {"initial_gap", r.initial_gap},
      {"initial_objective", r.initial_objective},
      {"final_gap", r.final_gap()},
      {"final_objective", r.final_objective()},
      {"gaps", r.gaps},
      {"objectives", r.objectives},
      {"step_sizes", r.step_sizes},
      {"iteration_seconds", r.iteration_seconds},
      {"wall_seconds", r.wall_seconds},
      {"edge_count", est.edges.size()},
      {"truncation_broke_pd", est.truncation_broke_pd},
  };
}

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  std::vector<double> mean;
  const EmpiricalCovariance cov = load_covariance(a.input, &mean);
  const std::size_t n = cov.n();

  SolveOptions opts;
  opts.gap_tol = a.gap_tol;
  opts.max_iter = a.max_iter;

  const int sources = int(a.lambda.has_value()) + int(!a.lambda_file.empty()) + int(!a.blocks.empty()) +
                      int(!a.groups.empty());
  if (sources != 1) {
    throw Error(Errc::InvalidArgument, "give exactly one of --lambda / --lambda-file / --blocks / --groups");
  }
  const double diag = a.diag_lambda.value_or(0.0);

  SolveResult result;
  std::string kind;
  if (a.lambda || !a.lambda_file.empty()) {
    kind = a.lambda ? "scalar" : "matrix";
    ElementwisePenalty penalty = a.lambda ? ElementwisePenalty::uniform(n, *a.lambda, diag)
                                          : ElementwisePenalty(io::read_matrix(a.lambda_file));
    if (!a.lambda && a.diag_lambda) {
      Matrix l = penalty.lambda();
      for (std::size_t i = 0; i < l.rows(); ++i) l(i, i) = *a.diag_lambda;
      penalty = ElementwisePenalty(std::move(l));
    }
    if (penalty.n() != n) throw Error(Errc::DimensionMismatch, "penalty and covariance differ in size");
    require_valid(penalty);
    result = solve_box(cov, penalty, opts);
  } else {
    std::vector<double> diag_lambda(n, diag);
    std::optional<BlockPenalty> penalty;
    if (!a.blocks.empty()) {
      kind = "blocks";
      auto blocks = io::read_blocks(a.blocks);
      penalty = a.default_radius
                    ? BlockPenalty::with_default(n, std::move(blocks), std::move(diag_lambda), *a.default_radius)
                    : BlockPenalty(n, std::move(blocks), std::move(diag_lambda));
    } else {
      kind = "groups";
      if (!a.group_scale) throw Error(Errc::InvalidArgument, "--groups needs --group-scale");
      penalty = blocks_from_groups(io::read_groups(a.groups), *a.group_scale, std::move(diag_lambda));
      if (penalty->n() != n) throw Error(Errc::DimensionMismatch, "groups and covariance differ in size");
    }
    require_valid(*penalty);
    result = solve_block(cov, *penalty, opts);
  }

  const fs::path dir = prepare_out(a.out, a.timestamped);
  io::write_matrix(dir / "precision.txt", result.estimate.k);
  io::write_edges(dir / "edges.txt", result.estimate);
  io::write_model(dir / "model.txt", GaussianModel{mean, result.estimate});
  json report = report_json(result.report, result.estimate);
  report["command"] = "solve";
  report["n"] = n;
  report["penalty"] = kind;
  report["gap_tol"] = opts.gap_tol;
  report["max_iter"] = opts.max_iter;
  report["kernels"] = std::string(active_kernels().name);
  std::ofstream(dir / "report.json") << report.dump(2) << '\n';

  out << "termination=" << to_string(result.report.termination) << " iterations=" << result.report.iterations
      << " gap=" << result.report.final_gap() << " edges=" << result.estimate.edges.size() << '\n';
  return result.report.termination == Termination::GapReached ? 0 : 2;
}

Matrix load_test_covariance(const SweepArgs& a, const std::vector<double>& train_mean) {
  if (a.test_cov.empty() == a.test_data.empty()) {
    throw Error(Errc::InvalidArgument, "give exactly one of --test-cov / --test-data");
  }
  if (!a.test_cov.empty()) return EmpiricalCovariance(io::read_matrix(a.test_cov)).entries();
  const Dataset test{io::read_matrix(a.test_data)};
  return empirical_covariance(test, train_mean).entries();
}

void write_rows(std::ostream& f, const char* key, const std::vector<SweepRow>& rows,
                const std::vector<TikhonovRow>* tik) {
  f << key << "\tedges\ttrain_objective\ttest_loglik\tgap\titerations\ttermination";
  if (tik) f << "\tnu\ttikhonov_test_loglik";
  f << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    f << io::format_double(row.lambda) << '\t' << row.edges << '\t' << io::format_double(row.train_objective)
      << '\t' << io::format_double(row.test_loglik) << '\t' << io::format_double(row.gap) << '\t'
      << row.iterations << '\t' << to_string(row.termination);
    if (tik) f << '\t' << io::format_double((*tik)[r].nu) << '\t' << io::format_double((*tik)[r].test_loglik);
    f << '\n';
  }
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  std::vector<double> mean;
  const EmpiricalCovariance train = load_covariance(a.train, &mean);
  const Matrix test = load_test_covariance(a, mean);
  if (test.rows() != train.n()) throw Error(Errc::DimensionMismatch, "train and test differ in dimension");

  SolveOptions opts;
  opts.gap_tol = a.gap_tol;
  opts.max_iter = a.max_iter;

  const double hi = a.lambda_max.value_or(max_off_diagonal(train));
  if (!(hi > a.lambda_min)) throw Error(Errc::InvalidArgument, "lambda grid maximum must exceed its minimum");
  const fs::path dir = prepare_out(a.out, false);

  if (a.target_edges) {
    const LambdaSearch s = bisect_lambda_for_edges(train, *a.target_edges, a.lambda_min, hi, opts);
    std::ofstream(dir / "lambda_search.json")
        << json{{"target_edges", *a.target_edges}, {"lambda", s.lambda}, {"edges", s.edges}, {"solves", s.solves}}
               .dump(2)
        << '\n';
    out << "lambda=" << io::format_double(s.lambda) << " edges=" << s.edges << '\n';
    return 0;
  }

  const auto lambdas = log_grid(hi, a.lambda_min, a.points);
  const auto rows = sweep_box(train, test, lambdas, a.diag_lambda, opts);
  std::vector<TikhonovRow> tik;
  if (a.tikhonov) tik = sweep_tikhonov(train.entries(), test, log_grid(a.nu_max, a.nu_min, a.points));
  {
    std::ofstream f(dir / "sweep.tsv");
    write_rows(f, "lambda", rows, a.tikhonov ? &tik : nullptr);
  }
  if (!a.groups.empty()) {
    const auto groups = io::read_groups(a.groups);
    const auto block_rows = sweep_groups(train, test, groups, lambdas, a.diag_lambda, opts);
    std::ofstream f(dir / "block_sweep.tsv");
    write_rows(f, "scale", block_rows, nullptr);
  }
  out << "wrote " << rows.size() << " rows to " << (dir / "sweep.tsv").string() << '\n';
  return 0;
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  if (a.n == 0 || a.m == 0) throw Error(Errc::InvalidArgument, "--n and --m must be >= 1");
  const int modes = int(a.edges_per_node.has_value()) + int(a.density.has_value() && !a.groups);
  if (!a.groups && modes != 1) {
    throw Error(Errc::InvalidArgument, "give exactly one of --edges-per-node / --density");
  }
  const std::uint64_t sample_seed = a.seed ^ 0x9E3779B97F4A7C15ULL;
  const fs::path dir = prepare_out(a.out, false);

  PrecisionEstimate truth;
  if (a.groups) {
    const auto groups = random_partition(a.n, *a.groups, a.seed + 2);
    truth = random_block_precision(groups, a.block_prob, a.density.value_or(1.0), a.seed);
    io::write_groups(dir / "groups.txt", groups);
  } else if (a.edges_per_node) {
    truth = random_sparse_precision(a.n, *a.edges_per_node, a.seed);
  } else {
    truth = random_sparse_precision_with_density(a.n, *a.density, a.seed);
  }
  const GaussianModel model{std::vector<double>(a.n, 0.0), truth};
  const std::size_t test_m = a.test_m.value_or(a.m);
  const Dataset all = sample_gaussian(model, a.m + test_m, sample_seed);

  io::write_matrix(dir / "precision.txt", truth.k);
  io::write_edges(dir / "edges.txt", truth);
  io::write_model(dir / "model.txt", model);
  io::write_matrix(dir / "data.txt", all.samples);
  io::write_matrix(dir / "train.txt", slice_rows(all, 0, a.m).samples);
  if (test_m > 0) io::write_matrix(dir / "test.txt", slice_rows(all, a.m, a.m + test_m).samples);
  out << "n=" << a.n << " edges=" << truth.edges.size() << " train=" << a.m << " test=" << test_m << '\n';
  return 0;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  if (a.precision.empty() == a.model.empty()) {
    throw Error(Errc::InvalidArgument, "give exactly one of --precision / --model");
  }
  Matrix k;
  std::vector<double> model_mean;
  if (!a.model.empty()) {
    GaussianModel model = io::read_model(a.model);
    k = std::move(model.precision.k);
    model_mean = std::move(model.mean);
  } else {
    k = io::read_matrix(a.precision);
  }
  // Test samples are centered on the model's mean unless --mean says otherwise.
  const EmpiricalCovariance cov = (!model_mean.empty() && a.test.mean.empty() && !a.test.data.empty())
                                      ? empirical_covariance(Dataset{io::read_matrix(a.test.data)}, model_mean)
                                      : load_covariance(a.test);
  json result;
  result["avg_loglik"] = avg_loglik(cov, k);
  if (!a.truth.empty()) {
    const Matrix truth = io::read_matrix(a.truth);
    if (truth.rows() != k.rows()) throw Error(Errc::DimensionMismatch, "truth and estimate differ in size");
    std::vector<Edge> te, re;
    for (std::size_t i = 0; i < k.rows(); ++i) {
      for (std::size_t j = i + 1; j < k.rows(); ++j) {
        if (truth(i, j) != 0.0) te.emplace_back(i, j);
        if (std::abs(k(i, j)) > a.sparsity_tol) re.emplace_back(i, j);
      }
    }
    const StructureMetrics m = structure_metrics(te, re);
    result["true_pos"] = m.true_pos;
    result["false_pos"] = m.false_pos;
    result["false_neg"] = m.false_neg;
    result["precision"] = m.precision;
    result["recall"] = m.recall;
  }
  out << result.dump(2) << '\n';
  return 0;
}

int cmd_classify(const ClassifyArgs& a, std::ostream& out) {
  std::vector<LabeledModel> models;
  for (const auto& spec : a.models) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(Errc::InvalidArgument, "--model expects label=path");
    models.push_back({spec.substr(0, eq), io::read_model(spec.substr(eq + 1))});
  }
  if (models.empty()) throw Error(Errc::InvalidArgument, "at least one --model is required");
  const Dataset data{io::read_matrix(a.data)};
  for (const auto& m : models) {
    if (m.model.n() != data.n()) {
      throw Error(Errc::DimensionMismatch, "model '" + m.label + "' has dimension " + std::to_string(m.model.n()) +
                                               ", data has " + std::to_string(data.n()));
    }
  }
  std::vector<std::string> predicted;
  predicted.reserve(data.m());
  for (std::size_t s = 0; s < data.m(); ++s) predicted.push_back(classify(data.samples.row(s), models));

  const fs::path dir = prepare_out(a.out, false);
  io::write_labels(dir / "predictions.txt", predicted);
  if (a.labels.empty()) {
    out << "classified " << predicted.size() << " samples\n";
    return 0;
  }
  const auto truth = io::read_labels(a.labels);
  if (truth.size() != predicted.size()) throw Error(Errc::DimensionMismatch, "labels and data differ in length");

  // Per class c: false negative rate = class-c samples not predicted c / class-c
  // samples; false positive rate = other samples predicted c / other samples.
  std::ofstream f(dir / "rates.tsv");
  f << "class\tsupport\tfalse_negative_rate\tfalse_positive_rate\n";
  std::size_t errors = 0;
  for (std::size_t s = 0; s < truth.size(); ++s) errors += truth[s] != predicted[s];
  for (const auto& m : models) {
    std::size_t pos = 0, fn = 0, fp = 0;
    for (std::size_t s = 0; s < truth.size(); ++s) {
      if (truth[s] == m.label) {
        ++pos;
        fn += predicted[s] != m.label;
      } else {
        fp += predicted[s] == m.label;
      }
    }
    const std::size_t neg = truth.size() - pos;
    f << m.label << '\t' << pos << '\t' << io::format_double(pos ? double(fn) / double(pos) : 0.0) << '\t'
      << io::format_double(neg ? double(fp) / double(neg) : 0.0) << '\n';
  }
  out << "classified " << predicted.size() << " samples, " << errors << " errors\n";
  return 0;
}

void add_data_flags(CLI::App* cmd, DataArgs& d, const char* cov_help) {
  cmd->add_option("--cov", d.cov, cov_help);
  cmd->add_option("--data", d.data, "Sample matrix file (one sample per row)");
  cmd->add_option("--mean", d.mean, "Mean vector file (default: sample mean of --data)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse Gaussian structure learning by projected gradient on the covariance-selection dual"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve one penalized problem");
  add_data_flags(s, solve.input, "Empirical covariance matrix file");
  s->add_option("--lambda", solve.lambda, "Uniform off-diagonal penalty");
  s->add_option("--lambda-file", solve.lambda_file, "Penalty matrix file");
  s->add_option("--blocks", solve.blocks, "Block file: 'radius i,j i,j ...' per line");
  s->add_option("--default-radius", solve.default_radius, "Radius for pairs missing from --blocks");
  s->add_option("--groups", solve.groups, "Group file: variable indices per line");
  s->add_option("--group-scale", solve.group_scale, "Per-pair scale for group blocks (radius = scale * pairs)");
  s->add_option("--diag-lambda", solve.diag_lambda, "Diagonal penalty (default 0)");
  s->add_option("--gap-tol", solve.gap_tol, "Duality gap stopping tolerance")->capture_default_str();
  s->add_option("--max-iter", solve.max_iter, "Iteration cap")->capture_default_str();
  s->add_option("--out", solve.out, "Output directory")->required();
  s->add_flag("--timestamped", solve.timestamped, "Write into a timestamped subdirectory of --out");

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Sweep the penalty and score on test data");
  add_data_flags(w, sweep.train, "Training covariance matrix file");
  w->add_option("--test-cov", sweep.test_cov, "Test covariance matrix file");
  w->add_option("--test-data", sweep.test_data, "Test sample matrix file");
  w->add_option("--points", sweep.points, "Grid size")->capture_default_str();
  w->add_option("--lambda-max", sweep.lambda_max, "Grid maximum (default max |cov_ij|, i != j)");
  w->add_option("--lambda-min", sweep.lambda_min, "Grid minimum")->capture_default_str();
  w->add_option("--diag-lambda", sweep.diag_lambda, "Diagonal penalty")->capture_default_str();
  w->add_option("--groups", sweep.groups, "Also sweep group-block penalties over the same grid");
  w->add_flag("--tikhonov", sweep.tikhonov, "Add a Tikhonov baseline column");
  w->add_option("--nu-min", sweep.nu_min, "Tikhonov grid minimum")->capture_default_str();
  w->add_option("--nu-max", sweep.nu_max, "Tikhonov grid maximum")->capture_default_str();
  w->add_option("--target-edges", sweep.target_edges, "Bisect lambda for this edge count instead of sweeping");
  w->add_option("--gap-tol", sweep.gap_tol)->capture_default_str();
  w->add_option("--max-iter", sweep.max_iter)->capture_default_str();
  w->add_option("--out", sweep.out, "Output directory")->required();

  SynthArgs synth;
  auto* y = app.add_subcommand("synth", "Generate a synthetic sparse Gaussian and samples");
  y->add_option("--n", synth.n, "Dimension")->required();
  y->add_option("--edges-per-node", synth.edges_per_node, "Average edges per node");
  y->add_option("--density", synth.density, "Fraction of off-diagonal pairs that are edges");
  y->add_option("--groups", synth.groups, "Block-structured truth over this many random groups");
  y->add_option("--block-prob", synth.block_prob, "Probability a group pair is active")->capture_default_str();
  y->add_option("--m", synth.m, "Training samples")->required();
  y->add_option("--test-m", synth.test_m, "Test samples (default --m)");
  y->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  y->add_option("--out", synth.out, "Output directory")->required();

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Score a precision matrix on test data");
  add_data_flags(e, eval.test, "Test covariance matrix file");
  e->add_option("--precision", eval.precision, "Precision matrix file");
  e->add_option("--model", eval.model, "Model file (mean row + precision)");
  e->add_option("--truth", eval.truth, "Ground-truth precision for structure metrics");
  e->add_option("--sparsity-tol", eval.sparsity_tol, "|K_ij| above this counts as an edge")->capture_default_str();

  ClassifyArgs cls;
  auto* c = app.add_subcommand("classify", "Maximum-likelihood classification with per-class Gaussians");
  c->add_option("--model", cls.models, "label=path, repeat per class")->required();
  c->add_option("--data", cls.data, "Samples to classify")->required();
  c->add_option("--labels", cls.labels, "True labels, one per line, for error rates");
  c->add_option("--out", cls.out, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*s) return cmd_solve(solve, out);
    if (*w) return cmd_sweep(sweep, out);
    if (*y) return cmd_synth(synth, out);
    if (*e) return cmd_eval(eval, out);
    if (*c) return cmd_classify(cls, out);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace covsel::cli
