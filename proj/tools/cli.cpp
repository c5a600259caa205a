#include "cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "scsvm/benchmark_harness.hpp"
#include "scsvm/dataset.hpp"
#include "scsvm/error.hpp"
#include "scsvm/evaluation.hpp"
#include "scsvm/mpm.hpp"

namespace scsvm::cli {

namespace {

struct SolverFlags {
  double rho = 0.4;
  double cg_tol = 1e-3;
  int cg_max = 500;
  std::size_t dense_threshold = kDefaultDenseThreshold;
  int max_outer = 1000;
  double f_tol_factor = 1e-3;
  double p_tol = 1e-3;
  bool warm_start = false;
  double rho_growth = 1.0;
  double rho_max = 1e8;

  MpmConfig to_config() const {
    MpmConfig cfg;
    cfg.rho = rho;
    cfg.cg.tol = cg_tol;
    cfg.cg.max_iter = cg_max;
    cfg.dense_threshold = dense_threshold;
    cfg.max_outer = max_outer;
    cfg.f_tol_factor = f_tol_factor;
    cfg.p_tol = p_tol;
    cfg.warm_start = warm_start;
    cfg.rho_growth = rho_growth;
    cfg.rho_max = rho_max;
    return cfg;
  }
};

void add_solver_flags(CLI::App& cmd, SolverFlags& flags) {
  cmd.add_option("--rho", flags.rho, "Penalty parameter rho (published default 0.4)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--cg-tol", flags.cg_tol, "Absolute CG residual tolerance (published default 1e-3)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--cg-max", flags.cg_max, "CG iteration cap per subproblem (published default 500)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--dense-threshold", flags.dense_threshold,
                 "Use the direct solver when the feature count is below this (published rule: m < 100)")
      ->capture_default_str();
  cmd.add_option("--max-outer", flags.max_outer, "Outer iteration cap (safety limit, not a published setting)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--f-tol-factor", flags.f_tol_factor, "f-prog threshold is sqrt(n) times this (published 1e-3)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--p-tol", flags.p_tol, "p-prog threshold (published 1e-3)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_flag("--warm-start", flags.warm_start, "Start CG from the previous iterate instead of zero (off by default)");
  cmd.add_option("--rho-growth", flags.rho_growth,
                 "Multiply rho by this after each outer step; 1 keeps rho fixed as published")
      ->capture_default_str()
      ->check(CLI::Range(1.0, 1e6));
  cmd.add_option("--rho-max", flags.rho_max, "Upper bound for rho when --rho-growth > 1")->capture_default_str();
}

std::optional<std::size_t> optional_features(std::size_t value) {
  return value == 0 ? std::nullopt : std::optional<std::size_t>(value);
}

// ---------------------------------------------------------------- train

struct TrainFlags {
  std::string data;
  std::optional<double> sr;
  std::optional<std::size_t> s;
  std::string model_path = "scsvm.model";
  std::string report_path = "scsvm_report.json";
  double test_fraction = 0.0;
  std::uint64_t seed = 42;
  std::size_t num_features = 0;
  std::string format = "text";
  SolverFlags solver;
};

int cmd_train(const TrainFlags& flags, std::ostream& out, std::ostream& err) {
  if (flags.sr.has_value() == flags.s.has_value()) {
    err << "train: give exactly one of --sr and --s\n";
    return kUsageOrIoError;
  }
  const auto path = resolve_dataset_path(flags.data);
  auto data = load_signed_dataset(path, {optional_features(flags.num_features)});

  std::optional<SparseDataset> test;
  if (flags.test_fraction > 0.0) {
    auto parts = split(data, flags.test_fraction, flags.seed);
    data = std::move(parts.train);
    test = std::move(parts.test);
  }

  MpmConfig cfg = flags.solver.to_config();
  cfg.sparse_ratio = flags.sr;
  cfg.s = flags.s;
  auto [model, report] = mpm_train(data, cfg);

  write_model(model, std::filesystem::path(flags.model_path));
  {
    std::ofstream rep(flags.report_path);
    if (!rep) throw Error(fmt::format("cannot write report to '{}'", flags.report_path));
    rep << train_report_to_json(report) << '\n';
  }

  const double train_acc = accuracy(model, data);
  const auto misclassified = train_misclassified_count(model, data);
  const double sr_pct = 100.0 * static_cast<double>(report.s) / static_cast<double>(report.n);
  if (flags.format == "json") {
    nlohmann::json j = {{"k", report.outer_iterations},
                        {"cg", report.total_cg},
                        {"time_s", report.wall_time_s},
                        {"s", report.s},
                        {"sr_pct", sr_pct},
                        {"train_accuracy_pct", train_acc},
                        {"train_misclassified", misclassified},
                        {"termination", to_string(report.termination)},
                        {"model", flags.model_path},
                        {"report", flags.report_path}};
    if (test) j["test_accuracy_pct"] = accuracy(model, *test);
    out << j.dump() << '\n';
  } else {
    out << fmt::format("k={} cg={} time={:.3f}s s={} (SR={:.2f}%) train_accuracy={:.4f}% train_misclassified={}\n",
                       report.outer_iterations, report.total_cg, report.wall_time_s, report.s, sr_pct, train_acc,
                       misclassified);
    if (test) out << fmt::format("test_accuracy={:.4f}% on {} held-out samples\n", accuracy(model, *test), test->num_samples());
  }
  if (report.projection_tie_at_exit) {
    err << "warning: margin ties at the s-th position at exit; the projection is not unique there\n";
  }
  if (!report.converged()) {
    err << fmt::format("train: stopped after max_outer = {} iterations without meeting the stopping rule\n",
                       cfg.max_outer);
    return kNotConverged;
  }
  return kSuccess;
}

// ---------------------------------------------------------------- predict / eval

struct ModelDataFlags {
  std::string model_path;
  std::string data;
  std::string format = "text";
};

struct LoadedPair {
  ModelTheta model;
  SparseDataset data;
};

LoadedPair load_model_and_data(const ModelDataFlags& flags) {
  auto model = read_model(std::filesystem::path(flags.model_path));
  // Indices beyond the model's feature count are rejected by the parser.
  auto data = load_signed_dataset(resolve_dataset_path(flags.data), {model.num_features()});
  return {std::move(model), std::move(data)};
}

int cmd_predict(const ModelDataFlags& flags, std::ostream& out) {
  const auto [model, data] = load_model_and_data(flags);
  const auto predictions = predict_all(model, data);
  if (flags.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : predictions) arr.push_back({{"score", p.score}, {"label", static_cast<int>(p.label)}});
    out << arr.dump() << '\n';
  } else {
    out << "score,label\n";
    for (const auto& p : predictions) out << fmt::format("{},{}\n", p.score, static_cast<int>(p.label));
  }
  return kSuccess;
}

int cmd_eval(const ModelDataFlags& flags, std::ostream& out) {
  const auto [model, data] = load_model_and_data(flags);
  const double acc = accuracy(model, data);
  const auto violations = train_misclassified_count(model, data);
  const auto wrong = sign_error_count(model, data);
  if (flags.format == "json") {
    nlohmann::json j = {{"n", data.num_samples()},
                        {"accuracy_pct", acc},
                        {"misclassified", wrong},
                        {"margin_violations", violations}};
    out << j.dump() << '\n';
  } else {
    out << fmt::format("accuracy={:.4f}% misclassified={} margin_violations={} n={}\n", acc, wrong, violations,
                       data.num_samples());
  }
  return kSuccess;
}

// ---------------------------------------------------------------- bench

struct BenchFlags {
  std::string manifest;
  std::vector<std::string> datasets;
  std::vector<double> sr_grid = kDefaultSrGrid;
  bool compare_dcd = false;
  double dcd_c = 1.0;
  unsigned jobs = 1;
  std::string format = "csv";
  std::string out_path;
  double test_fraction = 0.2;
  std::uint64_t seed = 42;
  SolverFlags solver;
};

int cmd_bench(const BenchFlags& flags, std::ostream& out, std::ostream& err) {
  std::vector<DatasetEntry> entries;
  if (!flags.manifest.empty()) entries = read_manifest(flags.manifest);
  for (const auto& arg : flags.datasets) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos) {
      entries.push_back({arg, resolve_dataset_path(arg), std::nullopt});
    } else {
      entries.push_back({arg.substr(0, eq), resolve_dataset_path(arg.substr(eq + 1)), std::nullopt});
    }
  }

  BenchConfig cfg;
  cfg.mpm = flags.solver.to_config();
  cfg.sr_grid = flags.sr_grid;
  cfg.compare_dcd = flags.compare_dcd;
  cfg.dcd.C = flags.dcd_c;
  cfg.jobs = flags.jobs;
  cfg.test_fraction = flags.test_fraction;
  cfg.seed = flags.seed;
  const auto rows = run_benchmark(entries, cfg);

  const std::string doc = flags.format == "json" ? benchmark_json(rows) + "\n" : benchmark_csv(rows, flags.compare_dcd);
  if (flags.out_path.empty()) {
    out << doc;
  } else {
    std::ofstream file(flags.out_path);
    if (!file) throw Error(fmt::format("cannot write '{}'", flags.out_path));
    file << doc;
  }

  bool any_failed = false;
  for (const auto& row : rows) {
    if (row.failed) {
      any_failed = true;
      err << fmt::format("bench: {} at SR={:g}% failed: {}\n", row.dataset, 100.0 * row.sr, row.error);
    }
  }
  return any_failed ? kUsageOrIoError : kSuccess;
}

// ---------------------------------------------------------------- stats

struct StatsFlags {
  std::vector<std::string> data;
  std::string format = "json";
  std::size_t num_features = 0;
};

int cmd_stats(const StatsFlags& flags, std::ostream& out) {
  if (flags.format == "csv") out << stats_csv_header() << '\n';
  for (const auto& name : flags.data) {
    const auto path = resolve_dataset_path(name);
    const auto stats = compute_stats(parse_svmlight(path, {optional_features(flags.num_features)}));
    const auto label = path.filename().string();
    out << (flags.format == "csv" ? stats_to_csv_row(stats, label) : stats_to_json(stats, label)) << '\n';
  }
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse-constrained linear SVM training with the majorization penalty method"};
  app.set_config("--config", "", "Read defaults from a key=value file ([train], [bench] ... sections for subcommands)");
  app.require_subcommand(1);

  TrainFlags train;
  auto* train_cmd = app.add_subcommand("train", "Train a model and write it with a JSON report");
  train_cmd->add_option("--data", train.data, "svmlight training file, or a name under $SCSVM_DATA_DIR")->required();
  auto* sr_opt = train_cmd->add_option("--sr", train.sr, "Sparse ratio s/n as a fraction, e.g. 0.10 (published setting 10%)")
                     ->check(CLI::Range(0.0, 1.0));
  auto* s_opt = train_cmd->add_option("--s", train.s, "Absolute budget of margin-violating samples");
  sr_opt->excludes(s_opt);
  train_cmd->add_option("--model", train.model_path, "Output model file")->capture_default_str();
  train_cmd->add_option("--report", train.report_path, "Output JSON training report")->capture_default_str();
  train_cmd->add_option("--test-fraction", train.test_fraction,
                        "Hold out this fraction (seeded) and report test accuracy; 0 trains on everything")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.999));
  train_cmd->add_option("--seed", train.seed, "Seed for the train/test split")->capture_default_str();
  train_cmd->add_option("--num-features", train.num_features, "Force the feature count m (0: max index seen)")
      ->capture_default_str();
  train_cmd->add_option("--format", train.format, "Summary format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  add_solver_flags(*train_cmd, train.solver);

  ModelDataFlags predict;
  auto* predict_cmd = app.add_subcommand("predict", "Score every sample of a data file");
  predict_cmd->add_option("--model", predict.model_path, "Model file written by train")->required();
  predict_cmd->add_option("--data", predict.data, "svmlight file to score")->required();
  predict_cmd->add_option("--format", predict.format, "csv lines or a JSON array")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();

  ModelDataFlags eval;
  auto* eval_cmd = app.add_subcommand("eval", "Accuracy and misclassification counts of a model on labelled data");
  eval_cmd->add_option("--model", eval.model_path, "Model file written by train")->required();
  eval_cmd->add_option("--data", eval.data, "Labelled svmlight file")->required();
  eval_cmd->add_option("--format", eval.format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run the SR grid over a set of datasets and emit CSV or JSON");
  bench_cmd->add_option("--manifest", bench.manifest, "Manifest with lines 'name train_path [test_path]'");
  bench_cmd->add_option("--dataset", bench.datasets, "NAME=PATH or a name under $SCSVM_DATA_DIR (repeatable)");
  bench_cmd->add_option("--sr-grid", bench.sr_grid, "Sparse ratios as fractions (published grid 1,5,10,15,25,50%)")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_flag("--compare-dcd", bench.compare_dcd, "Add the dual coordinate descent hinge-loss baseline columns");
  bench_cmd->add_option("--dcd-c", bench.dcd_c, "C of the baseline (library default 1)")->capture_default_str();
  bench_cmd->add_option("--jobs", bench.jobs, "Maximum rows trained in parallel")->capture_default_str()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--format", bench.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  bench_cmd->add_option("--out", bench.out_path, "Write to this file instead of stdout");
  bench_cmd->add_option("--test-fraction", bench.test_fraction, "Held-out fraction for datasets without a test file")
      ->capture_default_str()
      ->check(CLI::Range(0.001, 0.999));
  bench_cmd->add_option("--seed", bench.seed, "Split seed")->capture_default_str();
  add_solver_flags(*bench_cmd, bench.solver);

  StatsFlags stats;
  auto* stats_cmd = app.add_subcommand("stats", "n, m, nonzeros and density of svmlight files");
  stats_cmd->add_option("--data", stats.data, "svmlight file(s) or names under $SCSVM_DATA_DIR")->required();
  stats_cmd->add_option("--format", stats.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  stats_cmd->add_option("--num-features", stats.num_features, "Force the feature count m (0: max index seen)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageOrIoError;
  }

  try {
    if (*train_cmd) return cmd_train(train, out, err);
    if (*predict_cmd) return cmd_predict(predict, out);
    if (*eval_cmd) return cmd_eval(eval, out);
    if (*bench_cmd) {
      if (bench.manifest.empty() && bench.datasets.empty()) {
        err << "bench: give --manifest and/or --dataset\n";
        return kUsageOrIoError;
      }
      return cmd_bench(bench, out, err);
    }
    if (*stats_cmd) return cmd_stats(stats, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrIoError;
  }
  return kUsageOrIoError;
}

}  // namespace scsvm::cli
