#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scsvm/evaluation.hpp"
#include "scsvm/mpm.hpp"
#include "scsvm/reference_results.hpp"

namespace scsvm {

/// Environment variable naming the dataset cache directory.
inline constexpr const char* kDataDirEnv = "SCSVM_DATA_DIR";

/// `name_or_path` itself if it exists, otherwise $SCSVM_DATA_DIR/name_or_path (which may not exist).
std::filesystem::path resolve_dataset_path(const std::string& name_or_path);

struct DatasetEntry {
  std::string name;
  std::filesystem::path train;
  std::optional<std::filesystem::path> test;  // absent: split `train`
};

/**
 * Manifest lines are "name train_path [test_path]"; '#' starts a comment.
 * Relative paths resolve against the manifest's directory first, then the
 * dataset cache directory.
 */
std::vector<DatasetEntry> read_manifest(const std::filesystem::path& path);

inline const std::vector<double> kDefaultSrGrid = {0.01, 0.05, 0.10, 0.15, 0.25, 0.50};

struct BenchConfig {
  MpmConfig mpm;  // s / sparse_ratio are overwritten per row
  std::vector<double> sr_grid = kDefaultSrGrid;
  double test_fraction = 0.2;
  std::uint64_t seed = 42;
  bool compare_dcd = false;
  DcdConfig dcd;
  unsigned jobs = 1;
};

struct BenchmarkRow {
  std::string dataset;
  double sr = 0.0;
  std::size_t s = 0;
  int k = 0;
  long cg = 0;
  double time_s = 0.0;
  double accuracy_pct = 0.0;
  std::size_t train_misclassified = 0;
  bool converged = false;
  bool failed = false;
  std::string error;
  std::optional<double> dcd_time_s;
  std::optional<double> dcd_accuracy_pct;
  std::vector<IterationRecord> history;
};

/// One row per (dataset, SR). Failures are recorded in their rows and do not stop the run.
std::vector<BenchmarkRow> run_benchmark(const std::vector<DatasetEntry>& datasets, const BenchConfig& cfg);

/// Header plus rows: dataset,sr,k,cg,time_s,accuracy_pct,train_misclassified,s[,dcd columns],status.
std::string benchmark_csv(const std::vector<BenchmarkRow>& rows, bool include_dcd);

/// Array of row objects with histories and the published reference numbers, where known.
std::string benchmark_json(const std::vector<BenchmarkRow>& rows);

}  // namespace scsvm
