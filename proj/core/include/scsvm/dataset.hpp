#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scsvm/types.hpp"

namespace scsvm {

/// One sample of a CSR matrix: parallel spans of 0-based column indices and values.
struct SparseRowView {
  std::span<const std::int32_t> indices;
  std::span<const double> values;

  /// Inner product with the first `indices`-addressed entries of a dense vector.
  double dot(const Vector& dense) const noexcept;
};

/**
 * Labelled sample matrix A (n x m) stored in compressed sparse row form.
 *
 * Labels are whatever the file said until remap_labels() turns them into
 * {-1, +1}; training routines require signed labels. Immutable once built.
 */
class SparseDataset {
 public:
  SparseDataset() = default;

  /// Validates every CSR invariant and throws ParseError if one fails.
  SparseDataset(std::size_t num_features, std::vector<std::size_t> row_ptr,
                std::vector<std::int32_t> col_idx, std::vector<double> values,
                std::vector<double> labels);

  std::size_t num_samples() const noexcept { return labels_.size(); }
  std::size_t num_features() const noexcept { return num_features_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  SparseRowView row(std::size_t i) const noexcept {
    const auto begin = row_ptr_[i];
    const auto count = row_ptr_[i + 1] - begin;
    return {std::span(col_idx_).subspan(begin, count), std::span(values_).subspan(begin, count)};
  }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::int32_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> labels() const noexcept { return labels_; }
  double label(std::size_t i) const noexcept { return labels_[i]; }

  /// True iff every label is exactly -1 or +1.
  bool has_signed_labels() const noexcept;

  /// Same samples, wider feature space. Throws DimensionError when narrowing.
  SparseDataset with_num_features(std::size_t num_features) const;

  friend bool operator==(const SparseDataset&, const SparseDataset&) = default;

 private:
  std::size_t num_features_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::int32_t> col_idx_;
  std::vector<double> values_;
  std::vector<double> labels_;
};

struct ParseOptions {
  /// Forces m. Indices above it are a parse error. Defaults to the largest index seen.
  std::optional<std::size_t> num_features;
};

/// Reads "label idx:val idx:val ..." lines (1-based, strictly increasing indices).
SparseDataset parse_svmlight(std::istream& in, const ParseOptions& options = {});
SparseDataset parse_svmlight(const std::filesystem::path& path, const ParseOptions& options = {});

/// Writes with shortest round-trip formatting, so parsing the output reproduces `ds` exactly.
void write_svmlight(const SparseDataset& ds, std::ostream& out);

/// Maps exactly two raw label values onto {-1, +1}.
class LabelMap {
 public:
  LabelMap(double positive_raw, double negative_raw);

  /// {-1 -> -1, +1 -> +1}.
  static LabelMap identity();

  /**
   * Picks a mapping from the distinct raw labels in `ds`:
   *   {-1, +1} or a subset of it -> identity;
   *   {0, 1}                     -> 1 becomes +1;
   *   any other pair {a < b}     -> a becomes +1, b becomes -1 (e.g. 2/4 -> +1/-1).
   * More than two distinct values is an error.
   */
  static LabelMap infer(const SparseDataset& ds);

  /// Throws ConfigError naming the value if it is not in the map.
  double map(double raw) const;

  double positive_raw() const noexcept { return positive_; }
  double negative_raw() const noexcept { return negative_; }

 private:
  double positive_;
  double negative_;
};

SparseDataset remap_labels(const SparseDataset& ds, const LabelMap& map);

/// parse_svmlight + LabelMap::infer + remap_labels.
SparseDataset load_signed_dataset(const std::filesystem::path& path, const ParseOptions& options = {});

/// Rows `indices` of `ds`, in the given order.
SparseDataset subset(const SparseDataset& ds, std::span<const std::size_t> indices);

struct TrainTestSplit {
  SparseDataset train;
  SparseDataset test;
  std::vector<std::size_t> train_indices;  // ascending
  std::vector<std::size_t> test_indices;   // ascending
};

/**
 * Seeded random partition. The test part holds round(test_fraction * n) rows,
 * clamped so that both parts are nonempty. Identical (seed, fraction, n)
 * always yields the identical partition, on every platform.
 */
TrainTestSplit split(const SparseDataset& ds, double test_fraction, std::uint64_t seed);

struct DatasetStats {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t nnz = 0;
  double density_pct = 0.0;  // 100 * nnz / (m * n)
};

DatasetStats compute_stats(const SparseDataset& ds);

std::string stats_to_json(const DatasetStats& stats, const std::string& name);
std::string stats_csv_header();
/// "name,n,m,nnz,density" with density as a percentage to two decimals.
std::string stats_to_csv_row(const DatasetStats& stats, const std::string& name);

}  // namespace scsvm
