#include "scsvm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <string_view>

#include <fmt/format.h>
#include <json.hpp>

#include "scsvm/error.hpp"

namespace scsvm {

double SparseRowView::dot(const Vector& dense) const noexcept {
  double sum = 0.0;
  for (std::size_t k = 0; k < indices.size(); ++k) sum += values[k] * dense[indices[k]];
  return sum;
}

SparseDataset::SparseDataset(std::size_t num_features, std::vector<std::size_t> row_ptr,
                             std::vector<std::int32_t> col_idx, std::vector<double> values,
                             std::vector<double> labels)
    : num_features_(num_features),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)),
      labels_(std::move(labels)) {
  if (row_ptr_.size() != labels_.size() + 1) {
    throw ParseError(fmt::format("row_ptr has {} entries for {} samples", row_ptr_.size(), labels_.size()));
  }
  if (row_ptr_.front() != 0 || row_ptr_.back() != values_.size() || col_idx_.size() != values_.size()) {
    throw ParseError("row_ptr does not span the column/value arrays");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1]) throw ParseError(fmt::format("row_ptr decreases at row {}", i));
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const auto col = col_idx_[k];
      if (col < 0 || static_cast<std::size_t>(col) >= num_features_) {
        throw ParseError(fmt::format("row {}: column {} outside [0, {})", i, col, num_features_));
      }
      if (k > row_ptr_[i] && col <= col_idx_[k - 1]) {
        throw ParseError(fmt::format("row {}: column indices not strictly increasing", i));
      }
    }
    if (!std::isfinite(labels_[i])) throw ParseError(fmt::format("row {}: non-finite label", i));
  }
}

bool SparseDataset::has_signed_labels() const noexcept {
  return std::all_of(labels_.begin(), labels_.end(), [](double y) { return y == 1.0 || y == -1.0; });
}

SparseDataset SparseDataset::with_num_features(std::size_t num_features) const {
  if (num_features < num_features_) {
    throw DimensionError(fmt::format("cannot narrow dataset from {} to {} features", num_features_, num_features));
  }
  SparseDataset copy = *this;
  copy.num_features_ = num_features;
  return copy;
}

namespace {

bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return false;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

bool parse_index(std::string_view token, long long& out) {
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc{} && ptr == end && !token.empty();
}

}  // namespace

SparseDataset parse_svmlight(std::istream& in, const ParseOptions& options) {
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::int32_t> col_idx;
  std::vector<double> values;
  std::vector<double> labels;
  long long max_index = 0;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    if (const auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);

    auto next_token = [&rest]() -> std::string_view {
      const auto start = rest.find_first_not_of(" \t\r");
      if (start == std::string_view::npos) {
        rest = {};
        return {};
      }
      rest.remove_prefix(start);
      const auto stop = std::min(rest.find_first_of(" \t\r"), rest.size());
      const auto token = rest.substr(0, stop);
      rest.remove_prefix(stop);
      return token;
    };

    const auto label_token = next_token();
    if (label_token.empty()) continue;
    double label = 0.0;
    if (!parse_double(label_token, label)) {
      throw ParseError(fmt::format("invalid label '{}'", label_token), line_no);
    }

    long long previous = 0;
    for (auto token = next_token(); !token.empty(); token = next_token()) {
      const auto colon = token.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(fmt::format("expected index:value, got '{}'", token), line_no);
      }
      long long index = 0;
      double value = 0.0;
      if (!parse_index(token.substr(0, colon), index) || index < 1) {
        throw ParseError(fmt::format("invalid feature index in '{}'", token), line_no);
      }
      if (!parse_double(token.substr(colon + 1), value)) {
        throw ParseError(fmt::format("invalid feature value in '{}'", token), line_no);
      }
      if (index == previous) throw ParseError(fmt::format("duplicate feature index {}", index), line_no);
      if (index < previous) throw ParseError(fmt::format("feature index {} follows {}", index, previous), line_no);
      if (options.num_features && static_cast<std::size_t>(index) > *options.num_features) {
        throw ParseError(fmt::format("feature index {} exceeds the declared {} features", index, *options.num_features),
                         line_no);
      }
      if (index > std::numeric_limits<std::int32_t>::max()) {
        throw ParseError(fmt::format("feature index {} too large", index), line_no);
      }
      previous = index;
      col_idx.push_back(static_cast<std::int32_t>(index - 1));
      values.push_back(value);
    }
    max_index = std::max(max_index, previous);
    labels.push_back(label);
    row_ptr.push_back(values.size());
  }
  if (in.bad()) throw ParseError("read error");
  if (labels.empty()) throw ParseError("no samples in input");

  const auto m = options.num_features.value_or(static_cast<std::size_t>(max_index));
  return SparseDataset(m, std::move(row_ptr), std::move(col_idx), std::move(values), std::move(labels));
}

SparseDataset parse_svmlight(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", path.string()));
  try {
    return parse_svmlight(in, options);
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()), e.line());
  }
}

void write_svmlight(const SparseDataset& ds, std::ostream& out) {
  fmt::memory_buffer buffer;
  for (std::size_t i = 0; i < ds.num_samples(); ++i) {
    buffer.clear();
    fmt::format_to(std::back_inserter(buffer), "{}", ds.label(i));
    const auto row = ds.row(i);
    for (std::size_t k = 0; k < row.indices.size(); ++k) {
      fmt::format_to(std::back_inserter(buffer), " {}:{}", row.indices[k] + 1, row.values[k]);
    }
    buffer.push_back('\n');
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  }
}

LabelMap::LabelMap(double positive_raw, double negative_raw) : positive_(positive_raw), negative_(negative_raw) {
  if (positive_raw == negative_raw) throw ConfigError("label map needs two distinct raw values");
}

LabelMap LabelMap::identity() { return LabelMap(1.0, -1.0); }

LabelMap LabelMap::infer(const SparseDataset& ds) {
  std::set<double> distinct(ds.labels().begin(), ds.labels().end());
  if (distinct.size() > 2) {
    throw ConfigError(fmt::format("expected a binary problem, found {} distinct labels", distinct.size()));
  }
  const bool signed_subset = std::all_of(distinct.begin(), distinct.end(), [](double y) { return y == 1.0 || y == -1.0; });
  if (signed_subset) return identity();
  if (distinct.size() == 1) {
    throw ConfigError(fmt::format("cannot infer a label map from the single label {}", *distinct.begin()));
  }
  const double low = *distinct.begin();
  const double high = *distinct.rbegin();
  if (low == 0.0 && high == 1.0) return LabelMap(1.0, 0.0);
  return LabelMap(low, high);
}

double LabelMap::map(double raw) const {
  if (raw == positive_) return 1.0;
  if (raw == negative_) return -1.0;
  throw ConfigError(fmt::format("label {} is not in the label map", raw));
}

SparseDataset remap_labels(const SparseDataset& ds, const LabelMap& map) {
  std::vector<double> labels(ds.labels().begin(), ds.labels().end());
  for (auto& y : labels) y = map.map(y);
  return SparseDataset(ds.num_features(), {ds.row_ptr().begin(), ds.row_ptr().end()},
                       {ds.col_idx().begin(), ds.col_idx().end()}, {ds.values().begin(), ds.values().end()},
                       std::move(labels));
}

SparseDataset load_signed_dataset(const std::filesystem::path& path, const ParseOptions& options) {
  auto raw = parse_svmlight(path, options);
  return remap_labels(raw, LabelMap::infer(raw));
}

SparseDataset subset(const SparseDataset& ds, std::span<const std::size_t> indices) {
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::int32_t> col_idx;
  std::vector<double> values;
  std::vector<double> labels;
  row_ptr.reserve(indices.size() + 1);
  labels.reserve(indices.size());
  for (const auto i : indices) {
    if (i >= ds.num_samples()) throw DimensionError(fmt::format("row {} out of range", i));
    const auto row = ds.row(i);
    col_idx.insert(col_idx.end(), row.indices.begin(), row.indices.end());
    values.insert(values.end(), row.values.begin(), row.values.end());
    row_ptr.push_back(values.size());
    labels.push_back(ds.label(i));
  }
  return SparseDataset(ds.num_features(), std::move(row_ptr), std::move(col_idx), std::move(values),
                       std::move(labels));
}

TrainTestSplit split(const SparseDataset& ds, double test_fraction, std::uint64_t seed) {
  const auto n = ds.num_samples();
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError(fmt::format("test fraction must lie in (0, 1), got {}", test_fraction));
  }
  if (n < 2) throw ConfigError("splitting needs at least two samples");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Explicit Fisher-Yates: std::shuffle and the std distributions are not portable.
  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(order[i], order[j]);
  }

  auto test_count = static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(n) + 0.5));
  test_count = std::clamp<std::size_t>(test_count, 1, n - 1);

  TrainTestSplit result;
  result.test_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(test_count));
  result.train_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(test_count), order.end());
  std::sort(result.test_indices.begin(), result.test_indices.end());
  std::sort(result.train_indices.begin(), result.train_indices.end());
  result.train = subset(ds, result.train_indices);
  result.test = subset(ds, result.test_indices);
  return result;
}

DatasetStats compute_stats(const SparseDataset& ds) {
  DatasetStats stats;
  stats.n = ds.num_samples();
  stats.m = ds.num_features();
  stats.nnz = ds.nnz();
  const double cells = static_cast<double>(stats.n) * static_cast<double>(stats.m);
  stats.density_pct = cells > 0.0 ? 100.0 * static_cast<double>(stats.nnz) / cells : 0.0;
  return stats;
}

std::string stats_to_json(const DatasetStats& stats, const std::string& name) {
  nlohmann::json j = {
      {"name", name}, {"n", stats.n}, {"m", stats.m}, {"nnz", stats.nnz}, {"density_pct", stats.density_pct}};
  return j.dump();
}

std::string stats_csv_header() { return "name,n,m,nnz,density"; }

std::string stats_to_csv_row(const DatasetStats& stats, const std::string& name) {
  return fmt::format("{},{},{},{},{:.2f}", name, stats.n, stats.m, stats.nnz, stats.density_pct);
}

}  // namespace scsvm
