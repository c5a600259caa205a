#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "scsvm/dataset.hpp"
#include "scsvm/error.hpp"
#include "support/synthetic.hpp"

namespace scsvm {
namespace {

SparseDataset parse(const std::string& text, ParseOptions opts = {}) {
  std::istringstream in(text);
  return parse_svmlight(in, opts);
}

TEST(Svmlight, ReadsOneRow) {
  const auto ds = parse("1 1:0.5 3:-2\n");
  ASSERT_EQ(ds.num_samples(), 1u);
  EXPECT_EQ(ds.num_features(), 3u);
  EXPECT_EQ(ds.label(0), 1.0);
  const auto row = ds.row(0);
  ASSERT_EQ(row.indices.size(), 2u);
  EXPECT_EQ(row.indices[0], 0);
  EXPECT_EQ(row.indices[1], 2);
  EXPECT_EQ(row.values[0], 0.5);
  EXPECT_EQ(row.values[1], -2.0);
}

TEST(Svmlight, SkipsCommentsBlankLinesAndAcceptsPlusSign) {
  const auto ds = parse("# header\n\n+1 2:1 # trailing\n-1\n");
  ASSERT_EQ(ds.num_samples(), 2u);
  EXPECT_EQ(ds.num_features(), 2u);
  EXPECT_EQ(ds.row(1).indices.size(), 0u);
  EXPECT_EQ(ds.label(1), -1.0);
}

TEST(Svmlight, ForcedFeatureCount) {
  EXPECT_EQ(parse("1 2:1\n", {5}).num_features(), 5u);
  EXPECT_THROW(parse("1 6:1\n", {5}), ParseError);
}

TEST(Svmlight, ErrorsCarryLineNumbers) {
  const std::vector<std::pair<std::string, std::size_t>> bad = {
      {"1 1:1\n1 3:1 2:1\n", 2}, {"1 1:1 1:2\n", 1}, {"1 1:x\n", 1},  {"abc 1:1\n", 1},
      {"1 1:1\n\n-1 0:1\n", 3},  {"1 1\n", 1},        {"1 1:nan\n", 1}, {"1 1:inf\n", 1},
  };
  for (const auto& [text, line] : bad) {
    try {
      parse(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << text;
    }
  }
}

TEST(Svmlight, EmptyInputIsAnError) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("# only a comment\n"), ParseError);
}

TEST(Svmlight, RoundTripIsExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int trial = 0; trial < 50; ++trial) {
    auto ds = testing::random_sparse(40, 25, 0.3, static_cast<std::uint64_t>(trial));
    // Perturb values into awkward binary fractions.
    std::vector<std::vector<double>> rows;
    std::vector<double> labels;
    for (std::size_t i = 0; i < ds.num_samples(); ++i) {
      std::vector<double> r(ds.num_features(), 0.0);
      const auto row = ds.row(i);
      for (std::size_t k = 0; k < row.indices.size(); ++k) r[row.indices[k]] = row.values[k] * u(rng) / 3.0;
      rows.push_back(r);
      labels.push_back(ds.label(i));
    }
    auto original = testing::from_dense(rows, labels, ds.num_features());
    std::stringstream buf;
    write_svmlight(original, buf);
    auto back = parse_svmlight(buf, {original.num_features()});
    EXPECT_EQ(back, original);
  }
}

TEST(Labels, BreastCancerStyleMap) {
  const auto raw = parse("2 1:1\n4 1:2\n2 1:3\n");
  const auto map = LabelMap::infer(raw);
  EXPECT_EQ(map.positive_raw(), 2.0);
  EXPECT_EQ(map.negative_raw(), 4.0);
  const auto ds = remap_labels(raw, map);
  EXPECT_EQ(ds.label(0), 1.0);
  EXPECT_EQ(ds.label(1), -1.0);
  EXPECT_TRUE(ds.has_signed_labels());
}

TEST(Labels, IdentityLeavesDatasetUnchanged) {
  const auto raw = parse("-1 1:1\n1 2:2\n");
  EXPECT_EQ(remap_labels(raw, LabelMap::infer(raw)), raw);
  EXPECT_EQ(remap_labels(raw, LabelMap::identity()), raw);
}

TEST(Labels, ZeroOneMapsOneToPositive) {
  const auto raw = parse("0 1:1\n1 2:2\n");
  const auto ds = remap_labels(raw, LabelMap::infer(raw));
  EXPECT_EQ(ds.label(0), -1.0);
  EXPECT_EQ(ds.label(1), 1.0);
}

TEST(Labels, UnseenValueIsNamed) {
  const auto raw = parse("2 1:1\n7 1:2\n");
  try {
    remap_labels(raw, LabelMap(2.0, 4.0));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find('7'), std::string::npos);
  }
  EXPECT_THROW(LabelMap::infer(parse("1 1:1\n2 1:1\n3 1:1\n")), ConfigError);
}

TEST(Split, TenSamplesTwentyPercent) {
  const auto ds = testing::random_sparse(10, 3, 0.5, 1);
  const auto a = split(ds, 0.2, 42);
  EXPECT_EQ(a.train.num_samples(), 8u);
  EXPECT_EQ(a.test.num_samples(), 2u);
  const auto b = split(ds, 0.2, 42);
  EXPECT_EQ(a.train_indices, b.train_indices);
  EXPECT_EQ(a.test_indices, b.test_indices);
  EXPECT_TRUE(std::is_sorted(a.test_indices.begin(), a.test_indices.end()));
  EXPECT_EQ(a.train.num_features(), ds.num_features());
}

TEST(Split, PartitionCoversEveryRowOnce) {
  const auto ds = testing::random_sparse(97, 4, 0.5, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto parts = split(ds, 0.3, seed);
    std::vector<int> seen(ds.num_samples(), 0);
    for (auto i : parts.train_indices) ++seen[i];
    for (auto i : parts.test_indices) ++seen[i];
    EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
    EXPECT_EQ(parts.test_indices.size(), 29u);
  }
}

TEST(Split, DifferentSeedsDiffer) {
  const auto ds = testing::random_sparse(200, 4, 0.5, 3);
  EXPECT_NE(split(ds, 0.2, 1).test_indices, split(ds, 0.2, 2).test_indices);
}

TEST(Split, DegenerateFractionsRejected) {
  const auto ds = testing::random_sparse(10, 3, 0.5, 1);
  EXPECT_THROW(split(ds, 0.0, 42), ConfigError);
  EXPECT_THROW(split(ds, 1.0, 42), ConfigError);
  EXPECT_THROW(split(ds, -0.1, 42), ConfigError);
}

TEST(Stats, DensityAndCsv) {
  const auto ds = parse("1 1:1 4:1\n-1 2:1\n");
  const auto st = compute_stats(ds);
  EXPECT_EQ(st.n, 2u);
  EXPECT_EQ(st.m, 4u);
  EXPECT_EQ(st.nnz, 3u);
  EXPECT_DOUBLE_EQ(st.density_pct, 37.5);
  EXPECT_EQ(stats_csv_header(), "name,n,m,nnz,density");
  EXPECT_EQ(stats_to_csv_row(st, "toy"), "toy,2,4,3,37.50");
}

TEST(Stats, BundledBreastCancer) {
  const auto ds = load_signed_dataset(std::filesystem::path(SCSVM_BUNDLED_DATA_DIR) / "breast-cancer");
  EXPECT_EQ(ds.num_samples(), 683u);
  EXPECT_EQ(ds.num_features(), 10u);
  EXPECT_TRUE(ds.has_signed_labels());
}

TEST(Dataset, ConstructorValidatesCsr) {
  EXPECT_THROW(SparseDataset(2, {0, 1}, {2}, {1.0}, {1.0}), ParseError);
  EXPECT_THROW(SparseDataset(3, {0, 2}, {1, 0}, {1.0, 1.0}, {1.0}), ParseError);
  EXPECT_THROW(SparseDataset(3, {0, 1, 1}, {0}, {1.0}, {1.0}), ParseError);
  auto ok = SparseDataset(3, {0, 1}, {0}, {1.0}, {1.0});
  EXPECT_EQ(ok.with_num_features(5).num_features(), 5u);
  EXPECT_THROW(ok.with_num_features(2), DimensionError);
}

}  // namespace
}  // namespace scsvm
