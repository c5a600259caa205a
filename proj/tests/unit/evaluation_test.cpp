#include <gtest/gtest.h>

#include "scsvm/error.hpp"
#include "scsvm/evaluation.hpp"
#include "support/synthetic.hpp"

namespace scsvm {
namespace {

ModelTheta theta_of(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return ModelTheta(out);
}

TEST(Predict, Examples) {
  const auto ds = testing::from_dense({{2.0, 0.0}, {0.0, 0.0}, {-1.0, 1.0}}, {1, 1, -1}, 2);
  auto p = predict(theta_of({1, -1, 0}), ds.row(0));
  EXPECT_EQ(p.score, 2.0);
  EXPECT_EQ(p.label, 1.0);
  p = predict(theta_of({1, -1, 0}), ds.row(1));
  EXPECT_EQ(p.score, 0.0);
  EXPECT_EQ(p.label, 1.0);
  for (const auto& q : predict_all(theta_of({0, 0, -3}), ds)) EXPECT_EQ(q.label, -1.0);
}

TEST(Accuracy, ConstantPredictorOnBalancedData) {
  const auto ds = testing::separable_clusters(50, 1);
  EXPECT_EQ(accuracy(theta_of({0, 0, -1}), ds), 50.0);
  EXPECT_EQ(accuracy(theta_of({1, 1, 0}), ds), 100.0);
  EXPECT_EQ(train_misclassified_count(ModelTheta::zeros(2), ds), 50u);
  EXPECT_EQ(sign_error_count(theta_of({-1, -1, 0}), ds), 50u);
}

TEST(Accuracy, ComplementsErrorRateExactly) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto ds = testing::random_sparse(37 + seed, 5, 0.5, seed);
    const auto model = theta_of({0.3, -0.2, 0.1, 0.5, -1.0, 0.05});
    EXPECT_EQ(accuracy(model, ds) + error_rate(model, ds), 100.0);
  }
}

TEST(Accuracy, Errors) {
  const auto ds = testing::from_dense({{1.0, 1.0, 1.0}}, {1.0}, 3);
  EXPECT_THROW(accuracy(theta_of({1, 0}), ds), DimensionError);
  // Fewer features in the data than in the model is fine.
  EXPECT_EQ(accuracy(theta_of({1, 1, 1, 1, 0}), ds), 100.0);
}

TEST(Dcd, SeparableLargeC) {
  const auto ds = testing::separable_clusters(200, 4);
  DcdConfig cfg;
  cfg.C = 100.0;
  const auto out = dcd_train(ds, cfg);
  EXPECT_EQ(accuracy(out.model, ds), 100.0);
  for (std::size_t e = 1; e < out.dual_objective.size(); ++e) {
    EXPECT_GE(out.dual_objective[e], out.dual_objective[e - 1] - 1e-12 * std::abs(out.dual_objective[e - 1]));
  }
}

TEST(Dcd, TinyCShrinksWeights) {
  const auto ds = testing::random_sparse(200, 10, 0.5, 2);
  DcdConfig cfg;
  cfg.C = 1e-8;
  EXPECT_LE(dcd_train(ds, cfg).model.stacked().norm(), 1e-5);
}

TEST(Dcd, DeterministicAndMonotone) {
  const auto ds = testing::random_sparse(300, 20, 0.3, 6, 0.15);
  const auto a = dcd_train(ds);
  const auto b = dcd_train(ds);
  EXPECT_EQ(a.model, b.model);
  EXPECT_TRUE(a.converged);
  for (std::size_t e = 1; e < a.dual_objective.size(); ++e) {
    EXPECT_GE(a.dual_objective[e], a.dual_objective[e - 1] - 1e-12 * std::abs(a.dual_objective[e - 1]));
  }
}

TEST(Dcd, EpochCapFlagsNonConvergence) {
  const auto ds = testing::random_sparse(300, 20, 0.3, 6, 0.3);
  DcdConfig cfg;
  cfg.max_epochs = 1;
  cfg.tolerance = 1e-12;
  const auto out = dcd_train(ds, cfg);
  EXPECT_FALSE(out.converged);
  EXPECT_EQ(out.epochs, 1);
}

}  // namespace
}  // namespace scsvm
