#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "scsvm/error.hpp"
#include "scsvm/evaluation.hpp"
#include "scsvm/mpm.hpp"
#include "scsvm/projection.hpp"
#include "support/synthetic.hpp"

namespace scsvm {
namespace {

ModelTheta theta_of(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return ModelTheta(out);
}

Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vector v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

TEST(Margin, Examples) {
  const auto ds = testing::random_sparse(9, 3, 0.5, 1);
  EXPECT_EQ(margin(ModelTheta::zeros(3), ds), Vector::Ones(9));
  const auto pos = testing::from_dense({{2.0}}, {1.0}, 1);
  EXPECT_EQ(margin(theta_of({1, 0}), pos)[0], -1.0);
  const auto neg = testing::from_dense({{2.0}}, {-1.0}, 1);
  EXPECT_EQ(margin(theta_of({1, 1}), neg)[0], 4.0);
  EXPECT_THROW(margin(theta_of({1, 1, 1}), neg), DimensionError);
}

TEST(Objective, ZeroModel) {
  const auto ds = testing::random_sparse(10, 3, 0.5, 2);
  for (std::size_t s = 0; s < 10; ++s) {
    const auto v = objective_components(ModelTheta::zeros(3), ds, s, 0.4);
    EXPECT_EQ(v.f, 0.0);
    EXPECT_EQ(v.p, 0.5 * static_cast<double>(10 - s));
    EXPECT_EQ(v.F, 0.4 * v.p);
  }
  const auto full = objective_components(ModelTheta::zeros(3), ds, 10, 0.4);
  EXPECT_EQ(full.p, 0.0);
  EXPECT_EQ(full.F, 0.0);
}

TEST(Objective, AllMarginsSatisfied) {
  const auto ds = testing::from_dense({{2.0}, {-2.0}}, {1.0, -1.0}, 1);
  const auto v = objective_components(theta_of({1, 0}), ds, 0, 0.4);
  EXPECT_EQ(v.p, 0.0);
  EXPECT_EQ(v.F, v.f);
  EXPECT_EQ(v.f, 0.5);
}

TEST(Rhs, SeparatedAnchorAndZeroAnchor) {
  const auto ds = testing::separable_clusters(40, 3);
  // A separator with every margin >= 1: projection is the identity.
  const auto theta = theta_of({2, 2, 0});
  const Vector z = margin(theta, ds);
  ASSERT_LE(z.maxCoeff(), 0.0);
  const Vector expected = 0.4 * multiply_qbar_t(ds, multiply_qbar(ds, theta.stacked()));
  EXPECT_LE((majorization_rhs(theta, ds, 0, 0.4) - expected).norm(), 1e-12 * expected.norm());
  EXPECT_EQ(majorization_rhs(ModelTheta::zeros(2), ds, 40, 0.4), Vector::Zero(3));
}

TEST(Rhs, TwoSampleHandExpansion) {
  // x1 = 1 (y = +1), x2 = 3 (y = -1); theta = 0 gives z = [1, 1], s = 1 keeps index 0.
  // 1 - Pi(z) = [0, 1]; Qbar^T [0, 1] = [y2 x2; y2] = [-3, -1]; times rho = 0.5.
  const auto ds = testing::from_dense({{1.0}, {3.0}}, {1.0, -1.0}, 1);
  const Vector rhs = majorization_rhs(ModelTheta::zeros(1), ds, 1, 0.5);
  EXPECT_EQ(rhs[0], -1.5);
  EXPECT_EQ(rhs[1], -0.5);
  // [[6, 2], [2, 1]]^-1 = 0.5 [[1, -2], [-2, 6]], so theta = [-0.25, 0].
  const auto out = dense_solve(RegularizedNormalOperator(ds, 0.5), rhs);
  Vector expected(2);
  expected << -0.25, 0.0;
  EXPECT_LE((out.theta - expected).norm(), 1e-14);
}

TEST(Progress, Arithmetic) {
  EXPECT_EQ(f_prog(2.0, 2.0, 0.4), 0.0);
  EXPECT_NEAR(f_prog(1.0, 0.5, 0.4), 0.5 / 1.4, 1e-15);
  EXPECT_LT(f_prog(0.5, 1.0, 0.4), 0.0);
  EXPECT_EQ(p_prog(theta_of({3, 4}), 0.0), 0.0);
  EXPECT_EQ(p_prog(ModelTheta::zeros(1), 0.0), 0.0);
  EXPECT_TRUE(std::isinf(p_prog(ModelTheta::zeros(1), 1.0)));
  EXPECT_EQ(p_prog(theta_of({3, 4}), 1.0), 2.0 / 25.0);
}

TEST(Sparsity, RatioRounding) {
  EXPECT_EQ(sparsity_from_ratio(0.1, 270), 27u);
  EXPECT_EQ(sparsity_from_ratio(0.1, 683), 68u);
  EXPECT_EQ(sparsity_from_ratio(0.5, 5), 3u);
  EXPECT_EQ(sparsity_from_ratio(0.0, 100), 0u);
  EXPECT_EQ(sparsity_from_ratio(1.0, 100), 100u);
  std::size_t previous = 0;
  for (double sr : {0.01, 0.05, 0.10, 0.15, 0.25, 0.50}) {
    const auto s = sparsity_from_ratio(sr, 1605);
    EXPECT_GE(s, previous);
    previous = s;
  }
  MpmConfig both;
  both.s = 3;
  both.sparse_ratio = 0.1;
  EXPECT_THROW(resolve_sparsity(both, 10), ConfigError);
  MpmConfig too_big;
  too_big.s = 11;
  EXPECT_THROW(resolve_sparsity(too_big, 10), ConfigError);
}

class TrainedRuns : public ::testing::Test {
 protected:
  struct Run {
    SparseDataset ds;
    std::size_t s;
    std::vector<ModelTheta> iterates;
    TrainReport report;
  };

  static Run train(SparseDataset ds, std::size_t s, std::size_t dense_threshold = kDefaultDenseThreshold,
                   int max_outer = 1000) {
    MpmConfig cfg;
    cfg.s = s;
    cfg.dense_threshold = dense_threshold;
    cfg.max_outer = max_outer;
    std::vector<ModelTheta> iterates;
    auto [model, report] = mpm_train(ds, cfg, [&](int, const ModelTheta& t) { iterates.push_back(t); });
    return {std::move(ds), s, std::move(iterates), std::move(report)};
  }
};

TEST_F(TrainedRuns, DescentDenseAndCg) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    for (std::size_t threshold : {std::size_t{100}, std::size_t{0}}) {
      const auto run = train(testing::random_sparse(300, 30, 0.3, seed), 30, threshold, 200);
      const auto& h = run.report.history;
      ASSERT_GE(h.size(), 2u);
      for (std::size_t k = 1; k < h.size(); ++k) {
        EXPECT_LE(h[k].F, h[k - 1].F + 1e-10 * std::abs(h[k - 1].F)) << "k=" << k << " threshold=" << threshold;
      }
    }
  }
}

TEST_F(TrainedRuns, MajorizerSandwichAndSubgradient) {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto run = train(testing::random_sparse(120, 10, 0.5, seed), 12, 100, 20);
    for (const auto& anchor : run.iterates) {
      const double p_anchor = objective_components(anchor, run.ds, run.s, 0.4).p;
      EXPECT_LE(std::abs(majorizer_value(anchor, anchor, run.ds, run.s) - p_anchor), 1e-12 * std::max(1.0, p_anchor));
      const Vector anchor_z = margin(anchor, run.ds);
      Vector anchor_pi;
      project_omega_s_into(anchor_z, run.s, anchor_pi);
      for (int probe = 0; probe < 100; ++probe) {
        const ModelTheta theta(anchor.stacked() + random_vector(rng, 11, probe % 2 ? 0.1 : 2.0));
        const double p = objective_components(theta, run.ds, run.s, 0.4).p;
        const double pm = majorizer_value(theta, anchor, run.ds, run.s);
        EXPECT_GE(pm, p - 1e-10 * (1.0 + std::abs(p)));
        // The literal majorizer 0.5||z||^2 - h(anchor) - <Pi(z~), z - z~> equals the stable form.
        const Vector z = margin(theta, run.ds);
        const double literal = 0.5 * z.squaredNorm() - 0.5 * anchor_pi.squaredNorm() - anchor_pi.dot(z - anchor_z);
        EXPECT_NEAR(pm, literal, 1e-9 * (1.0 + std::abs(pm)));
        const double lhs = h_value(theta, run.ds, run.s) - h_value(anchor, run.ds, run.s);
        const double rhs = h_subgradient(anchor, run.ds, run.s).dot(theta.stacked() - anchor.stacked());
        EXPECT_GE(lhs, rhs - 1e-9 * (1.0 + std::abs(lhs)));
      }
    }
  }
}

TEST_F(TrainedRuns, SubproblemSolutionIsUnique) {
  const auto ds = testing::random_sparse(400, 40, 0.2, 77);
  const auto run = train(ds, 40, 100, 5);
  const RegularizedNormalOperator op(ds, 0.4);
  for (const auto& anchor : run.iterates) {
    const Vector rhs = majorization_rhs(anchor, ds, 40, 0.4);
    const auto a = dense_solve(op, rhs);
    const auto b = cg_solve(op, rhs, {1e-10, 5000});
    EXPECT_LE((a.theta - b.theta).norm(), 1e-6 * std::max(1e-12, a.theta.norm()));
  }
}

TEST_F(TrainedRuns, StationarityWhenSupportStable) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto run = train(testing::random_sparse(200, 8, 0.6, seed), 20);
    if (!run.report.support_stable_at_exit) continue;
    const double bound =
        std::max(1e-3, 1e-6 * majorization_rhs(run.iterates.back(), run.ds, 20, 0.4).norm());
    EXPECT_LE(run.report.stationarity_residual, bound);
  }
}

TEST_F(TrainedRuns, VacuousConstraintStopsImmediately) {
  const auto ds = testing::random_sparse(80, 5, 0.5, 5);
  const auto run = train(ds, 80);
  EXPECT_TRUE(run.report.converged());
  EXPECT_LE(run.report.outer_iterations, 3);
  EXPECT_EQ(run.report.history.back().p, 0.0);
  EXPECT_EQ(run.iterates.back().stacked(), Vector::Zero(6));
}

TEST_F(TrainedRuns, DenseBelowThresholdReportsZeroCg) {
  const auto run = train(testing::random_sparse(150, 8, 0.5, 3), 15, 100, 50);
  EXPECT_TRUE(run.report.dense_solver);
  EXPECT_EQ(run.report.total_cg, 0);
  const auto cg_run = train(testing::random_sparse(150, 8, 0.5, 3), 15, 0, 50);
  EXPECT_FALSE(cg_run.report.dense_solver);
  EXPECT_GT(cg_run.report.total_cg, 0);
}

TEST_F(TrainedRuns, HistoryShape) {
  const auto run = train(testing::random_sparse(100, 6, 0.5, 1), 10, 100, 7);
  const auto& h = run.report.history;
  EXPECT_EQ(static_cast<int>(h.size()), run.report.outer_iterations + 1);
  EXPECT_TRUE(std::isnan(h[0].f_prog));
  EXPECT_EQ(h[0].F, 0.4 * 0.5 * 90.0);
  EXPECT_EQ(run.iterates.size(), h.size());
}

TEST(Training, RejectsUnsignedLabels) {
  const auto ds = testing::from_dense({{1.0}, {2.0}}, {2.0, 4.0}, 1);
  MpmConfig cfg;
  cfg.s = 0;
  EXPECT_THROW(mpm_train(ds, cfg), ConfigError);
}

TEST(Training, RhoGrowthRaisesPenalty) {
  const auto ds = testing::random_sparse(200, 6, 0.5, 2, 0.2);
  MpmConfig cfg;
  cfg.sparse_ratio = 0.1;
  cfg.rho_growth = 2.0;
  cfg.rho_max = 100.0;
  const auto [model, report] = mpm_train(ds, cfg);
  EXPECT_GT(report.rho, 0.4);
  EXPECT_LE(report.rho, 100.0);
}

TEST(ModelIo, RoundTripIsBitExact) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    Vector v = random_vector(rng, 1 + trial % 30, std::pow(10.0, trial % 7 - 3));
    for (Eigen::Index i = 0; i < v.size(); i += 3) v[i] = 0.0;
    const ModelTheta model(v);
    std::stringstream buf;
    write_model(model, buf);
    EXPECT_EQ(read_model(buf), model);
  }
}

TEST(ModelIo, RejectsMalformed) {
  for (const char* text : {"", "x 1\n", "2 0.5\n3 1\n", "2 0.5\n1 1\n1 2\n", "2 0.5\n0 1\n", "2 0.5\n1 abc\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_model(in), Error) << text;
  }
}

}  // namespace
}  // namespace scsvm
