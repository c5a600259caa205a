#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "scsvm/error.hpp"
#include "scsvm/evaluation.hpp"

namespace scsvm {

DcdResult dcd_train(const SparseDataset& ds, const DcdConfig& cfg) {
  if (!(cfg.C > 0.0)) throw ConfigError(fmt::format("C must be positive, got {}", cfg.C));
  if (cfg.max_epochs < 1) throw ConfigError("max_epochs must be at least 1");
  if (!ds.has_signed_labels()) throw ConfigError("training labels must be -1 or +1");

  const auto n = ds.num_samples();
  const auto m = static_cast<Eigen::Index>(ds.num_features());
  const double bias_sq = cfg.bias_feature * cfg.bias_feature;

  // w holds [omega; weight of the constant feature].
  Vector w = Vector::Zero(m + 1);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = ds.row(i);
    double sq = bias_sq;
    for (const double v : row.values) sq += v * v;
    diag[i] = sq;
  }

  auto row_dot = [&](std::size_t i) { return ds.row(i).dot(w) + w[m] * cfg.bias_feature; };
  auto row_axpy = [&](std::size_t i, double scale) {
    const auto row = ds.row(i);
    for (std::size_t k = 0; k < row.indices.size(); ++k) w[row.indices[k]] += scale * row.values[k];
    w[m] += scale * cfg.bias_feature;
  };

  DcdResult result;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(cfg.seed);

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    for (const auto i : order) {
      const double y = ds.label(i);
      const double grad = y * row_dot(i) - 1.0;
      double pg = grad;
      if (alpha[i] == 0.0) {
        pg = std::min(grad, 0.0);
      } else if (alpha[i] == cfg.C) {
        pg = std::max(grad, 0.0);
      }
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (std::fabs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::clamp(old - grad / diag[i], 0.0, cfg.C);
        row_axpy(i, (alpha[i] - old) * y);
      }
    }

    const double alpha_sum = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    result.dual_objective.push_back(alpha_sum - 0.5 * w.squaredNorm());
    result.epochs = epoch;
    if (pg_max - pg_min <= cfg.tolerance) {
      result.converged = true;
      break;
    }
  }

  Vector theta(m + 1);
  theta.head(m) = w.head(m);
  theta[m] = w[m] * cfg.bias_feature;
  result.model = ModelTheta(std::move(theta));
  return result;
}

}  // namespace scsvm
