#include "scsvm/projection.hpp"

#include <algorithm>
#include <functional>

#include <fmt/format.h>

#include "scsvm/error.hpp"

namespace scsvm {

namespace {

void check_budget(const Vector& z, std::size_t s) {
  if (s > static_cast<std::size_t>(z.size())) {
    throw ConfigError(fmt::format("sparsity budget s = {} exceeds the vector length {}", s, z.size()));
  }
}

// s-th largest positive entry; requires count_positive(z) > s >= 1. Expected linear time.
double positive_threshold(const Vector& z, std::size_t s) {
  std::vector<double> positives;
  positives.reserve(static_cast<std::size_t>(z.size()));
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z[i] > 0.0) positives.push_back(z[i]);
  }
  const auto nth = positives.begin() + static_cast<std::ptrdiff_t>(s - 1);
  std::nth_element(positives.begin(), nth, positives.end(), std::greater<>());
  return *nth;
}

}  // namespace

std::size_t count_positive(const Vector& z) noexcept {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i) count += z[i] > 0.0 ? 1 : 0;
  return count;
}

IndexPartition partition_indices(const Vector& z, std::size_t s) {
  check_budget(z, s);
  IndexPartition part;
  const auto n = static_cast<std::size_t>(z.size());
  const auto positives = count_positive(z);

  if (s == 0 || positives <= s) {
    // s = 0 zeroes every positive entry; with positives <= s the threshold is <= 0 and all are kept.
    auto& positive_bucket = s == 0 ? part.gamma : part.alpha;
    for (std::size_t i = 0; i < n; ++i) (z[i] > 0.0 ? positive_bucket : part.tau).push_back(i);
    return part;
  }

  const double t = positive_threshold(z, s);
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = z[static_cast<Eigen::Index>(i)];
    if (zi <= 0.0) {
      part.tau.push_back(i);
    } else if (zi > t) {
      part.alpha.push_back(i);
    } else if (zi == t) {
      part.beta.push_back(i);
    } else {
      part.gamma.push_back(i);
    }
  }
  const auto keep = std::min(s - part.alpha.size(), part.beta.size());
  part.beta1.assign(part.beta.begin(), part.beta.begin() + static_cast<std::ptrdiff_t>(keep));
  return part;
}

void project_omega_s_into(const Vector& z, std::size_t s, Vector& x) {
  check_budget(z, s);
  x = z;
  const auto positives = count_positive(z);
  if (positives <= s) return;
  if (s == 0) {
    x = z.cwiseMin(0.0);
    return;
  }

  const double t = positive_threshold(z, s);
  std::size_t above = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i) above += z[i] > t ? 1 : 0;
  std::size_t ties_left = s - above;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double zi = z[i];
    if (zi <= 0.0 || zi > t) continue;
    if (zi == t && ties_left > 0) {
      --ties_left;
      continue;
    }
    x[i] = 0.0;
  }
}

ProjectionResult project_omega_s(const Vector& z, std::size_t s) {
  ProjectionResult result;
  result.partition = partition_indices(z, s);
  result.x = z;
  for (const auto i : result.partition.gamma) result.x[static_cast<Eigen::Index>(i)] = 0.0;
  const auto& beta = result.partition.beta;
  for (std::size_t k = result.partition.beta1.size(); k < beta.size(); ++k) {
    result.x[static_cast<Eigen::Index>(beta[k])] = 0.0;
  }
  result.dist_sq = half_squared_distance(z, result.x);
  return result;
}

double half_squared_distance(const Vector& z, const Vector& x) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double d = z[i] - x[i];
    sum += d * d;
  }
  return 0.5 * sum;
}

double g_value(const Vector& z, std::size_t s) {
  Vector x;
  project_omega_s_into(z, s, x);
  return half_squared_distance(z, x);
}

}  // namespace scsvm
