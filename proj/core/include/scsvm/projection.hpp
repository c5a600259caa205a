#pragma once

#include <cstddef>
#include <vector>

#include "scsvm/types.hpp"

namespace scsvm {

/**
 * Split of {0, ..., n-1} against t = the s-th largest entry of z (s >= 1):
 *
 *   alpha = { i : z_i > t,  z_i > 0 }     always kept
 *   beta  = { i : z_i == t, z_i > 0 }     ties at the threshold
 *   gamma = { i : 0 < z_i < t }           zeroed
 *   tau   = { i : z_i <= 0 }              always kept
 *
 * beta1 is the subset of beta that is kept: its min(s - |alpha|, |beta|)
 * lowest indices. For s = 0 every positive entry lands in gamma.
 * All lists are ascending.
 */
struct IndexPartition {
  std::vector<std::size_t> alpha;
  std::vector<std::size_t> beta;
  std::vector<std::size_t> beta1;
  std::vector<std::size_t> gamma;
  std::vector<std::size_t> tau;
};

/// A nearest point of Omega_s = { x : ||x_+||_0 <= s } together with the split that produced it.
struct ProjectionResult {
  Vector x;
  IndexPartition partition;
  double dist_sq = 0.0;  // 0.5 * ||z - x||^2
};

/// Throws ConfigError when s > z.size().
IndexPartition partition_indices(const Vector& z, std::size_t s);

/// Keeps z on alpha, beta1 and tau and zeroes the rest. Ties go to the lowest indices.
ProjectionResult project_omega_s(const Vector& z, std::size_t s);

/// Same projection without materializing the partition; writes into `x`.
void project_omega_s_into(const Vector& z, std::size_t s, Vector& x);

/// 0.5 * dist(z, Omega_s)^2. Zero iff z has at most s positive entries.
double g_value(const Vector& z, std::size_t s);

/// 0.5 * ||z - x||^2 summed in index order.
double half_squared_distance(const Vector& z, const Vector& x);

/// Number of strictly positive entries, i.e. ||z_+||_0.
std::size_t count_positive(const Vector& z) noexcept;

}  // namespace scsvm
