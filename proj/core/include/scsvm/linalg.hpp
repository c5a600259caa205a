#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Cholesky>

#include "scsvm/dataset.hpp"
#include "scsvm/types.hpp"

namespace scsvm {

/// Systems with fewer features than this are factored directly instead of solved by CG.
inline constexpr std::size_t kDefaultDenseThreshold = 100;

/// Q theta = A omega + b 1_n for theta = [omega; b].
Vector multiply_q(const SparseDataset& ds, const Vector& theta);

/// Q^T u = [A^T u; 1_n^T u].
Vector multiply_qt(const SparseDataset& ds, const Vector& u);

/**
 * The (m+1) x (m+1) SPD operator  P^T P + rho Q^T Q  with P = [I_m 0] and Q = [A 1_n].
 *
 * Applied matrix-free: v -> [v_omega; 0] + rho Q^T (Q v). Holds a reference to
 * the dataset, which must outlive the operator.
 */
class RegularizedNormalOperator {
 public:
  RegularizedNormalOperator(const SparseDataset& ds, double rho);

  Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(ds_->num_features()) + 1; }
  double rho() const noexcept { return rho_; }
  const SparseDataset& dataset() const noexcept { return *ds_; }

  Vector apply(const Vector& v) const;

  /// Explicit matrix, for the direct solver and for tests.
  Matrix materialize() const;

 private:
  const SparseDataset* ds_;
  double rho_;
};

struct CgConfig {
  double tol = 1e-3;  // absolute bound on ||rhs - Op x||_2
  int max_iter = 500;
};

struct SolveOutcome {
  Vector theta;
  int iterations = 0;  // 0 for the direct solver
  double final_residual = 0.0;
  bool converged = false;
};

/// Called after every CG step with the step number, the iterate and the recurrence residual norm.
using CgObserver = std::function<void(int, const Vector&, double)>;

/**
 * Unpreconditioned conjugate gradients on `op`, starting from `initial_guess`
 * (zero when null). Throws NumericalError on non-finite values or a
 * non-positive curvature p^T Op p.
 */
SolveOutcome cg_solve(const RegularizedNormalOperator& op, const Vector& rhs, const CgConfig& cfg,
                      const Vector* initial_guess = nullptr, const CgObserver& observer = {});

/// Cholesky factorization of the materialized operator, reusable across right-hand sides.
class DenseSolver {
 public:
  /// Throws NumericalError when the factorization fails.
  explicit DenseSolver(const RegularizedNormalOperator& op);

  SolveOutcome solve(const Vector& rhs) const;

 private:
  Matrix matrix_;
  Eigen::LLT<Matrix> llt_;
};

/// One-shot direct solve; reports 0 iterations.
SolveOutcome dense_solve(const RegularizedNormalOperator& op, const Vector& rhs);

}  // namespace scsvm
