#include "scsvm/linalg.hpp"

#include <cmath>

#include <fmt/format.h>

#include "scsvm/error.hpp"

namespace scsvm {

namespace {

void check_length(const Vector& v, Eigen::Index expected, const char* what) {
  if (v.size() != expected) {
    throw DimensionError(fmt::format("{} has length {}, expected {}", what, v.size(), expected));
  }
}

}  // namespace

Vector multiply_q(const SparseDataset& ds, const Vector& theta) {
  const auto m = static_cast<Eigen::Index>(ds.num_features());
  check_length(theta, m + 1, "theta");
  const double bias = theta[m];
  Vector out(static_cast<Eigen::Index>(ds.num_samples()));
  for (std::size_t i = 0; i < ds.num_samples(); ++i) {
    out[static_cast<Eigen::Index>(i)] = ds.row(i).dot(theta) + bias;
  }
  return out;
}

Vector multiply_qt(const SparseDataset& ds, const Vector& u) {
  const auto m = static_cast<Eigen::Index>(ds.num_features());
  check_length(u, static_cast<Eigen::Index>(ds.num_samples()), "u");
  Vector out = Vector::Zero(m + 1);
  double total = 0.0;
  for (std::size_t i = 0; i < ds.num_samples(); ++i) {
    const double ui = u[static_cast<Eigen::Index>(i)];
    const auto row = ds.row(i);
    for (std::size_t k = 0; k < row.indices.size(); ++k) out[row.indices[k]] += row.values[k] * ui;
    total += ui;
  }
  out[m] = total;
  return out;
}

RegularizedNormalOperator::RegularizedNormalOperator(const SparseDataset& ds, double rho) : ds_(&ds), rho_(rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError(fmt::format("rho must be positive, got {}", rho));
}

Vector RegularizedNormalOperator::apply(const Vector& v) const {
  check_length(v, dim(), "operand");
  Vector out = rho_ * multiply_qt(*ds_, multiply_q(*ds_, v));
  const auto m = dim() - 1;
  out.head(m) += v.head(m);
  return out;
}

Matrix RegularizedNormalOperator::materialize() const {
  const auto m = dim() - 1;
  Matrix gram = Matrix::Zero(m + 1, m + 1);  // Q^T Q
  for (std::size_t i = 0; i < ds_->num_samples(); ++i) {
    const auto row = ds_->row(i);
    for (std::size_t a = 0; a < row.indices.size(); ++a) {
      const auto ca = row.indices[a];
      const double va = row.values[a];
      for (std::size_t b = 0; b <= a; ++b) gram(ca, row.indices[b]) += va * row.values[b];
      gram(m, ca) += va;
    }
  }
  gram(m, m) = static_cast<double>(ds_->num_samples());
  // Only the lower triangle was accumulated.
  Matrix full = gram.selfadjointView<Eigen::Lower>();
  full *= rho_;
  full.diagonal().head(m).array() += 1.0;
  return full;
}

SolveOutcome cg_solve(const RegularizedNormalOperator& op, const Vector& rhs, const CgConfig& cfg,
                      const Vector* initial_guess, const CgObserver& observer) {
  check_length(rhs, op.dim(), "rhs");
  if (!(cfg.tol > 0.0)) throw ConfigError("CG tolerance must be positive");
  if (cfg.max_iter < 1) throw ConfigError("CG iteration cap must be at least 1");
  if (!rhs.allFinite()) throw NumericalError("CG right-hand side is not finite");

  SolveOutcome out;
  Vector residual;
  if (initial_guess != nullptr) {
    check_length(*initial_guess, op.dim(), "initial guess");
    out.theta = *initial_guess;
    residual = rhs - op.apply(out.theta);
  } else {
    out.theta = Vector::Zero(op.dim());
    residual = rhs;
  }

  Vector direction = residual;
  double rs = residual.squaredNorm();
  out.final_residual = std::sqrt(rs);
  if (out.final_residual <= cfg.tol) {
    out.converged = true;
    return out;
  }

  for (int it = 1; it <= cfg.max_iter; ++it) {
    const Vector op_dir = op.apply(direction);
    const double curvature = direction.dot(op_dir);
    if (!(curvature > 0.0) || !std::isfinite(curvature)) {
      throw NumericalError(fmt::format("CG breakdown at iteration {}: p^T A p = {}", it, curvature));
    }
    const double step = rs / curvature;
    out.theta.noalias() += step * direction;
    residual.noalias() -= step * op_dir;
    const double rs_next = residual.squaredNorm();
    if (!std::isfinite(rs_next)) throw NumericalError(fmt::format("CG residual became non-finite at iteration {}", it));

    out.iterations = it;
    out.final_residual = std::sqrt(rs_next);
    if (observer) observer(it, out.theta, out.final_residual);
    if (out.final_residual <= cfg.tol) {
      out.converged = true;
      break;
    }
    direction = residual + (rs_next / rs) * direction;
    rs = rs_next;
  }
  return out;
}

DenseSolver::DenseSolver(const RegularizedNormalOperator& op) : matrix_(op.materialize()), llt_(matrix_) {
  if (llt_.info() != Eigen::Success) {
    throw NumericalError("Cholesky factorization of P^T P + rho Q^T Q failed; the data is likely corrupt");
  }
}

SolveOutcome DenseSolver::solve(const Vector& rhs) const {
  check_length(rhs, matrix_.rows(), "rhs");
  SolveOutcome out;
  out.theta = llt_.solve(rhs);
  if (!out.theta.allFinite()) throw NumericalError("direct solve produced non-finite values");
  out.iterations = 0;
  out.final_residual = (rhs - matrix_ * out.theta).norm();
  out.converged = true;
  return out;
}

SolveOutcome dense_solve(const RegularizedNormalOperator& op, const Vector& rhs) { return DenseSolver(op).solve(rhs); }

}  // namespace scsvm
