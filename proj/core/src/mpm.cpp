#include "scsvm/mpm.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>

#include <fmt/format.h>

#include "scsvm/error.hpp"
#include "scsvm/projection.hpp"

namespace scsvm {

ModelTheta::ModelTheta(Vector theta) : theta_(std::move(theta)) {
  if (theta_.size() < 1) throw DimensionError("model vector must hold at least the bias");
  if (!theta_.allFinite()) throw NumericalError("model has non-finite entries");
}

std::size_t sparsity_from_ratio(double ratio, std::size_t n) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw ConfigError(fmt::format("sparse ratio must lie in [0, 1], got {}", ratio));
  const auto s = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 0.5));
  return std::min(s, n);
}

std::size_t resolve_sparsity(const MpmConfig& cfg, std::size_t n) {
  if (cfg.s.has_value() == cfg.sparse_ratio.has_value()) {
    throw ConfigError("exactly one of s and sparse_ratio must be given");
  }
  if (!(cfg.rho > 0.0) || !std::isfinite(cfg.rho)) throw ConfigError(fmt::format("rho must be positive, got {}", cfg.rho));
  if (!(cfg.f_tol_factor > 0.0) || !(cfg.p_tol > 0.0)) throw ConfigError("stopping tolerances must be positive");
  if (cfg.max_outer < 1) throw ConfigError("max_outer must be at least 1");
  if (!(cfg.rho_growth >= 1.0)) throw ConfigError("rho_growth must be at least 1");
  if (cfg.sparse_ratio) return sparsity_from_ratio(*cfg.sparse_ratio, n);
  if (*cfg.s > n) throw ConfigError(fmt::format("s = {} exceeds the number of samples {}", *cfg.s, n));
  return *cfg.s;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kConverged:
      return "converged";
    case Termination::kMaxOuter:
      return "max_outer";
  }
  return "unknown";
}

Vector multiply_qbar(const SparseDataset& ds, const Vector& theta) {
  Vector out = multiply_q(ds, theta);
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] *= ds.label(static_cast<std::size_t>(i));
  return out;
}

Vector multiply_qbar_t(const SparseDataset& ds, const Vector& u) {
  if (u.size() != static_cast<Eigen::Index>(ds.num_samples())) {
    throw DimensionError(fmt::format("u has length {}, expected {}", u.size(), ds.num_samples()));
  }
  Vector scaled = u;
  for (Eigen::Index i = 0; i < scaled.size(); ++i) scaled[i] *= ds.label(static_cast<std::size_t>(i));
  return multiply_qt(ds, scaled);
}

Vector margin(const ModelTheta& theta, const SparseDataset& ds) {
  if (theta.num_features() != ds.num_features()) {
    throw DimensionError(fmt::format("model has {} features, data has {}", theta.num_features(), ds.num_features()));
  }
  return Vector::Ones(static_cast<Eigen::Index>(ds.num_samples())) - multiply_qbar(ds, theta.stacked());
}

ObjectiveValues objective_components(const ModelTheta& theta, const SparseDataset& ds, std::size_t s, double rho) {
  ObjectiveValues out;
  out.f = 0.5 * theta.omega().squaredNorm();
  out.p = g_value(margin(theta, ds), s);
  out.F = out.f + rho * out.p;
  return out;
}

Vector majorization_rhs(const ModelTheta& theta_k, const SparseDataset& ds, std::size_t s, double rho) {
  const Vector z = margin(theta_k, ds);
  Vector projected;
  project_omega_s_into(z, s, projected);
  return rho * multiply_qbar_t(ds, Vector::Ones(z.size()) - projected);
}

double majorizer_value(const ModelTheta& theta, const ModelTheta& anchor, const SparseDataset& ds, std::size_t s) {
  Vector anchor_projection;
  project_omega_s_into(margin(anchor, ds), s, anchor_projection);
  return half_squared_distance(margin(theta, ds), anchor_projection);
}

double h_value(const ModelTheta& theta, const SparseDataset& ds, std::size_t s) {
  Vector projected;
  project_omega_s_into(margin(theta, ds), s, projected);
  return 0.5 * projected.squaredNorm();
}

Vector h_subgradient(const ModelTheta& theta, const SparseDataset& ds, std::size_t s) {
  Vector projected;
  project_omega_s_into(margin(theta, ds), s, projected);
  return -multiply_qbar_t(ds, projected);
}

double f_prog(double f_prev, double f_curr, double rho) { return (f_prev - f_curr) / (rho + f_prev); }

double p_prog(const ModelTheta& theta, double p) {
  if (p == 0.0) return 0.0;
  const double norm_sq = theta.stacked().squaredNorm();
  if (norm_sq == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * p / norm_sq;
}

double stationarity_residual(const ModelTheta& theta, const SparseDataset& ds, std::size_t s, double rho) {
  const RegularizedNormalOperator op(ds, rho);
  return (op.apply(theta.stacked()) - majorization_rhs(theta, ds, s, rho)).norm();
}

namespace {

// Subproblem solver for a fixed rho; the direct path factors once and reuses the factorization.
class SubproblemSolver {
 public:
  SubproblemSolver(const SparseDataset& ds, double rho, bool dense, const CgConfig& cg, bool warm_start)
      : op_(ds, rho), cg_(cg), warm_start_(warm_start) {
    if (dense) dense_ = std::make_unique<DenseSolver>(op_);
  }

  SolveOutcome solve(const Vector& rhs, const Vector& current) const {
    if (dense_) return dense_->solve(rhs);
    return cg_solve(op_, rhs, cg_, warm_start_ ? &current : nullptr);
  }

 private:
  RegularizedNormalOperator op_;
  CgConfig cg_;
  bool warm_start_;
  std::unique_ptr<DenseSolver> dense_;
};

bool same_zeroed_set(const Vector& z_a, const Vector& x_a, const Vector& z_b, const Vector& x_b) {
  for (Eigen::Index i = 0; i < z_a.size(); ++i) {
    const bool zeroed_a = z_a[i] > 0.0 && x_a[i] == 0.0;
    const bool zeroed_b = z_b[i] > 0.0 && x_b[i] == 0.0;
    if (zeroed_a != zeroed_b) return false;
  }
  return true;
}

}  // namespace

std::pair<ModelTheta, TrainReport> mpm_train(const SparseDataset& ds, const MpmConfig& cfg,
                                             const MpmObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  const auto n = ds.num_samples();
  const auto m = ds.num_features();
  if (n == 0) throw ConfigError("training set is empty");
  if (!ds.has_signed_labels()) throw ConfigError("training labels must be -1 or +1; remap them first");

  TrainReport report;
  report.n = n;
  report.m = m;
  report.s = resolve_sparsity(cfg, n);
  report.dense_solver = m < cfg.dense_threshold;

  const std::size_t s = report.s;
  const double f_threshold = std::sqrt(static_cast<double>(n)) * cfg.f_tol_factor;
  double rho = cfg.rho;
  auto solver = std::make_unique<SubproblemSolver>(ds, rho, report.dense_solver, cfg.cg, cfg.warm_start);

  ModelTheta theta = ModelTheta::zeros(m);
  ObjectiveValues current = objective_components(theta, ds, s, rho);
  report.history.push_back({0, rho, current.F, current.f, current.p, std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::quiet_NaN(), 0});
  if (observer) observer(0, theta);

  const Vector ones = Vector::Ones(static_cast<Eigen::Index>(n));
  Vector z_prev;
  Vector x_prev;
  for (int k = 1; k <= cfg.max_outer; ++k) {
    z_prev = margin(theta, ds);
    project_omega_s_into(z_prev, s, x_prev);
    const Vector rhs = rho * multiply_qbar_t(ds, ones - x_prev);

    const SolveOutcome step = solver->solve(rhs, theta.stacked());
    if (!step.theta.allFinite()) throw NumericalError(fmt::format("subproblem solution is not finite at k = {}", k));
    ModelTheta next(step.theta);
    const ObjectiveValues values = objective_components(next, ds, s, rho);
    if (!std::isfinite(values.F)) throw NumericalError(fmt::format("penalty objective is not finite at k = {}", k));

    IterationRecord record;
    record.k = k;
    record.rho = rho;
    record.F = values.F;
    record.f = values.f;
    record.p = values.p;
    record.f_prog = f_prog(current.f, values.f, rho);
    record.p_prog = p_prog(next, values.p);
    record.cg_iterations = step.iterations;
    report.history.push_back(record);
    report.total_cg += step.iterations;
    report.outer_iterations = k;

    theta = std::move(next);
    current = values;
    if (observer) observer(k, theta);

    if (record.f_prog <= f_threshold && record.p_prog <= cfg.p_tol) {
      report.termination = Termination::kConverged;
      break;
    }
    if (cfg.rho_growth > 1.0 && rho < cfg.rho_max) {
      rho = std::min(rho * cfg.rho_growth, cfg.rho_max);
      current.F = current.f + rho * current.p;
      solver = std::make_unique<SubproblemSolver>(ds, rho, report.dense_solver, cfg.cg, cfg.warm_start);
    }
  }

  const Vector z_final = margin(theta, ds);
  Vector x_final;
  project_omega_s_into(z_final, s, x_final);
  const IndexPartition part = partition_indices(z_final, s);
  report.projection_tie_at_exit = part.beta1.size() < part.beta.size();
  report.support_stable_at_exit = z_prev.size() == z_final.size() && same_zeroed_set(z_prev, x_prev, z_final, x_final);
  report.rho = rho;
  report.stationarity_residual = stationarity_residual(theta, ds, s, rho);
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(theta), std::move(report)};
}

}  // namespace scsvm
