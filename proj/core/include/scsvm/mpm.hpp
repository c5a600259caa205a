#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scsvm/dataset.hpp"
#include "scsvm/linalg.hpp"
#include "scsvm/types.hpp"

namespace scsvm {

/// Linear classifier parameters stacked as theta = [omega; b].
class ModelTheta {
 public:
  ModelTheta() : theta_(Vector::Zero(1)) {}
  /// Throws DimensionError for an empty vector and NumericalError for non-finite entries.
  explicit ModelTheta(Vector theta);

  static ModelTheta zeros(std::size_t num_features) {
    return ModelTheta(Vector::Zero(static_cast<Eigen::Index>(num_features) + 1));
  }

  std::size_t num_features() const noexcept { return static_cast<std::size_t>(theta_.size() - 1); }
  const Vector& stacked() const noexcept { return theta_; }
  auto omega() const { return theta_.head(theta_.size() - 1); }
  double bias() const noexcept { return theta_[theta_.size() - 1]; }

  friend bool operator==(const ModelTheta& a, const ModelTheta& b) {
    return a.theta_.size() == b.theta_.size() && a.theta_ == b.theta_;
  }

 private:
  Vector theta_;
};

struct MpmConfig {
  double rho = 0.4;
  /// Exactly one of these must be set. The ratio maps to s = round_half_up(sparse_ratio * n).
  std::optional<std::size_t> s;
  std::optional<double> sparse_ratio;

  double f_tol_factor = 1e-3;  // f-prog threshold is sqrt(n) * f_tol_factor
  double p_tol = 1e-3;
  int max_outer = 1000;
  CgConfig cg;
  std::size_t dense_threshold = kDefaultDenseThreshold;

  /// Start CG from the previous iterate instead of zero.
  bool warm_start = false;
  /// Multiply rho by this after every outer step (1 keeps rho fixed), capped at rho_max.
  double rho_growth = 1.0;
  double rho_max = 1e8;
};

/// round_half_up(ratio * n); throws ConfigError for a ratio outside [0, 1].
std::size_t sparsity_from_ratio(double ratio, std::size_t n);

/// Validates `cfg` against a dataset of n samples and returns s.
std::size_t resolve_sparsity(const MpmConfig& cfg, std::size_t n);

struct IterationRecord {
  int k = 0;
  double rho = 0.0;
  double F = 0.0;
  double f = 0.0;
  double p = 0.0;
  double f_prog = 0.0;  // NaN for k = 0
  double p_prog = 0.0;  // NaN for k = 0
  int cg_iterations = 0;
};

enum class Termination { kConverged, kMaxOuter };

std::string to_string(Termination t);

struct TrainReport {
  int outer_iterations = 0;  // k in the published tables
  long total_cg = 0;         // 0 when the direct solver was used
  double wall_time_s = 0.0;
  Termination termination = Termination::kMaxOuter;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t s = 0;
  double rho = 0.0;  // final penalty parameter
  bool dense_solver = false;
  /// The projection at the last iterate was not unique (a tie straddled the s-th position).
  bool projection_tie_at_exit = false;
  /// The zeroed index set did not change between the last two iterates.
  bool support_stable_at_exit = false;
  /// ||(P^T P + rho Q^T Q) theta - majorization_rhs(theta)|| at the returned model.
  double stationarity_residual = 0.0;
  std::vector<IterationRecord> history;  // history[0] describes theta^0

  bool converged() const noexcept { return termination == Termination::kConverged; }
};

/// z_i = 1 - y_i (omega^T x_i + b).
Vector margin(const ModelTheta& theta, const SparseDataset& ds);

/// Qbar theta = Diag(y) Q theta.
Vector multiply_qbar(const SparseDataset& ds, const Vector& theta);
/// Qbar^T u = Q^T Diag(y) u.
Vector multiply_qbar_t(const SparseDataset& ds, const Vector& u);

struct ObjectiveValues {
  double f = 0.0;  // 0.5 ||omega||^2
  double p = 0.0;  // g(1 - Qbar theta)
  double F = 0.0;  // f + rho p
};

ObjectiveValues objective_components(const ModelTheta& theta, const SparseDataset& ds, std::size_t s, double rho);

/// rho Qbar^T (1_n - Pi(1_n - Qbar theta_k)), the right-hand side of the majorized subproblem.
Vector majorization_rhs(const ModelTheta& theta_k, const SparseDataset& ds, std::size_t s, double rho);

/**
 * Surrogate of p at `anchor`:
 *   p_m(theta, anchor) = 0.5 ||z||^2 - h(anchor) + <Qbar^T Pi(z_anchor), theta - anchor>,
 * evaluated in the equivalent form 0.5 ||z - Pi(z_anchor)||^2 (the two agree because
 * Pi(z_anchor) and z_anchor - Pi(z_anchor) have disjoint supports).
 */
double majorizer_value(const ModelTheta& theta, const ModelTheta& anchor, const SparseDataset& ds, std::size_t s);

/// h(theta) = 0.5 ||Pi(1 - Qbar theta)||^2.
double h_value(const ModelTheta& theta, const SparseDataset& ds, std::size_t s);

/// -Qbar^T Pi(1 - Qbar theta), a subgradient of h at theta.
Vector h_subgradient(const ModelTheta& theta, const SparseDataset& ds, std::size_t s);

/// (f_prev - f_curr) / (rho + f_prev). Signed: an increase in f gives a negative value.
double f_prog(double f_prev, double f_curr, double rho);

/// 2 p / ||theta||^2; 0 when p == 0, +inf when theta == 0 and p > 0.
double p_prog(const ModelTheta& theta, double p);

/// ||(P^T P + rho Q^T Q) theta - majorization_rhs(theta)||.
double stationarity_residual(const ModelTheta& theta, const SparseDataset& ds, std::size_t s, double rho);

/// Invoked with (k, theta^k) for k = 0 and after every outer step.
using MpmObserver = std::function<void(int, const ModelTheta&)>;

/**
 * Majorization penalty method from theta^0 = 0. Each step solves
 *   (P^T P + rho Q^T Q) theta = majorization_rhs(theta^k)
 * directly when m < dense_threshold and by CG otherwise, and stops once
 * f_prog <= sqrt(n) f_tol_factor and p_prog <= p_tol (k >= 1) or after max_outer steps.
 * Requires labels in {-1, +1}.
 */
std::pair<ModelTheta, TrainReport> mpm_train(const SparseDataset& ds, const MpmConfig& cfg,
                                             const MpmObserver& observer = {});

/// Model file: header "m b", then one "index value" line per nonzero omega entry (1-based index).
void write_model(const ModelTheta& model, std::ostream& out);
void write_model(const ModelTheta& model, const std::filesystem::path& path);
ModelTheta read_model(std::istream& in);
ModelTheta read_model(const std::filesystem::path& path);

/// JSON document with the summary fields and the full per-iteration history.
std::string train_report_to_json(const TrainReport& report);

}  // namespace scsvm
