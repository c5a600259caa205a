#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "scsvm/dataset.hpp"
#include "scsvm/mpm.hpp"

namespace scsvm {

struct Prediction {
  double score = 0.0;  // omega^T x + b
  double label = 0.0;  // +1 iff score >= 0
};

/// A score of exactly zero is labelled +1.
Prediction predict(const ModelTheta& model, const SparseRowView& x);

std::vector<Prediction> predict_all(const ModelTheta& model, const SparseDataset& ds);

/// 100 * correct / n. Throws ConfigError on an empty set, DimensionError if the data has more features than the model.
double accuracy(const ModelTheta& model, const SparseDataset& test);

/// 100 - accuracy(model, test).
double error_rate(const ModelTheta& model, const SparseDataset& test);

/// ||z_+||_0: samples with 1 - y_i (omega^T x_i + b) > 0, the quantity bounded by s.
std::size_t train_misclassified_count(const ModelTheta& model, const SparseDataset& train);

/// Samples on the wrong side of the hyperplane (predicted label != y).
std::size_t sign_error_count(const ModelTheta& model, const SparseDataset& ds);

struct DcdConfig {
  double C = 1.0;
  int max_epochs = 1000;
  double tolerance = 0.1;  // stop when max PG - min PG over an epoch falls below this
  double bias_feature = 1.0;  // value of the constant feature appended to every sample
  std::uint64_t seed = 1;
};

struct DcdResult {
  ModelTheta model;
  bool converged = false;
  int epochs = 0;
  /// e^T alpha - 0.5 ||w||^2 after every epoch; nondecreasing.
  std::vector<double> dual_objective;
};

/**
 * Dual coordinate descent for the hinge-loss (L1) SVM
 *   min 0.5 ||w||^2 + C sum_i max(0, 1 - y_i w^T [x_i; B]),
 * with the bias folded in as the weight of a constant feature B. Deterministic
 * for a fixed seed. On hitting max_epochs it returns the last iterate with
 * converged = false.
 */
DcdResult dcd_train(const SparseDataset& ds, const DcdConfig& cfg = {});

}  // namespace scsvm
