#include "scsvm/evaluation.hpp"

#include <fmt/format.h>

#include "scsvm/error.hpp"

namespace scsvm {

namespace {

void check_compatible(const ModelTheta& model, const SparseDataset& ds) {
  if (ds.num_features() > model.num_features()) {
    throw DimensionError(
        fmt::format("data has {} features but the model only {}", ds.num_features(), model.num_features()));
  }
}

}  // namespace

Prediction predict(const ModelTheta& model, const SparseRowView& x) {
  Prediction out;
  out.score = x.dot(model.stacked()) + model.bias();
  out.label = out.score >= 0.0 ? 1.0 : -1.0;
  return out;
}

std::vector<Prediction> predict_all(const ModelTheta& model, const SparseDataset& ds) {
  check_compatible(model, ds);
  std::vector<Prediction> out;
  out.reserve(ds.num_samples());
  for (std::size_t i = 0; i < ds.num_samples(); ++i) out.push_back(predict(model, ds.row(i)));
  return out;
}

std::size_t sign_error_count(const ModelTheta& model, const SparseDataset& ds) {
  check_compatible(model, ds);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < ds.num_samples(); ++i) wrong += predict(model, ds.row(i)).label != ds.label(i) ? 1 : 0;
  return wrong;
}

double accuracy(const ModelTheta& model, const SparseDataset& test) {
  if (test.num_samples() == 0) throw ConfigError("accuracy of an empty test set is undefined");
  const auto wrong = sign_error_count(model, test);
  const auto n = static_cast<double>(test.num_samples());
  return 100.0 * (n - static_cast<double>(wrong)) / n;
}

double error_rate(const ModelTheta& model, const SparseDataset& test) { return 100.0 - accuracy(model, test); }

std::size_t train_misclassified_count(const ModelTheta& model, const SparseDataset& train) {
  check_compatible(model, train);
  std::size_t count = 0;
  for (std::size_t i = 0; i < train.num_samples(); ++i) {
    const double z = 1.0 - train.label(i) * predict(model, train.row(i)).score;
    count += z > 0.0 ? 1 : 0;
  }
  return count;
}

}  // namespace scsvm
