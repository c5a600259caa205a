#pragma once

#include <optional>
#include <string_view>

namespace scsvm {

/// Published MPM result for one (dataset, SR) cell, default parameters.
struct ReferenceRun {
  int k;
  int cg;
  double accuracy_pct;
};

/// Published test accuracies: MPM at SR = 10%, DCD on the dual L2-SVM, trust-region Newton, DCD on the dual L1-SVM.
struct ReferenceComparison {
  double mpm;
  double dcd_l2;
  double trn_l2;
  double dcd_l1;
};

/// Looks up a published MPM run; a "_scale" suffix on the name is ignored. SR is a fraction.
std::optional<ReferenceRun> reference_run(std::string_view dataset, double sr);

std::optional<ReferenceComparison> reference_comparison(std::string_view dataset);

}  // namespace scsvm
