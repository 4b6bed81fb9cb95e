#pragma once

#include <functional>
#include <string>
#include <vector>

#include "magprop/potentials.hpp"

namespace magprop {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Supplementary rows (fallback configurations, corrected oracles) are
  /// reported but never decide the outcome.
  bool informational = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

namespace suite {
AngularPotential ab(double alpha = 0.3);
/// a = cos theta, A = 0.3
AngularPotential p1();
/// a = cos theta + 0.5 sin 2 theta, A = 0.3 + 0.2 cos theta
AngularPotential p2();
/// a = 1 + cos theta, A = 0.3 (positive angular spectrum)
AngularPotential p1_plus();
/// a = 2 cos 2 theta, A = 0
AngularPotential mathieu();
}  // namespace suite

/// Runs one criterion (1..10). The first row is the gating one; any further
/// rows are informational.
std::vector<CriterionResult> run_criterion(int id);

/// Runs every criterion, reporting each row through `sink` as soon as it is known.
std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& sink = {});

std::string format_result(const CriterionResult& r);

/// True when every gating row passed.
bool all_passed(const std::vector<CriterionResult>& rows);

}  // namespace magprop
