#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gradfit {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the full verification suite (10 criteria). Each criterion prints one
/// PASS/FAIL line to `log` as it completes.
std::vector<CriterionResult> run_verification(std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

/// Brute-force maximum of f(p) = sum p_j v_j^2 - (sum p_j v_j)^2 over the
/// probability simplex: composition grid plus pairwise mass-transfer
/// refinement. Independent of the closed-form bound it checks.
double max_variance_over_simplex(const Eigen::VectorXd& values, int grid_resolution = 8);

}  // namespace gradfit
