#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gradfit/chain.hpp"
#include "gradfit/measurement.hpp"

namespace gradfit {

/// (N-1)x(N-1) information matrix over the gauge-fixed parameters B_2..B_N.
/// Entry (i,j) refers to the pair (B_{i+2}, B_{j+2}).
struct FisherMatrix {
  Eigen::MatrixXd entries;
  double gamma = 1.0;
  double time = 1.0;
  bool singular = false;

  int size() const { return static_cast<int>(entries.rows()); }
};

struct ScalarInformation {
  double value = 0.0;
};

using FieldModel = std::function<OutcomeDistribution(const FieldProfile&)>;
using ScalarModel = std::function<OutcomeDistribution(double)>;

/// Classical FI matrix by central finite differences on the outcome
/// probabilities, [F]_{mn} = sum_xi (d_m p)(d_n p)/p. Probabilities below
/// 1e-12 are floored in the denominator. The field must be gauge-fixed.
FisherMatrix fi_matrix_numeric(const FieldModel& model, const FieldProfile& field,
                               double step = 1e-4);

/// Closed-form fourier-basis FI on the linear-field manifold:
/// (8 gamma^2 t^2 / N)(delta_{m,n} - delta_{m+n,N+1}), m,n in 2..N.
/// Singular (determinant 0) for every N >= 3; flagged accordingly.
FisherMatrix fi_matrix_a_linear(int n, const ProbeParams& params);

/// Closed-form cascade-basis FI in the limit B -> 0:
/// (16 gamma^2 t^2 / N^2)(N delta_{m,n} - 1). Equals the W-state QFI matrix.
FisherMatrix fi_matrix_b_origin(int n, const ProbeParams& params);

/// W-state QFI matrix (16 gamma^2 t^2/N^2)(N delta - 1) and its inverse
/// (N/(16 gamma^2 t^2))(delta + 1).
FisherMatrix qfi_matrix_w(int n, const ProbeParams& params);
Eigen::MatrixXd qfi_matrix_w_inverse(int n, const ProbeParams& params);

/// The one-hot generators h_m = gamma t sigma_z^m for m = 2..N.
std::vector<DiagonalGenerator> field_generators(int n, const ProbeParams& params);

/// Pure-state QFI for commuting diagonal generators:
/// [F_Q]_{mn} = 2[<h_m h_n + h_n h_m> - 2<h_m><h_n>] = 4 Cov(h_m, h_n).
FisherMatrix qfi_pure_diagonal(const SparseDiagonalState& state,
                               const std::vector<DiagonalGenerator>& generators);
FisherMatrix qfi_pure_diagonal(const SingleExcitationState& state,
                               const std::vector<DiagonalGenerator>& generators);

/// Single-parameter W-state QFI for the gradient, (2 gamma t a)^2 (N^2-1)/3.
ScalarInformation qfi_single_w(int n, const ProbeParams& params, double spacing);

/// Scalar FI by central differences with the same small-probability floor.
ScalarInformation fi_single_numeric(const ScalarModel& model, double g, double step = 1e-4);

/// Largest QFI over all pure states for one diagonal generator:
/// (h_max - h_min)^2 where h_max = sum_j |g_j| = -h_min. Zero for a constant
/// generator.
ScalarInformation optimal_state_qfi_bound(const DiagonalGenerator& generator);

}  // namespace gradfit
