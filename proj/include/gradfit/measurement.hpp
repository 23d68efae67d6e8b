#pragma once

#include <Eigen/Dense>

#include "gradfit/chain.hpp"

namespace gradfit {

enum class BasisKind { fourier, cascade, custom };

/// Von Neumann measurement basis on the single-excitation subspace.
/// rows.row(xi) holds the coefficients of |Pi_xi> on {|w_j>}, xi = 0..N-1.
struct ProjectiveBasis {
  Eigen::MatrixXcd rows;
  BasisKind label = BasisKind::custom;

  int size() const { return static_cast<int>(rows.rows()); }
};

struct OutcomeDistribution {
  Eigen::VectorXd probs;

  int size() const { return static_cast<int>(probs.size()); }
};

/// Basis a: |Pi_k> = (1/sqrt(N)) sum_j e^{i 2 pi k (j-1)/N} |w_j>.
/// Row 0 is the W state.
ProjectiveBasis fourier_basis(int n);

/// Basis b: |Pi_0> = W, |Pi_k> = sqrt(k/(k+1)) ((1/k) sum_{j<=k} |w_j> - |w_{k+1}>).
/// Real orthogonal matrix.
ProjectiveBasis cascade_basis(int n);

/// probs[xi] = |<Pi_xi|psi>|^2.
OutcomeDistribution outcome_distribution(const SingleExcitationState& state,
                                         const ProjectiveBasis& basis);

/// sin(k*x)/sin(x), evaluated through the analytic limit k*cos(kx)/cos(x)
/// when |sin(x)| < 1e-9 (removable singularity at multiples of pi).
double dirichlet_ratio(int k, double x);

/// Closed form p^a(xi|G) = (1/N^2) sin^2 N(gtaG + xi pi/N) / sin^2(gtaG + xi pi/N)
/// for the fourier basis at the linear field B_j = (j-1) a G.
OutcomeDistribution prob_a_linear(int n, const ProbeParams& params, double spacing,
                                  double gradient);

/// Exact closed form for the cascade basis at the linear field.
OutcomeDistribution prob_b_linear(int n, const ProbeParams& params, double spacing,
                                  double gradient);

/// Small-angle approximation, valid for gtaG << 1:
/// p(0) ~ 1 - (N^2-1)(gtaG)^2/3, p(xi) ~ xi(1+xi)(gtaG)^2/N. Sums to 1 exactly.
OutcomeDistribution prob_b_linear_small_angle(int n, const ProbeParams& params,
                                              double spacing, double gradient);

/// C = (N-1) E(0) - sum_{xi>=1} E(xi) built from the given basis. Both
/// constructions diagonalize it with eigenvalue N-1 on row 0 and -1 elsewhere.
Eigen::MatrixXcd coherence_operator(const ProjectiveBasis& basis);

}  // namespace gradfit
