#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gradfit {

using Complex = std::complex<double>;

/// Evenly spaced atom chain: atom j (1-based) sits at x1 + (j-1)*spacing.
struct ChainGeometry {
  int n_atoms;
  double spacing;
  double x1;

  ChainGeometry(int n_atoms_, double spacing_, double x1_ = 0.0);

  double position(int j) const { return x1 + (j - 1) * spacing; }
};

/// Probe constants. Everything downstream depends only on the products
/// gamma*time and gamma*time*spacing, so the dimensionless default is 1/1.
struct ProbeParams {
  double gamma = 1.0;  // gyromagnetic ratio, rad s^-1 T^-1
  double time = 1.0;   // evolution time, s

  double phase_scale() const { return gamma * time; }
};

/// Per-atom field values B_j (tesla). gauge_fixed means B_1 has been
/// subtracted from every entry, so values[0] == 0.
struct FieldProfile {
  std::vector<double> values;
  bool gauge_fixed = false;

  int size() const { return static_cast<int>(values.size()); }
};

/// State in the single-excitation subspace: amps[j-1] is the amplitude on
/// |w_j> = |1>_j prod_{j'!=j} |0>_{j'}.
struct SingleExcitationState {
  Eigen::VectorXcd amps;

  int size() const { return static_cast<int>(amps.size()); }
  double norm() const { return amps.norm(); }
};

/// Sparse state over computational bitstrings. Bit convention: site 1 is the
/// leftmost character, '0' = spin up (+1 under sigma_z).
struct SparseDiagonalState {
  struct Term {
    std::string bits;
    Complex amp;
  };
  std::vector<Term> terms;

  int n_sites() const { return terms.empty() ? 0 : static_cast<int>(terms.front().bits.size()); }
};

/// Diagonal generator h = sum_j g_j sigma_z^j with eigenvalue
/// h(s) = sum_j g_j (-1)^{s_j} on bitstring s.
struct DiagonalGenerator {
  Eigen::VectorXd site_weights;

  int size() const { return static_cast<int>(site_weights.size()); }
  double eigenvalue(const std::string& bits) const;
  /// Eigenvalue on |w_site> (1-based site index): sum_j g_j - 2 g_site.
  double eigenvalue_single_excitation(int site) const;
};

SingleExcitationState w_state(const ChainGeometry& geometry);

/// Phase evolution c_j -> exp(-i 2 gamma t B_j) c_j.
SingleExcitationState evolve(const SingleExcitationState& state,
                             const FieldProfile& field,
                             const ProbeParams& params);

/// B_j = b1 + gradient*(j-1)*spacing.
FieldProfile linear_field(const ChainGeometry& geometry, double b1, double gradient);

/// B_j = gradient*u + quadratic_coeff*u^2 with u = (j-1)*spacing. Gauge-fixed
/// by construction (B_1 = 0).
FieldProfile quadratic_field(const ChainGeometry& geometry, double gradient,
                             double quadratic_coeff);

/// Subtract B_1 from every entry. Only phase differences are observable, so
/// outcome statistics are unchanged.
FieldProfile gauge_fix(const FieldProfile& field);

double mean_field(const FieldProfile& field);

/// (B_{N/2+1}+...+B_N - B_1-...-B_{N/2}) / (N/2); requires even N.
double half_difference_field(const FieldProfile& field);

SparseDiagonalState ghz_state(int n);
SparseDiagonalState noon_state(int n);  // requires even n

/// Generator of the phase acquired from B_m: h_m = gamma*t*sigma_z^m.
DiagonalGenerator site_generator(int n, int site, const ProbeParams& params);

/// Generator of the phase acquired from the gradient under the linear model:
/// g_j = gamma*t*spacing*(j-1).
DiagonalGenerator gradient_generator(const ChainGeometry& geometry, const ProbeParams& params);

namespace detail {
void require(bool condition, const char* message);
}

}  // namespace gradfit
