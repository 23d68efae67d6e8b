#include "gradfit/chain.hpp"

#include <cmath>
#include <stdexcept>

namespace gradfit {

namespace detail {

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace detail

namespace {

void check_params(const ProbeParams& params) {
  const double gt = params.gamma * params.time;
  detail::require(std::isfinite(gt) && gt != 0.0, "gamma*time must be finite and nonzero");
}

SparseDiagonalState two_term_state(std::string up, std::string down) {
  const double amp = 1.0 / std::sqrt(2.0);
  return SparseDiagonalState{{{std::move(up), amp}, {std::move(down), amp}}};
}

}  // namespace

ChainGeometry::ChainGeometry(int n_atoms_, double spacing_, double x1_)
    : n_atoms(n_atoms_), spacing(spacing_), x1(x1_) {
  detail::require(n_atoms >= 2, "chain needs at least two atoms");
  detail::require(spacing > 0.0 && std::isfinite(spacing), "spacing must be positive");
  detail::require(std::isfinite(x1), "x1 must be finite");
}

double DiagonalGenerator::eigenvalue(const std::string& bits) const {
  detail::require(static_cast<int>(bits.size()) == size(),
                  "bitstring length does not match generator");
  double h = 0.0;
  for (int j = 0; j < size(); ++j) {
    detail::require(bits[j] == '0' || bits[j] == '1', "bitstring must be over {0,1}");
    h += (bits[j] == '0') ? site_weights[j] : -site_weights[j];
  }
  return h;
}

double DiagonalGenerator::eigenvalue_single_excitation(int site) const {
  detail::require(site >= 1 && site <= size(), "site index out of range");
  return site_weights.sum() - 2.0 * site_weights[site - 1];
}

SingleExcitationState w_state(const ChainGeometry& geometry) {
  const int n = geometry.n_atoms;
  SingleExcitationState state;
  state.amps = Eigen::VectorXcd::Constant(n, Complex(1.0 / std::sqrt(double(n)), 0.0));
  return state;
}

SingleExcitationState evolve(const SingleExcitationState& state, const FieldProfile& field,
                             const ProbeParams& params) {
  detail::require(field.size() == state.size(), "field length does not match state");
  check_params(params);
  const double two_gt = 2.0 * params.gamma * params.time;
  SingleExcitationState out;
  out.amps.resize(state.size());
  for (int j = 0; j < state.size(); ++j) {
    out.amps[j] = state.amps[j] * std::polar(1.0, -two_gt * field.values[j]);
  }
  return out;
}

FieldProfile linear_field(const ChainGeometry& geometry, double b1, double gradient) {
  FieldProfile field;
  field.values.resize(geometry.n_atoms);
  for (int j = 1; j <= geometry.n_atoms; ++j) {
    field.values[j - 1] = b1 + gradient * (j - 1) * geometry.spacing;
  }
  field.gauge_fixed = (b1 == 0.0);
  return field;
}

FieldProfile quadratic_field(const ChainGeometry& geometry, double gradient,
                             double quadratic_coeff) {
  FieldProfile field;
  field.values.resize(geometry.n_atoms);
  for (int j = 1; j <= geometry.n_atoms; ++j) {
    const double u = (j - 1) * geometry.spacing;
    field.values[j - 1] = gradient * u + quadratic_coeff * u * u;
  }
  field.gauge_fixed = true;
  return field;
}

FieldProfile gauge_fix(const FieldProfile& field) {
  detail::require(field.size() >= 1, "empty field");
  FieldProfile out = field;
  const double b1 = field.values[0];
  for (double& v : out.values) v -= b1;
  out.values[0] = 0.0;
  out.gauge_fixed = true;
  return out;
}

double mean_field(const FieldProfile& field) {
  detail::require(field.size() >= 1, "empty field");
  double sum = 0.0;
  for (double v : field.values) sum += v;
  return sum / field.size();
}

double half_difference_field(const FieldProfile& field) {
  const int n = field.size();
  detail::require(n >= 2 && n % 2 == 0, "half-difference needs an even number of atoms");
  double upper = 0.0, lower = 0.0;
  for (int j = 0; j < n / 2; ++j) lower += field.values[j];
  for (int j = n / 2; j < n; ++j) upper += field.values[j];
  return (upper - lower) / (n / 2);
}

SparseDiagonalState ghz_state(int n) {
  detail::require(n >= 1, "ghz_state needs n >= 1");
  return two_term_state(std::string(n, '0'), std::string(n, '1'));
}

SparseDiagonalState noon_state(int n) {
  detail::require(n >= 2 && n % 2 == 0, "noon_state needs even n");
  std::string a = std::string(n / 2, '0') + std::string(n / 2, '1');
  std::string b = std::string(n / 2, '1') + std::string(n / 2, '0');
  return two_term_state(std::move(a), std::move(b));
}

DiagonalGenerator site_generator(int n, int site, const ProbeParams& params) {
  detail::require(n >= 1 && site >= 1 && site <= n, "site index out of range");
  check_params(params);
  DiagonalGenerator gen;
  gen.site_weights = Eigen::VectorXd::Zero(n);
  gen.site_weights[site - 1] = params.gamma * params.time;
  return gen;
}

DiagonalGenerator gradient_generator(const ChainGeometry& geometry, const ProbeParams& params) {
  check_params(params);
  const double gta = params.gamma * params.time * geometry.spacing;
  DiagonalGenerator gen;
  gen.site_weights.resize(geometry.n_atoms);
  for (int j = 0; j < geometry.n_atoms; ++j) gen.site_weights[j] = gta * j;
  return gen;
}

}  // namespace gradfit
