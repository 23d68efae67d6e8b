#include <cmath>
#include <random>

#include "doctest.h"
#include "gradfit/chain.hpp"
#include "gradfit/measurement.hpp"

using namespace gradfit;

namespace {

constexpr double kPi = 3.14159265358979323846;

SingleExcitationState random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  SingleExcitationState state;
  state.amps.resize(n);
  for (int j = 0; j < n; ++j) state.amps[j] = Complex(gauss(rng), gauss(rng));
  state.amps /= state.amps.norm();
  return state;
}

}  // namespace

TEST_CASE("fourier basis construction") {
  const ProjectiveBasis b2 = fourier_basis(2);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(b2.rows(0, 0) - Complex(s, 0)) < 1e-15);
  CHECK(std::abs(b2.rows(0, 1) - Complex(s, 0)) < 1e-15);
  CHECK(std::abs(b2.rows(1, 0) - Complex(s, 0)) < 1e-15);
  CHECK(std::abs(b2.rows(1, 1) - Complex(-s, 0)) < 1e-12);

  // N=4, k=1, j=3: e^{i pi}/2 = -1/2
  const ProjectiveBasis b4 = fourier_basis(4);
  CHECK(std::abs(b4.rows(1, 2) - Complex(-0.5, 0)) < 1e-12);

  for (const int n : {2, 3, 8, 17}) {
    const ProjectiveBasis basis = fourier_basis(n);
    const Eigen::MatrixXcd gram = basis.rows * basis.rows.adjoint();
    CHECK((gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(fourier_basis(1), std::invalid_argument);
}

TEST_CASE("cascade basis construction") {
  const ProjectiveBasis b2 = cascade_basis(2);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(b2.rows(1, 0) - Complex(s, 0)) < 1e-15);
  CHECK(std::abs(b2.rows(1, 1) - Complex(-s, 0)) < 1e-15);

  // N=3, k=2: sqrt(2/3) (1/2, 1/2, -1), unit norm
  const ProjectiveBasis b3 = cascade_basis(3);
  const double c = std::sqrt(2.0 / 3.0);
  CHECK(std::abs(b3.rows(2, 0) - Complex(c / 2, 0)) < 1e-14);
  CHECK(std::abs(b3.rows(2, 1) - Complex(c / 2, 0)) < 1e-14);
  CHECK(std::abs(b3.rows(2, 2) - Complex(-c, 0)) < 1e-14);
  CHECK(b3.rows.row(2).norm() == doctest::Approx(1.0).epsilon(1e-14));

  for (const int n : {2, 3, 9, 21}) {
    const ProjectiveBasis basis = cascade_basis(n);
    CHECK(basis.rows.imag().cwiseAbs().maxCoeff() == 0.0);
    const Eigen::MatrixXcd gram = basis.rows * basis.rows.adjoint();
    CHECK((gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("both bases diagonalize the coherence operator") {
  for (const int n : {2, 3, 6}) {
    for (const auto& basis : {fourier_basis(n), cascade_basis(n)}) {
      const Eigen::MatrixXcd c = coherence_operator(basis);
      for (int xi = 0; xi < n; ++xi) {
        const Eigen::VectorXcd row = basis.rows.row(xi).transpose();
        const double expected = (xi == 0) ? double(n - 1) : -1.0;
        CHECK((c * row - expected * row).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("outcome distributions") {
  const ProbeParams params;

  SUBCASE("W state projects onto outcome 0 in either basis") {
    for (const int n : {2, 5}) {
      const auto w = w_state(ChainGeometry(n, 1.0));
      for (const auto& basis : {fourier_basis(n), cascade_basis(n)}) {
        const auto dist = outcome_distribution(w, basis);
        CHECK(dist.probs[0] == doctest::Approx(1.0).epsilon(1e-14));
        for (int xi = 1; xi < n; ++xi) CHECK(std::abs(dist.probs[xi]) < 1e-14);
      }
    }
  }

  SUBCASE("N=2 evolved to the orthogonal row") {
    const ChainGeometry geometry(2, 1.0);
    const FieldProfile field = linear_field(geometry, 0.0, kPi / 2);
    const auto dist =
        outcome_distribution(evolve(w_state(geometry), field, params), fourier_basis(2));
    CHECK(std::abs(dist.probs[0]) < 1e-12);
    CHECK(dist.probs[1] == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("completeness on random states") {
    std::mt19937_64 rng(5);
    for (const int n : {2, 6, 11}) {
      const auto state = random_state(n, rng);
      for (const auto& basis : {fourier_basis(n), cascade_basis(n)}) {
        const auto dist = outcome_distribution(state, basis);
        CHECK(dist.probs.minCoeff() >= 0.0);
        CHECK(dist.probs.sum() == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(outcome_distribution(w_state(ChainGeometry(3, 1.0)), fourier_basis(4)),
                    std::invalid_argument);
  }
}

TEST_CASE("closed-form basis-a probabilities") {
  const ProbeParams params;

  CHECK(prob_a_linear(5, params, 1.0, 0.0).probs[0] == doctest::Approx(1.0).epsilon(1e-14));

  // N=2, gta=1, G=pi/4 -> (1/2, 1/2)
  const auto p = prob_a_linear(2, params, 1.0, kPi / 4);
  CHECK(p.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.probs[1] == doctest::Approx(0.5).epsilon(1e-12));

  // matches the projection oracle, removable singularities included
  for (const int n : {2, 3, 8, 25}) {
    const ChainGeometry geometry(n, 1.0);
    std::vector<double> gs = {0.0, 0.1, 0.7, kPi / 4, kPi};
    for (int xi = 0; xi < n; ++xi) gs.push_back((1.0 - double(xi) / n) * kPi);
    for (const double g : gs) {
      const auto oracle = outcome_distribution(
          evolve(w_state(geometry), linear_field(geometry, 0.0, g), params), fourier_basis(n));
      const auto closed = prob_a_linear(n, params, 1.0, g);
      CHECK((closed.probs - oracle.probs).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("closed-form basis-b probabilities") {
  const ProbeParams params;

  const auto p0 = prob_b_linear(4, params, 1.0, 0.0);
  CHECK(p0.probs[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p0.probs.tail(3).cwiseAbs().maxCoeff() < 1e-14);

  for (const int n : {2, 3, 8, 25}) {
    const ChainGeometry geometry(n, 1.0);
    for (const double g : {0.001, 0.1, 0.9, kPi}) {
      const auto oracle = outcome_distribution(
          evolve(w_state(geometry), linear_field(geometry, 0.0, g), params), cascade_basis(n));
      const auto closed = prob_b_linear(n, params, 1.0, g);
      CHECK((closed.probs - oracle.probs).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("small-angle approximation") {
    // N=8, gta G = 1e-3, xi = 3: relative agreement 1e-4
    const auto exact = prob_b_linear(8, params, 1.0, 1e-3);
    const auto approx = prob_b_linear_small_angle(8, params, 1.0, 1e-3);
    CHECK(std::abs(exact.probs[3] - approx.probs[3]) / exact.probs[3] < 1e-4);
    CHECK(approx.probs.sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

namespace {

FieldProfile seeded_random_field(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  FieldProfile field;
  field.values.resize(n);
  for (double& v : field.values) v = uni(rng);
  return field;
}

Eigen::VectorXd probs_of(const FieldProfile& f, const ProjectiveBasis& basis,
                         const ProbeParams& params) {
  const ChainGeometry geometry(f.size(), 1.0);
  return outcome_distribution(evolve(w_state(geometry), f, params), basis).probs;
}

}  // namespace

TEST_CASE("reflected-negated fields are indistinguishable in basis a") {
  const ProbeParams params;
  for (const int n : {2, 3, 7}) {
    const FieldProfile field = seeded_random_field(n, 17 + n);
    FieldProfile reflected = field;
    for (int j = 0; j < n; ++j) reflected.values[j] = -field.values[n - 1 - j];
    CHECK((probs_of(field, fourier_basis(n), params) -
           probs_of(reflected, fourier_basis(n), params))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("cascade outcome xi depends only on B_2..B_{xi+1}") {
  // holds for xi >= 1; outcome 0 is the W projection and sees every B_j
  const ProbeParams params;
  for (const int n : {2, 3, 7}) {
    const FieldProfile field = seeded_random_field(n, 29 + n);
    const Eigen::VectorXd base = probs_of(field, cascade_basis(n), params);
    for (int xi = 1; xi + 1 < n; ++xi) {
      FieldProfile bumped = field;
      for (int j = xi + 1; j < n; ++j) bumped.values[j] += 0.61 + 0.1 * j;
      CHECK(std::abs(probs_of(bumped, cascade_basis(n), params)[xi] - base[xi]) < 1e-12);
    }
  }
}

TEST_CASE("global negation symmetry") {
  const ProbeParams params;
  for (const int n : {2, 3, 7}) {
    const FieldProfile field = seeded_random_field(n, 41 + n);
    FieldProfile negated = field;
    for (double& v : negated.values) v = -v;
    // cascade rows are real: distribution is exactly invariant
    CHECK((probs_of(field, cascade_basis(n), params) -
           probs_of(negated, cascade_basis(n), params))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    // fourier outcomes relabel xi -> (N - xi) mod N
    const Eigen::VectorXd pa = probs_of(field, fourier_basis(n), params);
    const Eigen::VectorXd pa_neg = probs_of(negated, fourier_basis(n), params);
    for (int xi = 0; xi < n; ++xi) {
      CHECK(std::abs(pa_neg[xi] - pa[(n - xi) % n]) < 1e-12);
    }
  }
}

TEST_CASE("dirichlet ratio handles removable singularities") {
  CHECK(dirichlet_ratio(5, 0.0) == doctest::Approx(5.0));
  CHECK(dirichlet_ratio(5, kPi) == doctest::Approx(5.0));
  CHECK(dirichlet_ratio(4, kPi) == doctest::Approx(-4.0));
  CHECK(dirichlet_ratio(3, 0.2) == doctest::Approx(std::sin(0.6) / std::sin(0.2)));
}
