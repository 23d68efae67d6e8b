#include <cmath>
#include <random>

#include "doctest.h"
#include "gradfit/chain.hpp"
#include "gradfit/measurement.hpp"

using namespace gradfit;

namespace {

constexpr double kPi = 3.14159265358979323846;

FieldProfile make_field(std::vector<double> values) {
  FieldProfile f;
  f.values = std::move(values);
  return f;
}

}  // namespace

TEST_CASE("chain geometry positions") {
  const ChainGeometry geometry(4, 0.5, 1.0);
  CHECK(geometry.position(1) == doctest::Approx(1.0));
  CHECK(geometry.position(4) == doctest::Approx(2.5));
  CHECK_THROWS_AS(ChainGeometry(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ChainGeometry(3, -1.0), std::invalid_argument);
}

TEST_CASE("w_state amplitudes") {
  const auto w2 = w_state(ChainGeometry(2, 1.0));
  CHECK(w2.amps[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(w2.amps[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  const auto w4 = w_state(ChainGeometry(4, 1.0));
  for (int j = 0; j < 4; ++j) CHECK(w4.amps[j] == Complex(0.5, 0.0));

  CHECK(w_state(ChainGeometry(3, 1.0)).norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("evolve acquires the e^{-i2 gamma t B} phases") {
  const ChainGeometry geometry(2, 1.0);
  const ProbeParams params;

  SUBCASE("zero field is the identity") {
    const auto out = evolve(w_state(geometry), make_field({0.0, 0.0}), params);
    CHECK(std::abs(out.amps[0] - Complex(1 / std::sqrt(2.0), 0)) < 1e-15);
    CHECK(std::abs(out.amps[1] - Complex(1 / std::sqrt(2.0), 0)) < 1e-15);
  }

  SUBCASE("B = (0, pi/2) flips the second amplitude") {
    const auto out = evolve(w_state(geometry), make_field({0.0, kPi / 2}), params);
    CHECK(std::abs(out.amps[0] - Complex(1 / std::sqrt(2.0), 0)) < 1e-12);
    CHECK(std::abs(out.amps[1] - Complex(-1 / std::sqrt(2.0), 0)) < 1e-12);
  }

  SUBCASE("length mismatch throws") {
    CHECK_THROWS_AS(evolve(w_state(geometry), make_field({0.0, 0.0, 0.0}), params),
                    std::invalid_argument);
  }
}

TEST_CASE("evolve properties on random fields") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  const ProbeParams params{1.3, 0.7};
  for (const int n : {2, 5, 9}) {
    const ChainGeometry geometry(n, 1.0);
    FieldProfile field;
    field.values.resize(n);
    for (double& v : field.values) v = uni(rng);

    const auto evolved = evolve(w_state(geometry), field, params);
    CHECK(evolved.norm() == doctest::Approx(1.0).epsilon(1e-12));

    // evolving for t1 then t2 equals evolving for t1 + t2
    const ProbeParams t1{params.gamma, 0.3};
    const ProbeParams t2{params.gamma, 0.4};
    const ProbeParams t12{params.gamma, 0.7};
    const auto split = evolve(evolve(w_state(geometry), field, t1), field, t2);
    const auto joint = evolve(w_state(geometry), field, t12);
    CHECK((split.amps - joint.amps).norm() < 1e-12);
  }
}

TEST_CASE("linear_field substitution") {
  CHECK(linear_field(ChainGeometry(3, 1.0), 0.0, 0.0).values == std::vector<double>{0, 0, 0});
  CHECK(linear_field(ChainGeometry(3, 1.0), 0.0, 2.0).values == std::vector<double>{0, 2, 4});
  CHECK(linear_field(ChainGeometry(4, 0.5), 1.0, 2.0).values ==
        std::vector<double>{1, 2, 3, 4});
  CHECK(linear_field(ChainGeometry(3, 1.0), 0.0, 2.0).gauge_fixed);
  CHECK_FALSE(linear_field(ChainGeometry(3, 1.0), 1.0, 2.0).gauge_fixed);
}

TEST_CASE("gauge_fix subtracts B_1") {
  const FieldProfile fixed = gauge_fix(make_field({5.0, 6.0, 7.0}));
  CHECK(fixed.values == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(fixed.gauge_fixed);

  // idempotent
  const FieldProfile again = gauge_fix(fixed);
  CHECK(again.values == fixed.values);
}

TEST_CASE("gauge fixing leaves outcome distributions unchanged") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uni(-1.5, 1.5);
  const ProbeParams params;
  for (const int n : {2, 4, 7}) {
    const ChainGeometry geometry(n, 1.0);
    FieldProfile field;
    field.values.resize(n);
    for (double& v : field.values) v = uni(rng);
    const FieldProfile fixed = gauge_fix(field);

    for (const auto& basis : {fourier_basis(n), cascade_basis(n)}) {
      const auto before = outcome_distribution(evolve(w_state(geometry), field, params), basis);
      const auto after = outcome_distribution(evolve(w_state(geometry), fixed, params), basis);
      CHECK((before.probs - after.probs).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("ghz and noon states") {
  const auto ghz = ghz_state(2);
  REQUIRE(ghz.terms.size() == 2);
  CHECK(ghz.terms[0].bits == "00");
  CHECK(ghz.terms[1].bits == "11");
  CHECK(std::abs(ghz.terms[0].amp - Complex(1 / std::sqrt(2.0), 0)) < 1e-15);

  const auto noon = noon_state(4);
  REQUIRE(noon.terms.size() == 2);
  CHECK(noon.terms[0].bits == "0011");
  CHECK(noon.terms[1].bits == "1100");

  CHECK_THROWS_AS(noon_state(3), std::invalid_argument);
}

TEST_CASE("mean and half-difference field") {
  CHECK(mean_field(make_field({0, 1, 2})) == doctest::Approx(1.0));
  CHECK(half_difference_field(make_field({0, 0, 2, 2})) == doctest::Approx(2.0));
  CHECK_THROWS_AS(half_difference_field(make_field({0, 1, 2})), std::invalid_argument);

  // linear field B_j = (j-1) a G: half-difference is N a G / 2
  const double a = 0.5, g = 0.3;
  const FieldProfile lf = linear_field(ChainGeometry(4, a), 0.0, g);
  CHECK(half_difference_field(lf) == doctest::Approx(4 * a * g / 2).epsilon(1e-14));
}

TEST_CASE("diagonal generators") {
  const ProbeParams params{2.0, 0.5};  // gamma t = 1
  const DiagonalGenerator site = site_generator(3, 2, params);
  CHECK(site.eigenvalue("000") == doctest::Approx(1.0));
  CHECK(site.eigenvalue("010") == doctest::Approx(-1.0));
  CHECK(site.eigenvalue_single_excitation(2) == doctest::Approx(-1.0));
  CHECK(site.eigenvalue_single_excitation(1) == doctest::Approx(1.0));

  const DiagonalGenerator grad = gradient_generator(ChainGeometry(3, 1.0), params);
  // all-zeros bitstring carries the total weight sum
  CHECK(grad.eigenvalue("000") == doctest::Approx(grad.site_weights.sum()));
  CHECK(grad.eigenvalue("001") == doctest::Approx(0.0 + 1.0 - 2.0));
  CHECK_THROWS_AS(grad.eigenvalue("00"), std::invalid_argument);
}
