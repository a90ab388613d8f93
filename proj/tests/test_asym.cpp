#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fkink/asym.hpp"

using namespace fk;
using std::numbers::pi;

TEST_CASE("gamma function values") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-13));
  // mpmath, 30 digits
  CHECK(gamma_fn(0.25) == doctest::Approx(3.6256099082219083).epsilon(1e-12));
  CHECK(gamma_fn(-0.5) == doctest::Approx(-2 * std::sqrt(pi)).epsilon(1e-12));
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-2.0), std::domain_error);
}

TEST_CASE("gamma reflection and recurrence") {
  for (double z = 0.05; z < 1.0; z += 0.05)
    CHECK(gamma_fn(z) * gamma_fn(1 - z) == doctest::Approx(pi / std::sin(pi * z)).epsilon(1e-10));
  for (double z = 0.1; z <= 10.0; z += 0.1)
    CHECK(gamma_fn(z + 1) == doctest::Approx(z * gamma_fn(z)).epsilon(1e-12));
}

TEST_CASE("tail law prefactors") {
  const TailLaw l = tail_law(1.5);
  CHECK(l.regime == Regime::sub_laplacian);
  CHECK(l.derivative_prefactor == doctest::Approx(0.75 / std::sqrt(2 * pi)).epsilon(1e-12));
  CHECK(l.profile_prefactor == doctest::Approx(0.19947114020071636).epsilon(1e-12));
  const double a = 1.5;
  const double closed = std::pow(2.0, a - 2) * (a - 1) * gamma_fn((a - 1) / 2) /
                        (std::sqrt(pi) * gamma_fn((2 - a) / 2));
  CHECK(l.profile_prefactor == doctest::Approx(closed).epsilon(1e-12));
  CHECK(tail_law(2.5).derivative_prefactor < 0.0);
  CHECK(tail_law(2.5).regime == Regime::super_laplacian);
}

TEST_CASE("tail law sign pattern and consistency") {
  for (int i = 1; i <= 9; ++i) CHECK(tail_law(1.0 + 0.1 * i).derivative_prefactor > 0.0);
  for (int i = 1; i <= 19; ++i) CHECK(tail_law(2.0 + 0.1 * i).derivative_prefactor < 0.0);
  for (double a : {1.1, 1.5, 1.9, 2.1, 2.5, 3.3, 3.9}) {
    const TailLaw l = tail_law(a);
    CHECK(l.profile_prefactor * a == doctest::Approx(l.derivative_prefactor).epsilon(1e-12));
  }
}

TEST_CASE("tail law domain") {
  CHECK_THROWS_AS(tail_law(1.0), std::invalid_argument);
  CHECK_THROWS_AS(tail_law(2.0), std::invalid_argument);
  CHECK_THROWS_AS(tail_law(2.0 + 1e-7), std::invalid_argument);
  CHECK_THROWS_AS(tail_law(4.0), std::invalid_argument);
  CHECK_THROWS_AS(tail_law(4.5), std::invalid_argument);
  CHECK_NOTHROW(tail_law(2.0 + 1e-5));
}

TEST_CASE("exact alpha = 2 kink") {
  const Grid g(20.0, 400);
  const RealField w = exact_kink_alpha2(g);
  CHECK(w[g.center()] == 0.0);
  for (int j = 0; j < g.size(); ++j)
    if (std::abs(g.node(j) - std::sqrt(2.0)) < 1e-12) CHECK(w[j] == doctest::Approx(0.7615941559557649));
  CHECK(w[g.size() - 1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact kernels") {
  CHECK(exact_kernel(2, 0.0) == doctest::Approx(1 / (2 * std::sqrt(2.0))).epsilon(1e-14));
  // mpmath: exp(-sqrt 2) / (2 sqrt 2)
  CHECK(exact_kernel(2, 1.0) == doctest::Approx(0.08595474576918095).epsilon(1e-13));
  CHECK(exact_kernel(4, 0.0) == doctest::Approx(0.21022410381342863).epsilon(1e-13));
  CHECK(exact_kernel(2, -1.0) == exact_kernel(2, 1.0));
  CHECK(exact_kernel(4, 2.8020032520669158) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(exact_kernel(3, 1.0), std::invalid_argument);
}

TEST_CASE("kernel asymptote") {
  CHECK(kernel_asymptote(1.5, 10.0) ==
        doctest::Approx(0.29920671030107454 / 4 * std::pow(10.0, -2.5)).epsilon(1e-12));
  CHECK(kernel_asymptote(2.5, 3.0) < 0.0);
  CHECK(kernel_asymptote(1.9, 50.0) > 0.0);
  CHECK(kernel_asymptote(2.1, 50.0) < 0.0);
  CHECK_THROWS_AS(kernel_asymptote(1.5, 0.5), std::invalid_argument);
}
