#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fkink/asym.hpp"
#include "fkink/green.hpp"
#include "fkink/quadrature.hpp"

using namespace fk;

TEST_CASE("half-line quadrature") {
  const double v = integrate_half_line_real([](double r) { return 1.0 / (1.0 + r * r); });
  CHECK(v == doctest::Approx(M_PI / 2).epsilon(1e-13));
  const double g = integrate_half_line_real([](double r) { return std::exp(-r) / std::sqrt(r); });
  CHECK(g == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("quadrature kernel against closed forms") {
  for (int a : {2, 4}) {
    double err = 0.0;
    for (double x = 0.0; x <= 10.0; x += 0.05)
      err = std::max(err, std::abs(kernel_value({double(a)}, x) - exact_kernel(a, x)));
    CHECK(err <= 1e-6);
  }
}

TEST_CASE("quadrature kernel against independent values") {
  // mpmath quadosc of (1/pi) int_0^inf cos(kx) / (2 + k^alpha) dk
  CHECK(kernel_value({1.5}, 0.0) == doctest::Approx(0.61099094977671323).epsilon(1e-10));
  CHECK(kernel_value({1.5}, 1.0) == doctest::Approx(0.066617800123561792).epsilon(1e-10));
  CHECK(kernel_value({1.5}, 10.0) == doctest::Approx(2.624928046388337e-4).epsilon(1e-9));
  CHECK(kernel_value({1.5}, 25.0) == doctest::Approx(2.4562697e-5).epsilon(1e-7));
  CHECK(kernel_value({2.5}, 0.0) == doctest::Approx(0.27748254455225129).epsilon(1e-10));
  CHECK(kernel_value({2.5}, 1.0) == doctest::Approx(0.10198634864581150).epsilon(1e-10));
  CHECK(kernel_value({2.5}, 25.0) == doctest::Approx(-2.4134685e-6).epsilon(1e-7));
  CHECK(kernel_value({3.5}, 2.0) == doctest::Approx(0.030618026303350306).epsilon(1e-10));
}

TEST_CASE("zeroth moment") {
  CHECK(kernel_moment0(kernel_table({2.0}, 40.0)) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(kernel_moment0(kernel_table({4.0}, 40.0)) == doctest::Approx(0.5).epsilon(1e-10));
  const KernelTable t = kernel_table({1.5}, 200.0);
  CHECK(std::abs(kernel_moment0(t) - 0.5) <= 1e-6);
  CHECK(kernel_tail_bound(t) <= 1e-7);
  CHECK(std::abs(kernel_moment0(kernel_table({2.5}, 60.0)) - 0.5) <= 1e-6);
  CHECK(std::abs(kernel_moment0(kernel_table({3.0, 1.0}, 60.0)) - 1.0) <= 1e-6);
  CHECK_THROWS_AS(kernel_moment0(kernel_table({1.5}, 100.0)), std::invalid_argument);
}

TEST_CASE("positivity for sub-Laplacian orders") {
  for (double c : {0.0, 0.5}) {
    const KernelTable t = kernel_table({1.5, 2.0, c, c != 0.0}, 50.0);
    CHECK(*std::min_element(t.value.begin(), t.value.end()) >= -1e-10);
  }
  const SignReport s = kernel_sign_scan(kernel_table({1.5}, 50.0));
  CHECK(s.crossings.empty());
  CHECK(s.k0 > 0.0);
}

TEST_CASE("sign changes for super-Laplacian orders") {
  const SignReport s = kernel_sign_scan(kernel_table({2.5}, 50.0));
  CHECK(s.k0 > 0.0);
  REQUIRE(s.crossings.size() == 1);
  CHECK(s.crossings[0] == doctest::Approx(3.45796).epsilon(1e-5));
  CHECK(s.negative_beyond_last);
  const SignReport s4 = kernel_sign_scan(kernel_table({4.0}, 20.0));
  REQUIRE(s4.crossings.size() >= 3);
  const double q = std::pow(2.0, 0.25);
  for (std::size_t n = 0; n < 3; ++n)
    CHECK(s4.crossings[n] == doctest::Approx(q * ((n + 1) * M_PI - M_PI / 4)).epsilon(1e-8));
}

TEST_CASE("asymptote handoff") {
  const KernelTable t = kernel_table({1.5}, 60.0);
  CHECK(t.has_asymptote());
  const auto at = [&](double x) {
    const auto it = std::min_element(t.x.begin(), t.x.end(),
                                      [&](double a, double b) { return std::abs(a - x) < std::abs(b - x); });
    return static_cast<std::size_t>(it - t.x.begin());
  };
  const std::size_t i50 = at(50.0);
  CHECK(std::abs(t.rel_err[i50]) <= 0.02);
  CHECK(std::abs(kernel_value({2.5}, 25.0) / kernel_asymptote(2.5, 25.0) - 1.0) <= 0.02);
  CHECK(std::abs(kernel_value({3.5}, 25.0) / kernel_asymptote(3.5, 25.0) - 1.0) <= 0.02);
  CHECK_FALSE(kernel_table({2.0}, 20.0).has_asymptote());
  KernelTableOptions far;
  far.far_field = true;
  const KernelTable ff = kernel_table({1.5}, 400.0, far);
  CHECK(ff.value.back() == doctest::Approx(kernel_asymptote(1.5, ff.x.back())));
  CHECK_THROWS_AS(kernel_table({1.5}, 400.0), std::invalid_argument);
  CHECK_THROWS_AS(kernel_table({2.0}, 400.0, far), std::invalid_argument);
}

TEST_CASE("speed perturbation decays like x^-4") {
  const KernelSpec plain{1.5};
  const KernelSpec moving{1.5, 2.0, 0.5, true};
  const double d30 = std::abs(kernel_value(plain, 30.0) - kernel_value(moving, 30.0));
  const double d60 = std::abs(kernel_value(plain, 60.0) - kernel_value(moving, 60.0));
  CHECK(std::log(d30 / d60) / std::log(2.0) >= 4.0 - 0.1);
}

TEST_CASE("convolution inverts the symbol") {
  const KernelSpec spec{1.5};
  // K * f decays like |x|^{-1-alpha}; the periodic symbol needs a wide box
  const KernelTable t = kernel_table(spec, 250.0);
  const Grid g(200.0, 4096);
  auto f = [](double x) { return std::exp(-x * x); };
  const RealField u = convolve(t, g, f);
  const RealField back = apply_symbol(u, RieszSymbol{1.5, 2.0});
  double err = 0.0;
  for (int j = 0; j < g.size(); ++j)
    if (std::abs(g.node(j)) <= 5.0) err = std::max(err, std::abs(back[j] - f(g.node(j))));
  CHECK(err <= 1e-6);
}

TEST_CASE("kernel contracts") {
  CHECK_THROWS_AS(kernel_value({1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(kernel_value({4.5}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(kernel_value({2.0 + 1e-8}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(kernel_value({1.5, 0.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(kernel_value({1.5, 2.0, 1.0, true}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(kernel_table({1.5}, 0.5), std::invalid_argument);
}
