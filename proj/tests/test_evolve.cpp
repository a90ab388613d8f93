#include <cmath>

#include "doctest.h"
#include "fkink/evolve.hpp"
#include "fkink/kink.hpp"
#include "fkink/spectrum.hpp"

using namespace fk;

namespace {

const KinkProfile& kink15() {
  static const KinkProfile p = continue_in_alpha(Grid(50.0, 1024), 2.0, 1.5, 0.1).back();
  return p;
}

}  // namespace

TEST_CASE("equilibria are fixed points") {
  const Grid g(20.0, 256);
  const RealField one = RealField::sample(g, [](double) { return 1.0; });
  CHECK((step(one, 0.1, 1.5, 0) - one).max_abs() < 1e-14);
}

TEST_CASE("kink drift is bounded by its residual") {
  const KinkProfile& p = kink15();
  const double dt = 0.01;
  const RealField next = step(p.correction, dt, 1.5, 1);
  CHECK(norm(next - p.correction) <= dt * p.residual_norm + 10 * dt * dt * p.residual_norm + 1e-14);
}

TEST_CASE("parity mirror") {
  const KinkProfile& p = kink15();
  const RealField w = p.correction + perturbation(p.grid, PerturbationKind::random, 0.05, 4);
  const RealField a = step(w, 0.05, 1.5, 1);
  const RealField b = step(-1.0 * w, 0.05, 1.5, -1);
  CHECK((a + b).max_abs() < 1e-13);
}

TEST_CASE("energy") {
  const KinkProfile p = solve_kink(Grid(50.0, 2048), 2.0);
  CHECK(energy(p.correction, 2.0, 1) == doctest::Approx(2 * std::sqrt(2.0) / 3).epsilon(1e-12));
  CHECK(background_energy(2.0) == doctest::Approx(std::sqrt(2.0) / 3).epsilon(1e-12));
  const Grid g(20.0, 256);
  CHECK(energy(RealField::sample(g, [](double) { return 1.0; }), 1.5, 0) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("translation and decomposition") {
  const KinkProfile& p = kink15();
  SUBCASE("pure translate") {
    const Decomposition d = decompose(translate(p, 0.3), p, 0.2);
    CHECK(d.sigma == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(norm(d.v) <= 1e-8);
    CHECK(d.orthogonality <= 1e-10);
  }
  SUBCASE("identity") {
    const Decomposition d = decompose(p.correction, p);
    CHECK(std::abs(d.sigma) <= 1e-14);
    CHECK(norm(d.v) <= 1e-12);
  }
  SUBCASE("odd perturbation leaves the shift at zero") {
    const Decomposition d = decompose(p.correction + perturbation(p.grid, PerturbationKind::odd, 0.01), p);
    CHECK(std::abs(d.sigma) <= 1e-9);
  }
  SUBCASE("shifted frame") {
    const RealField u = translate(p, 0.2) + perturbation(p.grid, PerturbationKind::even, 0.01);
    const Decomposition d = decompose(u, p, 0.2, Frame::shifted);
    CHECK(std::abs(inner(d.v, shift(p.dphi, d.sigma))) <= 1e-10);
  }
  SUBCASE("loss of decomposition") {
    CHECK_THROWS_AS(decompose(p.correction + perturbation(p.grid, PerturbationKind::even, 5.0), p),
                    DecompositionError);
  }
}

TEST_CASE("perturbations") {
  const Grid g(20.0, 256);
  CHECK(odd_defect(perturbation(g, PerturbationKind::odd, 1.0)) < 1e-14);
  CHECK(even_defect(perturbation(g, PerturbationKind::even, 1.0)) < 1e-14);
  CHECK(perturbation(g, PerturbationKind::odd, 0.05).max_abs() == doctest::Approx(0.05).epsilon(1e-3));
  const RealField r1 = perturbation(g, PerturbationKind::random, 1.0, 7);
  const RealField r2 = perturbation(g, PerturbationKind::random, 1.0, 7);
  const RealField r3 = perturbation(g, PerturbationKind::random, 1.0, 8);
  CHECK((r1 - r2).max_abs() == 0.0);
  CHECK((r1 - r3).max_abs() > 0.0);
  CHECK(parse_perturbation("even") == PerturbationKind::even);
  CHECK(to_string(PerturbationKind::random) == "random");
  CHECK_THROWS_AS(parse_perturbation("sideways"), std::invalid_argument);
}

TEST_CASE("line fit") {
  const LineFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.points == 4);
}

TEST_CASE("odd perturbation decays at the odd gap") {
  const KinkProfile& p = kink15();
  const EvolutionTrace tr = run(p.correction + perturbation(p.grid, PerturbationKind::odd, 0.05), p, 8.0, 0.005);
  const SpectrumReport r = low_spectrum(assemble(p), 3);
  CHECK(tr.max_energy_increase <= kEnergyTolerance);
  for (std::size_t i = 1; i < tr.energies.size(); ++i) CHECK(tr.energies[i] <= tr.energies[i - 1] + kEnergyTolerance);
  CHECK(tr.decay_fit.r2 >= 0.99);
  CHECK(tr.kappa_fit == doctest::Approx(r.odd_eigenvalues[0]).epsilon(0.1));
  for (double s : tr.sigma) CHECK(std::abs(s) <= 1e-9);
  CHECK(tr.times.size() == 17);
}

TEST_CASE("even perturbation: shift converges") {
  const KinkProfile& p = kink15();
  const RealField w0 = p.correction + perturbation(p.grid, PerturbationKind::even, 0.05);
  RunOptions o;
  o.frame = Frame::shifted;
  o.scheme = Scheme::linearly_implicit;
  const EvolutionTrace tr = run(w0, p, 10.0, 0.005, o);
  CHECK(tr.max_energy_increase <= kEnergyTolerance);
  CHECK(std::abs(tr.sigma.back() - tr.sigma[tr.sigma.size() - 2]) < 1e-8);
  CHECK(tr.shift_rate >= 1.5 * tr.kappa_fit);
}

TEST_CASE("evolve contracts") {
  const Grid g(20.0, 64);
  CHECK_THROWS_AS(step(RealField(g), 0.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(step(RealField(g), 0.5, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(step(RealField(g), 0.1, 1.5, 2), std::invalid_argument);
  const KinkProfile& p = kink15();
  CHECK_THROWS_AS(run(p.correction, p, -1.0, 0.01), std::invalid_argument);
}
