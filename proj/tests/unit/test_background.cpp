#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "bolab/background.hpp"
#include "bolab/errors.hpp"
#include "bolab/experiments.hpp"
#include "bolab/random.hpp"
#include "bolab/solver.hpp"

using namespace bolab;

namespace {

const double kPi = std::numbers::pi;

}  // namespace

TEST_SUITE("background") {
  TEST_CASE("bore profile") {
    const Grid g(4096, 320.0);
    const auto b = BackgroundSpec::bore(g, {-1.0, 1.0, 1.0});
    const auto s = b.initial().samples();
    CHECK(std::abs(s[g.size() / 2]) < 1e-14);
    // Limits C- left of centre and C+ right of centre, away from the seam.
    CHECK(std::abs(s[g.size() / 4] + 1.0) < 1e-12);
    CHECK(std::abs(s[3 * g.size() / 4] - 1.0) < 1e-12);
    CHECK(b.sup_norm() <= 1.0 + 1e-12);
    CHECK_FALSE(b.time_dependent());

    const auto flat = BackgroundSpec::bore(g, {0.3, 0.3, 1.0});
    CHECK((flat.initial() - SpectralField::from_function(g, [](double) { return 0.3; })).max_abs() <
          1e-14);
  }

  TEST_CASE("bore rejects a box too small for its steepness") {
    CHECK_THROWS_AS(BackgroundSpec::bore(Grid(256, 40.0), {-1.0, 1.0, 0.5}), ValidationError);
    CHECK_THROWS_AS(BackgroundSpec::bore(Grid(256, 320.0), {-1.0, 1.0, 0.0}), ValidationError);
  }

  TEST_CASE("readout window") {
    const auto [lo, hi] = readout_window(Grid(64, 320.0));
    CHECK(lo == 40.0);
    CHECK(hi == 280.0);
  }

  TEST_CASE("forcing of static backgrounds") {
    const Grid g(256, 2.0 * kPi);
    const auto c = BackgroundSpec::periodic_static(g, 0.7, {});
    CHECK(forcing_from_background(c, 0.0).max_abs() < 1e-14);

    const auto b = BackgroundSpec::periodic_static(g, 0.2, {{2, 0.3, 0.1}, {5, 0.0, 0.05}});
    const auto f = forcing_from_background(b, 0.0);
    const auto& b0 = b.initial();
    const auto expect = derivative(hilbert_transform(b0), 2) + derivative(dealiased_product(b0, b0));
    CHECK((f - expect).max_abs() < 1e-13);
    CHECK((forcing_from_background(b, 3.0) - f).max_abs() == 0.0);
  }

  TEST_CASE("forcing is quadratic in b") {
    const Grid g(128, 2.0 * kPi);
    const auto b = BackgroundSpec::periodic_static(g, 0.0, {{1, 0.4, 0.0}, {3, 0.0, 0.2}});
    const double lambda = 1.7;
    const auto lb = BackgroundSpec::custom(b.initial() * lambda);
    const auto lhs = forcing_from_background(lb, 0.0) - forcing_from_background(b, 0.0) * lambda;
    const auto rhs = derivative(dealiased_product(b.initial(), b.initial())) * (lambda * lambda - lambda);
    CHECK((lhs - rhs).max_abs() < 1e-13);
  }

  TEST_CASE("evolving background solves the torus flow") {
    const Grid g(256, 32.0);
    const auto b0 = BackgroundSpec::periodic_static(g, 0.0, {{4, 0.3, 0.0}}).initial();
    const auto coarse = evolve_background(b0, 0.5, 0.01);
    const auto fine = evolve_background(b0, 0.5, 0.005);
    CHECK(coarse.time_dependent());
    CHECK(coarse.final_time() == doctest::Approx(0.5));
    double rc = 0.0, rf = 0.0;
    for (int i = 0; i <= 50; ++i) {
      rc = std::max(rc, forcing_from_background(coarse, 0.01 * i).l2_norm());
      rf = std::max(rf, forcing_from_background(fine, 0.01 * i).l2_norm());
    }
    CHECK(rc < 1e-4);
    CHECK(rc / rf > 8.0);
    // Interpolation between lattice times agrees with the finer trajectory.
    CHECK((coarse.at(0.255) - fine.at(0.255)).l2_norm() < 1e-6);
    CHECK_THROWS_AS(coarse.at(0.6), ValidationError);
  }

  TEST_CASE("evolving background is exact for linear flow") {
    // Linear regime: the quadratic term is ~1e-9 relative to the linear one.
    const Grid g(64, 2.0 * kPi);
    const auto b0 = BackgroundSpec::periodic_static(g, 0.0, {{3, 1e-9, 0.0}}).initial();
    const auto b = evolve_background(b0, 0.2, 0.02);
    const auto bt = b.time_derivative(0.1);
    const auto expect = derivative(hilbert_transform(b.at(0.1)), 2) * -1.0;
    CHECK((bt - expect).max_abs() < 1e-8 * expect.max_abs());
  }

  TEST_CASE("Zhidkov background") {
    const Grid g(512, 2.0 * kPi);
    const auto a = BackgroundSpec::zhidkov(g, 1.0, 0.1, 2.0, 64, 9);
    const auto b = BackgroundSpec::zhidkov(g, 1.0, 0.1, 2.0, 64, 9);
    CHECK((a.initial() - b.initial()).max_abs() == 0.0);
    CHECK(a.initial().coeffs()[0].real() == doctest::Approx(2.0));
    CHECK(std::abs(a.initial().coeffs()[g.index_of_mode(8)]) ==
          doctest::Approx(0.1 * std::pow(8.0, -1.5)));
    CHECK_THROWS_AS(BackgroundSpec::zhidkov(g, 1.0, 0.1, 0.0, 300, 1), ValidationError);
  }

  TEST_CASE("Matsuno topography") {
    const Grid g(512, 40.0);
    const auto f = matsuno_topography(g, 20.0, 4.0, 0.05);
    CHECK(f.kind() == ForcingKind::kStatic);
    CHECK(f.at(0.0).integral() == doctest::Approx(0.05 * 4.0 * kBumpMass).epsilon(1e-8));
    CHECK(matsuno_topography(g, 20.0, 4.0, 0.0).at(0.0).max_abs() == 0.0);
    CHECK_THROWS_AS(matsuno_topography(g, 2.0, 4.0, 0.05), ValidationError);
    CHECK_THROWS_AS(matsuno_topography(g, 20.0, 12.0, 0.05), ValidationError);
  }

  TEST_CASE("regularity proxy") {
    const Grid g(1024, 2.0 * kPi);
    const auto bump_field = SpectralField::from_function(g, [](double x) { return bump((x - kPi) / 2.0); });
    const auto smooth = regularity_report(bump_field, 3.0 + kDefaultRegularityEpsilon, RegularityNorm::kSup);
    CHECK(smooth.proxy_satisfied);
    const auto cosine = regularity_report(
        SpectralField::from_function(g, [](double x) { return std::cos(x); }), 3.1, RegularityNorm::kSup);
    CHECK(cosine.argmax_band == 1);
    for (const auto& band : cosine.profile.bands) {
      // Roundoff in band j is amplified by 2^(s j); only the low bands are clean.
      if (band.band > 2 && band.band <= 5) CHECK(band.contribution < 1e-9);
    }
    std::vector<double> noise(g.size());
    Rng rng(3);
    for (double& v : noise) v = rng.uniform(-1.0, 1.0);
    const auto rough = regularity_report(SpectralField(g, noise), 3.1, RegularityNorm::kSup);
    CHECK_FALSE(rough.proxy_satisfied);
  }
}
