#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bolab/experiments.hpp"
#include "bolab/littlewood_paley.hpp"

using namespace bolab;

namespace {

const double kPi = std::numbers::pi;

}  // namespace

TEST_SUITE("littlewood_paley") {
  TEST_CASE("cutoff profile plateau and support") {
    CHECK(cutoff_profile(0.0) == 1.0);
    CHECK(cutoff_profile(1.25) == 1.0);
    CHECK(cutoff_profile(1.6) == 0.0);
    CHECK(cutoff_profile(-1.25) == 1.0);
    double prev = 1.0;
    for (double x = 1.25; x <= 1.6; x += 0.01) {
      CHECK(cutoff_profile(x) <= prev);
      prev = cutoff_profile(x);
    }
  }

  TEST_CASE("band weights from the spec") {
    CHECK(chi(2, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(chi(2, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(chi(4, 2.0) == 0.0);
    CHECK_FALSE(in_band_support(4, 2.4));
    CHECK(in_band_support(4, 2.5));
  }

  TEST_CASE("partition of unity") {
    for (double xi = 0.0; xi <= 1.25 * 1024.0; xi += 0.37) {
      double sum = 0.0;
      for (long k = 1; k <= 1024; k *= 2) sum += chi(k, xi);
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }

  TEST_CASE("P_2 of cos(3x) sits in the transition zone") {
    // 3/2 lies inside (5/4, 8/5), so chi_1(3/2) is strictly between 0 and 1.
    const Grid g(64, 2.0 * kPi);
    const auto f = SpectralField::from_function(g, [](double x) { return std::cos(3.0 * x); });
    const double w = cutoff_profile(1.5);
    CHECK(w > 0.0);
    CHECK(w < 1.0);
    CHECK((project_band(f, 2) - f * w).max_abs() < 1e-15);
  }

  TEST_CASE("low projection and reconstruction") {
    const Grid g(128, 2.0 * kPi);
    const auto f = random_smooth_field(g, 5, 0.0, 1.0, 3);
    CHECK((project_low(f, 4) - f).max_abs() < 1e-15);
    const auto u = random_smooth_field(g, 42, 0.0, 1.0, 4);
    SpectralField sum = SpectralField::zero(g);
    for (long k : dyadic_bands(g)) sum = sum + project_band(u, k);
    CHECK((sum - u).max_abs() < 1e-12);
    CHECK((project_low(u, 8) + project_high(u, 8) - u).max_abs() < 1e-15);
  }

  TEST_CASE("almost orthogonality and contraction") {
    const Grid g(256, 2.0 * kPi);
    const auto u = random_smooth_field(g, 80, 0.0, 1.0, 8);
    for (long k = 1; k <= 16; k *= 2) {
      CHECK(project_band(project_band(u, k), 4 * k).max_abs() < 1e-15);
      CHECK(project_band(u, k).l2_norm() <= u.l2_norm());
    }
  }

  TEST_CASE("Bernstein constant is uniform in K") {
    const Grid g(1024, 2.0 * kPi);
    double c_max = 0.0, c_min = 1e300;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto u = random_smooth_field(g, 300, 0.0, 1.0, seed);
      for (long k = 2; k <= 128; k *= 2) {
        const auto p = project_band(u, k);
        const double c = p.max_abs() / (std::sqrt(static_cast<double>(k)) * p.l2_norm());
        c_max = std::max(c_max, c);
        c_min = std::min(c_min, c);
      }
    }
    CHECK(c_max < 2.0);
    CHECK(c_max / c_min < 10.0);
  }

  TEST_CASE("Sobolev and Besov norms") {
    const Grid g(64, 2.0 * kPi);
    CHECK(sobolev_norm(SpectralField::zero(g), 1.5).value == 0.0);
    CHECK(besov_sup_norm(SpectralField::zero(g), 1.5).value == 0.0);
    const auto f = SpectralField::from_function(g, [](double x) { return std::cos(2.0 * x); });
    for (double s : {-0.5, 0.0, 0.6, 2.0}) {
      CHECK(sobolev_norm(f, s).value == doctest::Approx(std::pow(2.0, s) * f.l2_norm()).epsilon(1e-13));
    }
    const auto u = random_smooth_field(g, 20, 1.0, 1.0, 2);
    CHECK(sobolev_norm(u, 0.5).value <= sobolev_norm(u, 1.0).value);
    const auto rep = sobolev_norm(u, 1.0);
    CHECK(rep.aggregate() == doctest::Approx(rep.value).epsilon(1e-14));
    CHECK(rep.to_csv_rows().find("1,") != std::string::npos);
    CHECK(NormReport::csv_header() == "kind,param,K,contribution,total\n");
  }

  TEST_CASE("E^s over time") {
    const Grid g(128, 2.0 * kPi);
    const auto u = random_smooth_field(g, 30, 1.0, 1.0, 6);
    std::vector<SpectralField> constant = {u, u, u};
    CHECK(sup_time_norm(constant, 1.0).value == doctest::Approx(sobolev_norm(u, 1.0).value).epsilon(1e-14));
    std::vector<SpectralField> free;
    for (int n = 0; n < 5; ++n) free.push_back(free_propagator(u, 0.1 * n));
    CHECK(std::abs(sup_time_norm(free, 0.7).value - sobolev_norm(u, 0.7).value) < 1e-10);
    const auto v = u * 2.0;
    std::vector<SpectralField> two = {u, v};
    CHECK(sup_time_norm(two, 0.5).value >= sobolev_norm(v, 0.5).value - 1e-14);
    CHECK_THROWS_AS(sup_time_norm(std::vector<SpectralField>{}, 1.0), ValidationError);
  }

  TEST_CASE("modulation norm") {
    const Grid g(32, 2.0 * kPi);
    const double dt = 2.0 * kPi / 64.0;
    const std::size_t nt = 64;
    // Free wave cos(2x - omega(2) t) solves the linear flow.
    std::vector<SpectralField> fields;
    for (std::size_t n = 0; n < nt; ++n) {
      const double t = dt * static_cast<double>(n);
      fields.push_back(SpectralField::from_function(g, [&](double x) { return std::cos(2.0 * x - 4.0 * t); }));
    }
    const auto rep = modulation_norm_of_trajectory(fields, dt, 2);
    double l2 = 0.0;
    for (const auto& f : fields) l2 += f.l2_norm() * f.l2_norm() * dt;
    l2 = std::sqrt(l2);
    CHECK(rep.value == doctest::Approx(l2).epsilon(1e-10));
    CHECK(rep.bands.front().band == 1);

    std::vector<SpectralField> doubled;
    for (const auto& f : fields) doubled.push_back(f * 2.0);
    CHECK(modulation_norm_of_trajectory(doubled, dt, 2).value == doctest::Approx(2.0 * rep.value).epsilon(1e-12));
    std::vector<SpectralField> zero(nt, SpectralField::zero(g));
    CHECK(modulation_norm_of_trajectory(zero, dt, 2).value == 0.0);
  }
}
