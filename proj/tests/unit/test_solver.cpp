#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bolab/errors.hpp"
#include "bolab/experiments.hpp"
#include "bolab/solver.hpp"

using namespace bolab;

namespace {

const double kPi = std::numbers::pi;

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("config validation") {
    const Grid g(64, 2.0 * kPi);
    CHECK_THROWS_AS((SolverConfig{g, -1.0, 1.0}.validate()), ValidationError);
    CHECK_THROWS_AS((SolverConfig{g, 0.1, 0.0}.validate()), ValidationError);
    SolverConfig bad{g, 0.1, 1.0};
    bad.snapshot_stride = 0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
  }

  TEST_CASE("tendency examples") {
    const Grid g(16, 2.0 * kPi);
    const auto zero = SpectralField::zero(g);
    CHECK(rhs_forced(zero, zero, zero).max_abs() == 0.0);
    const auto f = SpectralField::from_function(g, [](double x) { return std::sin(2.0 * x); });
    CHECK((rhs_forced(zero, zero, f) + f).max_abs() < 1e-15);

    // u = a cos x: -H u_xx = -a sin x... H cos = sin, u_xx = -a cos, so -H u_xx = a sin x.
    // -(u^2)_x = a^2 sin 2x.
    const double a = 0.3;
    const auto u = SpectralField::from_function(g, [&](double x) { return a * std::cos(x); });
    const auto expect = SpectralField::from_function(
        g, [&](double x) { return a * std::sin(x) + a * a * std::sin(2.0 * x); });
    CHECK((rhs_forced(u, zero, zero) - expect).max_abs() < 1e-14);
  }

  TEST_CASE("zero data stays zero") {
    const Grid g(64, 2.0 * kPi);
    const auto traj = solve(SpectralField::zero(g), SolverConfig{g, 0.01, 0.1});
    for (const auto& f : traj.fields) CHECK(f.max_abs() == 0.0);
    CHECK(traj.times.size() == 11);
  }

  TEST_CASE("small data follows the free propagator") {
    const Grid g(64, 2.0 * kPi);
    for (double a : {1e-3, 1e-4}) {
      const auto u0 = SpectralField::from_function(g, [&](double x) { return a * std::cos(2.0 * x); });
      const auto traj = solve(u0, SolverConfig{g, 0.01, 0.5});
      const double err = (traj.final_field() - free_propagator(u0, 0.5)).l2_norm();
      CHECK(err < 10.0 * a * a);
    }
  }

  TEST_CASE("Hamiltonian of cos x") {
    const Grid g(64, 2.0 * kPi);
    CHECK(hamiltonian(SpectralField::zero(g)) == 0.0);
    const auto c = SpectralField::from_function(g, [](double x) { return std::cos(x); });
    CHECK(hamiltonian(c) == doctest::Approx(kPi / 2.0).epsilon(1e-14));
  }

  TEST_CASE("conservation for random smooth data") {
    const Grid g(256, 2.0 * kPi);
    const auto u0 = random_smooth_field(g, 12, 1.5, 1.0, 17);
    SolverConfig cfg{g, 1e-3, 0.5};
    cfg.snapshot_stride = 100;
    const auto traj = solve(u0, cfg);
    const auto& d0 = traj.diagnostics.front();
    const auto& d1 = traj.diagnostics.back();
    CHECK(std::abs(d1.mass - d0.mass) < 1e-12);
    CHECK(std::abs(d1.momentum - d0.momentum) / d0.momentum < 1e-8);
    CHECK(std::abs(d1.hamiltonian - d0.hamiltonian) / std::abs(d0.hamiltonian) < 1e-8);
  }

  TEST_CASE("travelling wave translates without change of shape") {
    const Grid g(1024, 16.0 * kPi);
    const double c = 1.0;
    const double speed = periodic_travelling_wave_speed(g.length(), c);
    const auto u0 = periodic_travelling_wave(g, c, 0.5 * g.length());
    CHECK(travelling_wave_residual(u0, speed) < 1e-8);
    const double t = 2.0;
    SolverConfig cfg{g, 1e-3, t};
    cfg.snapshot_stride = 2000;
    const auto traj = solve(u0, cfg);
    const auto expect = periodic_travelling_wave(g, c, 0.5 * g.length() + speed * t);
    CHECK((traj.final_field() - expect).l2_norm() / expect.l2_norm() < 1e-8);
  }

  TEST_CASE("the line-soliton candidate is not a discrete travelling wave") {
    // 4c/(1+c^2 x^2) has the wrong sign for this equation.
    const Grid g(1024, 16.0 * kPi);
    const double x0 = 0.5 * g.length();
    const auto cand = SpectralField::from_function(
        g, [&](double x) { return 4.0 / (1.0 + (x - x0) * (x - x0)); });
    CHECK(travelling_wave_residual(cand, 1.0) > 1e-2);
  }

  TEST_CASE("temporal self-convergence") {
    const Grid g(128, 2.0 * kPi);
    SolverConfig cfg{g, 0.01, 0.4};
    const auto smooth = temporal_self_convergence(random_smooth_field(g, 6, 2.0, 1.0, 2), cfg);
    INFO(smooth.reason);
    CHECK(smooth.valid);
    CHECK(smooth.order > 3.5);
    CHECK(smooth.order < 4.5);

    const auto tiny = SpectralField::from_function(g, [](double x) { return 1e-12 * std::cos(3.0 * x); });
    const auto lin = temporal_self_convergence(tiny, cfg);
    CHECK_FALSE(lin.valid);
    CHECK(lin.reason == "machine floor");

    SolverConfig rough{g, 0.05, 5.0};
    rough.cfl = 1e6;
    const auto big = random_smooth_field(g, 40, 0.0, 30.0, 4);
    const auto guard = temporal_self_convergence(big, rough);
    CHECK_FALSE(guard.valid);
  }

  TEST_CASE("CFL violation at t = 0 is a validation error") {
    const Grid g(128, 2.0 * kPi);
    const auto u0 = random_smooth_field(g, 10, 0.0, 50.0, 1);
    CHECK_THROWS_AS(solve(u0, SolverConfig{g, 0.5, 1.0}), ValidationError);
  }

  TEST_CASE("blow-up guard carries a snapshot") {
    const Grid g(64, 2.0 * kPi);
    const auto u0 = random_smooth_field(g, 20, 0.0, 100.0, 2);
    SolverConfig cfg{g, 0.05, 10.0};
    cfg.cfl = 1e9;
    cfg.dealias = false;
    try {
      solve(u0, cfg);
      FAIL("expected the guard to fire");
    } catch (const BlowUpError& e) {
      CHECK(e.time() >= 0.0);
      CHECK(e.snapshot().grid() == g);
    }
  }

  TEST_CASE("mid-run CFL halving keeps the snapshot lattice") {
    const Grid g(256, 2.0 * kPi);
    // Grows steep enough that the step must shrink after t = 0.
    const auto u0 = SpectralField::from_function(g, [](double x) { return 2.0 * std::cos(x); });
    // Admissible at t = 0 (limit 0.4 dx / 3 = 0.00327) but not once max|u| grows.
    SolverConfig cfg{g, 0.0032, 1.6};
    cfg.snapshot_stride = 10;
    cfg.cfl = 0.4;
    const auto traj = solve(u0, cfg);
    CHECK(traj.dt_schedule.size() > 1);
    CHECK(traj.times.size() == 51);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      CHECK(traj.times[i] == doctest::Approx(0.032 * static_cast<double>(i)).epsilon(1e-12));
    }
    CHECK(traj.dt_schedule.front().dt == 0.0032);
  }
}
