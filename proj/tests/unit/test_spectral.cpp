#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bolab/experiments.hpp"
#include "bolab/spectral.hpp"

using namespace bolab;

namespace {

const double kPi = std::numbers::pi;

double max_diff(const SpectralField& a, const SpectralField& b) { return (a - b).max_abs(); }

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("grid rejects non powers of two") {
    CHECK_THROWS(Grid(100, 1.0));
    CHECK_THROWS(Grid(64, -1.0));
    const Grid g(16, 2.0 * kPi);
    CHECK(g.mode(3) == 3);
    CHECK(g.mode(13) == -3);
    CHECK(g.index_of_mode(-3) == 13);
  }

  TEST_CASE("forward transform of a constant and of cos") {
    const Grid g(32, 10.0);
    const auto one = SpectralField::from_function(g, [](double) { return 1.0; });
    CHECK(std::abs(one.coeffs()[0] - Complex(1.0, 0.0)) < 1e-15);
    for (std::size_t j = 1; j < g.size(); ++j) CHECK(std::abs(one.coeffs()[j]) < 1e-15);

    const auto c3 = SpectralField::from_function(
        g, [&](double x) { return std::cos(2.0 * kPi * 3.0 * x / g.length()); });
    CHECK(std::abs(c3.coeffs()[g.index_of_mode(3)] - Complex(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(c3.coeffs()[g.index_of_mode(-3)] - Complex(0.5, 0.0)) < 1e-14);
  }

  TEST_CASE("round trip of a random field") {
    const Grid g(256, 7.0);
    const auto u = random_smooth_field(g, 80, 0.0, 3.0, 11);
    const auto back = inverse(g, forward(g, u.samples()));
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(back[j] - u.samples()[j]));
    CHECK(err < 1e-12);
  }

  TEST_CASE("Hilbert transform") {
    const Grid g(64, 5.0);
    const double k = 2.0 * kPi / g.length();
    const auto s = SpectralField::from_function(g, [&](double x) { return std::sin(k * x); });
    const auto c = SpectralField::from_function(g, [&](double x) { return std::cos(k * x); });
    CHECK(max_diff(hilbert_transform(s), c * -1.0) < 1e-14);
    const auto one = SpectralField::from_function(g, [](double) { return 2.5; });
    CHECK(hilbert_transform(one).max_abs() < 1e-15);
    const auto u = random_smooth_field(g, 20, 1.0, 1.0, 3);
    CHECK(max_diff(hilbert_transform(hilbert_transform(u)), u * -1.0) < 1e-14);
  }

  TEST_CASE("dispersion relation") {
    CHECK(omega(2.0) == 4.0);
    CHECK(omega(-3.0) == -9.0);
    CHECK(omega(0.0) == 0.0);
  }

  TEST_CASE("free propagator") {
    const Grid g(64, 2.0 * kPi);
    const auto u = random_smooth_field(g, 20, 1.0, 1.0, 5);
    CHECK(max_diff(free_propagator(u, 0.0), u) < 1e-15);
    CHECK(max_diff(free_propagator(free_propagator(u, 0.7), -0.7), u) < 1e-12);

    // xi = 1 rotates by exp(-i t) with modulus preserved.
    const auto c1 = SpectralField::from_function(g, [](double x) { return std::cos(x); });
    const double t = 0.9;
    const auto moved = free_propagator(c1, t);
    const Complex c = moved.coeffs()[1];
    CHECK(std::abs(std::abs(c) - 0.5) < 1e-15);
    CHECK(std::abs(std::arg(c) + t) < 1e-14);
  }

  TEST_CASE("dealiasing") {
    const Grid g(64, 2.0 * kPi);
    const auto low = random_smooth_field(g, 21, 0.0, 1.0, 9);
    CHECK(max_diff(dealias(low), low) < 1e-15);

    const Grid g8(16, 2.0 * kPi);
    const auto top = SpectralField::from_function(g8, [](double x) { return std::cos(7.0 * x); });
    CHECK(dealias(top).max_abs() < 1e-14);
  }

  TEST_CASE("dealiased product equals the retained mode convolution") {
    const Grid g(16, 2.0 * kPi);
    const auto a = dealias(random_smooth_field(g, 5, 0.0, 1.0, 1));
    const auto b = dealias(random_smooth_field(g, 5, 0.0, 1.0, 2));
    const auto p = dealiased_product(a, b);
    for (long k = -5; k <= 5; ++k) {
      Complex expect(0.0, 0.0);
      for (long m = -5; m <= 5; ++m) {
        const long n = k - m;
        if (std::abs(n) > 5) continue;
        expect += a.coeffs()[g.index_of_mode(m)] * b.coeffs()[g.index_of_mode(n)];
      }
      CHECK(std::abs(p.coeffs()[g.index_of_mode(k)] - expect) < 1e-15);
    }
  }
}
