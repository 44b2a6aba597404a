#include <doctest.h>

#include <array>
#include <cmath>

#include "bolab/dyadic_convolution.hpp"
#include "bolab/errors.hpp"

using namespace bolab;

namespace {

struct Point {
  long a, j;
  double v;
};

std::vector<Point> points(const ColumnField& f) {
  std::vector<Point> out;
  for (const auto& c : f.columns) {
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      if (c.values[i] != 0.0) out.push_back({c.a0 + static_cast<long>(i), c.j, c.values[i]});
    }
  }
  return out;
}

std::vector<LocalizedDensity> densities(const std::vector<ModulationRegion>& regions, double res,
                                        DensityStyle style) {
  const auto grid = SpaceTimeGrid::for_regions(regions, res);
  std::vector<LocalizedDensity> out;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    out.push_back(LocalizedDensity::generate(grid, regions[i], 100 + i, style));
  }
  return out;
}

}  // namespace

TEST_SUITE("convolution") {
  TEST_CASE("grid covers the requested regions") {
    const std::array<ModulationRegion, 2> regions = {ModulationRegion(4, 2), ModulationRegion(1, 8)};
    const auto g = SpaceTimeGrid::for_regions(regions, 8);
    CHECK(g.covers(regions[0]));
    CHECK(g.covers(regions[1]));
    CHECK(g.dtau == doctest::Approx(1.0 / 8.0));
    CHECK(g.dxi == doctest::Approx(std::min(1.0 / 8.0, 2.0) / 8.0));
    CHECK_FALSE(g.covers(ModulationRegion(1, 64)));
    CHECK_THROWS_AS(LocalizedDensity::generate(g, ModulationRegion(1, 64), 1, DensityStyle::kPlateau),
                    ValidationError);
  }

  TEST_CASE("densities: support, plateau, determinism") {
    const ModulationRegion r(1, 1);
    const std::array<ModulationRegion, 1> regions = {r};
    const auto g = SpaceTimeGrid::for_regions(regions, 4);
    const auto plateau = LocalizedDensity::generate(g, r, 1, DensityStyle::kPlateau);
    for (const auto& p : points(plateau.field())) {
      CHECK(p.v == 1.0);
      CHECK(r.contains(g.dtau * static_cast<double>(p.a), g.dxi * static_cast<double>(p.j)));
    }
    const auto a = LocalizedDensity::generate(g, r, 7, DensityStyle::kRandom);
    const auto b = LocalizedDensity::generate(g, r, 7, DensityStyle::kRandom);
    const auto pa = points(a.field()), pb = points(b.field());
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i].v == pb[i].v);
    for (const auto& p : pa) CHECK(p.v > 0.0);
  }

  TEST_CASE("convolution commutes bit-exactly and FFT matches direct") {
    const auto d = densities({ModulationRegion(2, 2), ModulationRegion(1, 4)}, 4, DensityStyle::kRandom);
    const double cell = d[0].grid().cell();
    const auto ab = convolve(d[0].field(), d[1].field(), cell);
    const auto ba = convolve(d[1].field(), d[0].field(), cell);
    const auto direct = convolve_direct(d[0].field(), d[1].field(), cell);
    const auto pab = points(ab), pba = points(ba);
    REQUIRE(pab.size() == pba.size());
    for (std::size_t i = 0; i < pab.size(); ++i) CHECK(pab[i].v == pba[i].v);
    double err = 0.0, peak = 0.0;
    for (const auto& p : points(direct)) {
      err = std::max(err, std::abs(ab.value_at(p.a, p.j) - p.v));
      peak = std::max(peak, p.v);
    }
    CHECK(err <= 1e-12 * peak);
  }

  TEST_CASE("pair estimate is homogeneous") {
    const auto d = densities({ModulationRegion(1, 1), ModulationRegion(1, 1)}, 8, DensityStyle::kPlateau);
    const auto base = pair_estimate(d[0], d[1]);
    CHECK(base.ratio > 0.0);
    CHECK(std::isfinite(base.ratio));
    const auto scaled = pair_estimate(d[0].scaled(3.5), d[1]);
    CHECK(scaled.ratio == doctest::Approx(base.ratio).epsilon(1e-12));
    CHECK_THROWS_AS(pair_estimate(d[0].zeroed(), d[1]), ValidationError);
  }

  TEST_CASE("triple vanishes exactly for the (8,8,4) profile") {
    const std::vector<ModulationRegion> regions = {ModulationRegion(1, 8), ModulationRegion(1, 8),
                                                   ModulationRegion(1, 4)};
    CHECK(vanishing_predicted(regions));
    const auto d = densities(regions, 4, DensityStyle::kRandom);
    const auto r = triple_at_origin(d[0], d[1], d[2]);
    CHECK(r.value == 0.0);
    const double cell = d[0].grid().cell();
    CHECK(triple_at(d[0].zeroed().field(), d[1].field(), d[2].field(), 0, 0, cell) == 0.0);
    CHECK_THROWS_AS(triple_at_origin(d[0].zeroed(), d[1], d[2]), ValidationError);
  }

  TEST_CASE("triple is positive when the modulation can absorb the resonance") {
    const std::vector<ModulationRegion> regions = {ModulationRegion(64, 4), ModulationRegion(64, 4),
                                                   ModulationRegion(64, 2)};
    CHECK_FALSE(vanishing_predicted(regions));
    const auto d = densities(regions, 2, DensityStyle::kPlateau);
    const auto r = triple_at_origin(d[0], d[1], d[2]);
    CHECK(r.value > 0.0);
    CHECK(r.ratio_general < 10.0);
  }

  TEST_CASE("quad matches brute-force summation") {
    const std::vector<ModulationRegion> regions(4, ModulationRegion(1, 1));
    const auto d = densities(regions, 4, DensityStyle::kPlateau);
    const double cell = d[0].grid().cell();
    const auto p1 = points(d[0].field()), p2 = points(d[1].field()), p3 = points(d[2].field());
    double brute = 0.0;
    for (const auto& x : p1) {
      for (const auto& y : p2) {
        for (const auto& z : p3) {
          brute += x.v * y.v * z.v * d[3].field().value_at(-x.a - y.a - z.a, -x.j - y.j - z.j);
        }
      }
    }
    brute *= cell * cell * cell;
    const auto q = quad_at_origin(d[0], d[1], d[2], d[3]);
    CHECK(brute > 0.0);
    CHECK(std::abs(q.value - brute) <= 1e-10 * brute);
    CHECK(std::isnan(q.ratio_improved));
  }

  TEST_CASE("bounded factor") {
    const std::vector<ModulationRegion> regions = {ModulationRegion(64, 4), ModulationRegion(64, 4),
                                                   ModulationRegion(64, 2)};
    const auto d = densities(regions, 2, DensityStyle::kPlateau);
    const double triple = triple_at_origin(d[0], d[1], d[2]).value;
    const auto one = quad_with_bounded(d[0], d[1], d[2], BoundedFactor::constant(1.0));
    CHECK(one.value == doctest::Approx(triple).epsilon(1e-14));
    const auto three = quad_with_bounded(d[0], d[1], d[2], BoundedFactor::constant(3.0));
    CHECK(three.value == doctest::Approx(3.0 * triple).epsilon(1e-14));
    CHECK_THROWS_AS(quad_with_bounded(d[0], d[1], d[2], BoundedFactor::constant(0.0)),
                    ValidationError);

    const std::vector<std::vector<double>> ones(4, std::vector<double>(4, 2.0));
    const auto g = BoundedFactor::from_samples(ones, 1, 1);
    CHECK(g.sup_norm() == doctest::Approx(2.0));
  }

  TEST_CASE("sweep CSV shape and bounded ratios") {
    const auto rows = sweep_triple(4, 16, 4);
    CHECK(!rows.empty());
    const std::string csv = convolution_sweep_csv(rows);
    CHECK(csv.rfind("lemma-id,K-profile,L-profile,value,bound,ratio,seed,grid-resolution\n", 0) == 0);
    CHECK(max_ratio(rows) < 10.0);
  }
}
