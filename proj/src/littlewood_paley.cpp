#include "bolab/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bolab/errors.hpp"
#include "bolab/fft.hpp"

namespace bolab {

namespace {

double smooth_step(double t) noexcept {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

}  // namespace

double cutoff_profile(double x) noexcept {
  const double ax = std::abs(x);
  if (ax <= kPlateauEdge) return 1.0;
  if (ax >= kSupportEdge) return 0.0;
  return smooth_step((kSupportEdge - ax) / (kSupportEdge - kPlateauEdge));
}

bool is_dyadic(long value) noexcept { return value >= 1 && (value & (value - 1)) == 0; }

DyadicBand::DyadicBand(long k, BandKind kind) : k_(k), kind_(kind) {
  if (!is_dyadic(k)) throw ValidationError("band index must be a power of two >= 1");
}

double DyadicBand::weight(double xi) const noexcept {
  const double kk = static_cast<double>(k_);
  if (k_ == 1) return cutoff_profile(xi);
  return cutoff_profile(xi / kk) - cutoff_profile(2.0 * xi / kk);
}

bool DyadicBand::in_support(double xi) const noexcept {
  const double a = std::abs(xi);
  const double kk = static_cast<double>(k_);
  if (k_ == 1) return a <= kSupportEdge;
  return a >= 0.625 * kk && a <= kSupportEdge * kk;
}

double chi(long k, double xi) { return DyadicBand(k).weight(xi); }

bool in_band_support(long k, double xi) noexcept {
  const double a = std::abs(xi);
  const double kk = static_cast<double>(k);
  if (k == 1) return a <= kSupportEdge;
  return a >= 0.625 * kk && a <= kSupportEdge * kk;
}

ModulationRegion::ModulationRegion(long l, long k) : modulation(l), frequency(k) {
  if (!is_dyadic(l) || !is_dyadic(k)) throw ValidationError("D_{L,K} needs dyadic L and K");
}

bool ModulationRegion::contains(double tau, double xi) const noexcept {
  return in_band_support(frequency, xi) && in_band_support(modulation, tau - omega(xi));
}

double NormReport::aggregate() const {
  double acc = 0.0;
  for (const auto& b : bands) {
    switch (aggregation) {
      case Aggregation::kL2: acc += b.contribution * b.contribution; break;
      case Aggregation::kSup: acc = std::max(acc, b.contribution); break;
      case Aggregation::kL1: acc += b.contribution; break;
    }
  }
  return aggregation == Aggregation::kL2 ? std::sqrt(acc) : acc;
}

std::string NormReport::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["param"] = param;
  j["aggregation"] = aggregation == Aggregation::kL2    ? "l2"
                     : aggregation == Aggregation::kSup ? "sup"
                                                        : "l1";
  j["value"] = value;
  auto& arr = j["bands"] = nlohmann::json::array();
  for (const auto& b : bands) arr.push_back({{"K", b.band}, {"contribution", b.contribution}});
  return j.dump(2);
}

std::string NormReport::csv_header() { return "kind,param,K,contribution,total\n"; }

std::string NormReport::to_csv_rows() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& b : bands) {
    os << kind << ',' << param << ',' << b.band << ',' << b.contribution << ',' << value << '\n';
  }
  return os.str();
}

long covering_band(double value) {
  long k = 1;
  while (kPlateauEdge * static_cast<double>(k) < value) k *= 2;
  return k;
}

std::vector<long> dyadic_bands(const Grid& grid) {
  std::vector<long> bands;
  const long top = covering_band(grid.max_abs_xi());
  for (long k = 1; k <= top; k *= 2) bands.push_back(k);
  return bands;
}

long dealiased_band_cap(const Grid& grid) {
  const double xi_d = grid.frequency_step() * std::floor(static_cast<double>(grid.size()) / 3.0);
  long k = 1;
  while (kSupportEdge * static_cast<double>(2 * k) <= xi_d) k *= 2;
  return k;
}

SpectralField project_band(const SpectralField& field, long k) {
  const DyadicBand band(k);
  return apply_multiplier(field, [&band](double xi) { return Complex(band.weight(xi), 0.0); });
}

SpectralField project_low(const SpectralField& field, long n) {
  if (!is_dyadic(n)) throw ValidationError("P_{<=N} needs dyadic N");
  const double nn = static_cast<double>(n);
  return apply_multiplier(field,
                          [nn](double xi) { return Complex(cutoff_profile(xi / nn), 0.0); });
}

SpectralField project_high(const SpectralField& field, long n) {
  if (!is_dyadic(n)) throw ValidationError("P_{>N} needs dyadic N");
  const double nn = static_cast<double>(n);
  return apply_multiplier(
      field, [nn](double xi) { return Complex(1.0 - cutoff_profile(xi / nn), 0.0); });
}

namespace {

// ||P_K f||_{L2} straight from the coefficients.
double band_l2(const SpectralField& field, const DyadicBand& band) {
  const Grid& g = field.grid();
  double sum = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double w = g.is_nyquist(j) ? 0.5 * (band.weight(g.xi(j)) + band.weight(-g.xi(j)))
                                     : band.weight(g.xi(j));
    if (w != 0.0) sum += w * w * std::norm(field.coeffs()[j]);
  }
  return std::sqrt(g.length() * sum);
}

}  // namespace

NormReport sobolev_norm(const SpectralField& field, double s) {
  NormReport r{.kind = "H^s", .param = s, .aggregation = Aggregation::kL2, .bands = {}};
  for (long k : dyadic_bands(field.grid())) {
    r.bands.push_back({k, std::pow(static_cast<double>(k), s) * band_l2(field, DyadicBand(k))});
  }
  r.value = r.aggregate();
  return r;
}

NormReport besov_sup_norm(const SpectralField& field, double s) {
  NormReport r{.kind = "B^s_inf_inf", .param = s, .aggregation = Aggregation::kSup, .bands = {}};
  for (long k : dyadic_bands(field.grid())) {
    r.bands.push_back({k, std::pow(static_cast<double>(k), s) * project_band(field, k).max_abs()});
  }
  r.value = r.aggregate();
  return r;
}

NormReport sup_time_norm(std::span<const SpectralField> trajectory, double s) {
  if (trajectory.size() < 2) throw ValidationError("E^s norm needs at least two time samples");
  const Grid& grid = trajectory.front().grid();
  NormReport r{.kind = "E^s_T", .param = s, .aggregation = Aggregation::kL2, .bands = {}};
  for (long k : dyadic_bands(grid)) {
    const DyadicBand band(k);
    double sup = 0.0;
    for (const auto& u : trajectory) {
      if (!(u.grid() == grid)) throw ValidationError("trajectory grid mismatch");
      sup = std::max(sup, band_l2(u, band));
    }
    r.bands.push_back({k, std::pow(static_cast<double>(k), s) * sup});
  }
  r.value = r.aggregate();
  return r;
}

NormReport modulation_norm(const SpaceTimeField& data, long k) {
  const std::size_t nt = data.rows.size();
  if (nt < 4) throw ValidationError("X^K norm needs at least 4 time samples");
  if (!(data.dt > 0.0)) throw ValidationError("X^K norm needs dt > 0");
  const DyadicBand freq_band(k);
  const Grid& grid = data.grid;
  const std::size_t m = grid.size();

  std::vector<Complex> in(nt * m), out(nt * m);
  for (std::size_t n = 0; n < nt; ++n) {
    if (data.rows[n].size() != m) throw ValidationError("space-time row size mismatch");
    std::copy(data.rows[n].begin(), data.rows[n].end(), in.begin() + static_cast<long>(n * m));
  }
  fft::transform_2d(in, out, nt, m, fft::Direction::kForward);

  const double period = static_cast<double>(nt) * data.dt;
  const double dtau = 2.0 * std::numbers::pi / period;
  const double norm_scale = 1.0 / static_cast<double>(nt * m);
  auto tau_of = [&](std::size_t n) {
    const long mode = n < (nt + 1) / 2 ? static_cast<long>(n)
                                       : static_cast<long>(n) - static_cast<long>(nt);
    return dtau * static_cast<double>(mode);
  };

  double max_mod = 0.0;
  for (std::size_t n = 0; n < nt; ++n) {
    for (std::size_t j = 0; j < m; ++j) {
      if (freq_band.in_support(grid.xi(j))) {
        max_mod = std::max(max_mod, std::abs(tau_of(n) - omega(grid.xi(j))));
      }
    }
  }
  const long top = covering_band(max_mod);
  std::vector<long> shells;
  for (long l = 1; l <= top; l *= 2) shells.push_back(l);
  std::vector<double> sums(shells.size(), 0.0);

  for (std::size_t n = 0; n < nt; ++n) {
    const double tau = tau_of(n);
    for (std::size_t j = 0; j < m; ++j) {
      const double xi = grid.xi(j);
      if (!freq_band.in_support(xi)) continue;
      const double power = std::norm(out[n * m + j] * norm_scale);
      if (power == 0.0) continue;
      const double sigma = tau - omega(xi);
      for (std::size_t i = 0; i < shells.size(); ++i) {
        const double w = DyadicBand(shells[i], BandKind::kModulation).weight(sigma);
        if (w != 0.0) sums[i] += w * w * power;
      }
    }
  }

  NormReport r{.kind = "X^K", .param = static_cast<double>(k), .aggregation = Aggregation::kL1, .bands = {}};
  for (std::size_t i = 0; i < shells.size(); ++i) {
    const double l2 = std::sqrt(period * grid.length() * sums[i]);
    r.bands.push_back({shells[i], std::sqrt(static_cast<double>(shells[i])) * l2});
  }
  r.value = r.aggregate();
  return r;
}

NormReport modulation_norm_of_trajectory(std::span<const SpectralField> fields, double dt,
                                         long k) {
  if (fields.empty()) throw ValidationError("empty trajectory");
  SpaceTimeField data{fields.front().grid(), dt, {}};
  for (auto it = fields.rbegin(); it != fields.rend(); ++it) {
    data.rows.emplace_back(it->samples().begin(), it->samples().end());
  }
  return modulation_norm(data, k);
}

}  // namespace bolab
