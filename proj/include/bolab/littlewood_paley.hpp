#pragma once

#include <span>
#include <string>
#include <vector>

#include "bolab/spectral.hpp"

namespace bolab {

/// Plateau and support edges of the base cutoff.
inline constexpr double kPlateauEdge = 5.0 / 4.0;
inline constexpr double kSupportEdge = 8.0 / 5.0;

/// Smooth even cutoff: 1 on |x| <= 5/4, 0 on |x| >= 8/5, monotone in between
/// (exp(-1/t) smoothed step). Serves as both the frequency and the modulation
/// base profile.
double cutoff_profile(double x) noexcept;

bool is_dyadic(long value) noexcept;

enum class BandKind { kFrequency, kModulation };

/// Dyadic shell K in {1, 2, 4, ...}.
class DyadicBand {
 public:
  explicit DyadicBand(long k, BandKind kind = BandKind::kFrequency);

  long value() const noexcept { return k_; }
  BandKind kind() const noexcept { return kind_; }

  /// chi_K(xi): the base profile itself for K = 1, else
  /// cutoff(xi/K) - cutoff(2 xi/K), supported in 5K/8 <= |xi| <= 8K/5.
  double weight(double xi) const noexcept;
  /// Closed support of weight().
  bool in_support(double xi) const noexcept;

 private:
  long k_;
  BandKind kind_;
};

double chi(long k, double xi);
bool in_band_support(long k, double xi) noexcept;

/// D_{L,K}: modulation tau - omega(xi) in supp eta_L and xi in supp chi_K.
struct ModulationRegion {
  long modulation;
  long frequency;

  ModulationRegion(long l, long k);
  bool contains(double tau, double xi) const noexcept;
};

enum class Aggregation { kL2, kSup, kL1 };

struct BandContribution {
  long band;
  double contribution;
};

/// A norm value together with the per-band terms it aggregates.
struct NormReport {
  std::string kind;
  double param = 0.0;
  Aggregation aggregation = Aggregation::kL2;
  double value = 0.0;
  std::vector<BandContribution> bands;

  /// Recomputes the aggregate from `bands`.
  double aggregate() const;
  std::string to_json() const;
  /// Rows "kind,param,K,contribution,total" without a header line.
  std::string to_csv_rows() const;
  static std::string csv_header();
};

/// Bands 1, 2, ..., up to the first K with 5K/4 >= max|xi| of the grid, so
/// that sum_K P_K is the identity on every grid field.
std::vector<long> dyadic_bands(const Grid& grid);
/// Largest dyadic K whose band 8K/5 fits inside the dealiased spectrum.
long dealiased_band_cap(const Grid& grid);
/// Smallest dyadic K with 5K/4 >= value.
long covering_band(double value);

SpectralField project_band(const SpectralField& field, long k);
/// P_{<=N} = sum_{K<=N} P_K, multiplier cutoff(xi/N).
SpectralField project_low(const SpectralField& field, long n);
/// P_{>N} = Id - P_{<=N}.
SpectralField project_high(const SpectralField& field, long n);

NormReport sobolev_norm(const SpectralField& field, double s);
NormReport besov_sup_norm(const SpectralField& field, double s);

/// E^s over sampled times: l2 over K of K^s max_t ||P_K u(t)||_{L2}.
NormReport sup_time_norm(std::span<const SpectralField> trajectory, double s);

/// Space-time samples u(t_n, x_j), rows = time, on a uniform time lattice
/// treated as periodic over rows*dt.
struct SpaceTimeField {
  Grid grid;
  double dt;
  std::vector<std::vector<double>> rows;
};

/// sum_L L^{1/2} ||eta_L(tau - omega(xi)) 1_{supp chi_K}(xi) F(tau, xi)||_{L2}
/// with F the space-time transform using kernel exp(-i(t tau + x xi)),
/// normalized so that Parseval holds with the box measure.
NormReport modulation_norm(const SpaceTimeField& data, long k);

/// modulation_norm of a solution of the forward flow. The transform
/// convention places free waves exp(i(xi x - omega t)) at tau = -omega(xi);
/// samples are time-reversed so that they sit at zero modulation.
NormReport modulation_norm_of_trajectory(std::span<const SpectralField> fields, double dt,
                                         long k);

}  // namespace bolab
