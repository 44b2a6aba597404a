#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bolab/littlewood_paley.hpp"
#include "bolab/spectral.hpp"

namespace bolab {

enum class BackgroundKind { kZero, kBore, kPeriodicStatic, kPeriodicEvolving, kZhidkov, kCustom };

std::string to_string(BackgroundKind kind);

struct BoreParams {
  double c_minus;
  double c_plus;
  double steepness;
};

/// One term a cos(xi_k x) + b sin(xi_k x) of a periodic background.
struct FourierMode {
  long k;
  double cos_amp;
  double sin_amp;
};

/// Background b(t, x) on a periodic grid. Static variants hold b_0; the
/// evolving variant holds samples b(n h) for n = 0..N on a uniform time lattice.
class BackgroundSpec {
 public:
  static BackgroundSpec zero(const Grid& grid);
  static BackgroundSpec custom(SpectralField b0);
  /// Bore from C_- to C_+ centred at length/2, periodized by a mirrored tanh
  /// seam of the same steepness at x = 0. Throws if b_0' exceeds 1e-14 at the
  /// edges of the matching zone [-length/16, length/16].
  static BackgroundSpec bore(const Grid& grid, BoreParams params);
  static BackgroundSpec periodic_static(const Grid& grid, double constant,
                                        std::vector<FourierMode> modes);
  /// constant + sum over 1 <= |k| <= k_max of amplitude |k|^{-(s+1/2)} e^{i theta_k}
  /// with uniform random phases.
  static BackgroundSpec zhidkov(const Grid& grid, double s, double amplitude, double constant,
                                long k_max, std::uint64_t seed);
  /// Trajectory b(n step), n = 0..N (N >= 4).
  static BackgroundSpec periodic_evolving(std::vector<SpectralField> trajectory, double step);

  BackgroundKind kind() const { return kind_; }
  const Grid& grid() const { return b0_.grid(); }
  bool time_dependent() const { return kind_ == BackgroundKind::kPeriodicEvolving; }
  const SpectralField& initial() const { return b0_; }
  const BoreParams& bore_params() const { return bore_; }
  const std::vector<FourierMode>& modes() const { return modes_; }
  double time_step() const { return step_; }
  double final_time() const;

  /// b(t). Evolving backgrounds return stored samples at lattice times and
  /// otherwise interpolate exp(i omega t) b_hat with the 4-point Lagrange stencil.
  SpectralField at(double t) const;
  /// b_t(t): zero for static variants. The evolving variant differences
  /// v = exp(i omega t) b_hat with 4th-order stencils and restores the
  /// dispersive part exactly: b_t = -i omega b + exp(-i omega t) v_t.
  SpectralField time_derivative(double t) const;

  /// sup over stored times of max|b|.
  double sup_norm() const;

 private:
  explicit BackgroundSpec(SpectralField b0) : b0_(std::move(b0)) {}
  void check_time(double t) const;
  std::vector<Complex> interaction_at(double t) const;
  std::vector<Complex> interaction_derivative(long i) const;

  BackgroundKind kind_ = BackgroundKind::kZero;
  SpectralField b0_;
  BoreParams bore_{};
  std::vector<FourierMode> modes_;
  std::vector<SpectralField> trajectory_;
  std::vector<std::vector<Complex>> interaction_;
  double step_ = 0.0;
};

/// Window [length/8, 7 length/8] away from the bore seam, where physics readouts live.
std::pair<double, double> readout_window(const Grid& grid);

enum class ForcingKind { kZero, kStatic, kDerived };

/// Forcing f(t, x).
class ForcingSpec {
 public:
  static ForcingSpec zero(const Grid& grid);
  static ForcingSpec static_field(SpectralField f);
  /// f_b = b_t + H b_xx + d_x(b^2), products dealiased.
  static ForcingSpec derived(std::shared_ptr<const BackgroundSpec> background);

  ForcingKind kind() const { return kind_; }
  bool time_dependent() const;
  SpectralField at(double t) const;

 private:
  ForcingKind kind_ = ForcingKind::kZero;
  std::shared_ptr<const SpectralField> fixed_;
  std::shared_ptr<const BackgroundSpec> background_;
};

/// b_t + H b_xx + d_x(b^2) for given b and b_t.
SpectralField splitting_forcing(const SpectralField& b, const SpectralField& b_t);
SpectralField forcing_from_background(const BackgroundSpec& background, double t);

/// exp(-1/(1-y^2)) on |y| < 1, zero elsewhere.
double bump(double y) noexcept;
/// Integral of bump over [-1, 1].
inline constexpr double kBumpMass = 0.44399381616807943;

/// Time-independent forcing amplitude * bump((x - center)/width), b = 0.
/// Requires 0 < width < length/4 and [center - width, center + width] inside (0, length).
ForcingSpec matsuno_topography(const Grid& grid, double center, double width, double amplitude);

enum class RegularityNorm { kSup, kL2 };

struct RegularityReport {
  NormReport profile;
  long argmax_band = 0;
  /// False when the largest weighted band sits in one of the top two bands,
  /// the finite-grid signature of a profile that does not decay like K^{-s}.
  bool proxy_satisfied = false;
};

/// K -> K^s ||P_K g|| with the L^inf (backgrounds) or L^2 (forcings) band norm.
RegularityReport regularity_report(const SpectralField& g, double s, RegularityNorm norm);

inline constexpr double kDefaultRegularityEpsilon = 0.1;

}  // namespace bolab
