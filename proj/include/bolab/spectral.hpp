#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bolab {

using Complex = std::complex<double>;

/// Uniform periodic grid on [0, length) with a power-of-two number of points.
///
/// Coefficient arrays use FFT ordering: index j holds the integer mode
/// k = j for j < M/2 and k = j - M otherwise, with physical frequency
/// xi_k = 2*pi*k/length.
class Grid {
 public:
  Grid(std::size_t num_points, double length);

  std::size_t size() const noexcept { return num_points_; }
  double length() const noexcept { return length_; }
  double spacing() const noexcept { return length_ / static_cast<double>(num_points_); }
  double x(std::size_t j) const noexcept { return spacing() * static_cast<double>(j); }

  long mode(std::size_t j) const noexcept;
  double xi(std::size_t j) const noexcept;
  std::size_t index_of_mode(long k) const;
  bool is_nyquist(std::size_t j) const noexcept { return j == num_points_ / 2; }
  /// Spacing of the physical frequency lattice, 2*pi/length.
  double frequency_step() const noexcept;
  double max_abs_xi() const noexcept;

  bool operator==(const Grid&) const = default;

 private:
  std::size_t num_points_;
  double length_;
};

/// Real field with synchronized samples and Fourier coefficients.
///
/// coeffs_k = (1/M) sum_j samples_j exp(-i xi_k x_j); the inverse carries no
/// constant. The continuum transform's (2 pi)^{-1/2} factor is a global
/// rescaling and never appears in the identities implemented here.
class SpectralField {
 public:
  SpectralField(Grid grid, std::vector<double> samples);

  /// Builds a field from coefficients, projecting onto Hermitian symmetry.
  static SpectralField from_coeffs(Grid grid, std::vector<Complex> coeffs);
  static SpectralField zero(Grid grid);
  static SpectralField from_function(Grid grid, const std::function<double(double)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> samples() const noexcept { return samples_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  /// sqrt(length * sum |c_k|^2), equal to the trapezoidal L2 norm of the samples.
  double l2_norm() const;
  double max_abs() const;
  /// Integral over the box, length * c_0.
  double integral() const;

  SpectralField operator+(const SpectralField& other) const;
  SpectralField operator-(const SpectralField& other) const;
  SpectralField operator*(double scale) const;

 private:
  SpectralField(Grid grid, std::vector<double> samples, std::vector<Complex> coeffs);

  Grid grid_;
  std::vector<double> samples_;
  std::vector<Complex> coeffs_;
};

std::vector<Complex> forward(const Grid& grid, std::span<const double> samples);
std::vector<double> inverse(const Grid& grid, std::span<const Complex> coeffs);

/// Dispersion relation xi*|xi| of the linear flow.
constexpr double omega(double xi) noexcept { return xi * (xi < 0 ? -xi : xi); }

/// Multiplies every coefficient by symbol(xi_k). The self-conjugate Nyquist
/// mode receives `nyquist_value` when given, else the real even part
/// (symbol(xi_N) + symbol(-xi_N))/2, which vanishes for odd symbols.
SpectralField apply_multiplier(const SpectralField& field,
                               const std::function<Complex(double)>& symbol);
SpectralField apply_multiplier(const SpectralField& field,
                               const std::function<Complex(double)>& symbol,
                               double nyquist_value);

SpectralField hilbert_transform(const SpectralField& field);
SpectralField derivative(const SpectralField& field, int order = 1);
SpectralField free_propagator(const SpectralField& field, double t);
/// Zeroes modes with |k| > M/3.
SpectralField dealias(const SpectralField& field);
bool retained_by_dealias(const Grid& grid, std::size_t j) noexcept;

/// Pointwise product of two fields on the grid, followed by the 2/3 rule.
SpectralField dealiased_product(const SpectralField& a, const SpectralField& b);

/// L2 inner product over the box, computed from coefficients.
double inner_product(const SpectralField& a, const SpectralField& b);

}  // namespace bolab
