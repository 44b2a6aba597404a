#include "bolab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bolab/errors.hpp"
#include "bolab/fft.hpp"

namespace bolab {

Grid::Grid(std::size_t num_points, double length) : num_points_(num_points), length_(length) {
  if (num_points < 8 || (num_points & (num_points - 1)) != 0) {
    throw ValidationError("num_points must be a power of two >= 8, got " +
                          std::to_string(num_points));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ValidationError("length must be positive and finite");
  }
}

long Grid::mode(std::size_t j) const noexcept {
  const auto half = num_points_ / 2;
  return j < half ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(num_points_);
}

double Grid::frequency_step() const noexcept { return 2.0 * std::numbers::pi / length_; }

double Grid::xi(std::size_t j) const noexcept {
  return frequency_step() * static_cast<double>(mode(j));
}

std::size_t Grid::index_of_mode(long k) const {
  const long half = static_cast<long>(num_points_ / 2);
  if (k < -half || k >= half) throw std::out_of_range("mode outside grid");
  return k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(k + 2 * half);
}

double Grid::max_abs_xi() const noexcept {
  return frequency_step() * static_cast<double>(num_points_ / 2);
}

std::vector<Complex> forward(const Grid& grid, std::span<const double> samples) {
  const std::size_t m = grid.size();
  if (samples.size() != m) throw std::invalid_argument("forward: sample count mismatch");
  std::vector<Complex> in(samples.begin(), samples.end());
  std::vector<Complex> out(m);
  fft::transform(in, out, fft::Direction::kForward);
  const double scale = 1.0 / static_cast<double>(m);
  for (auto& c : out) c *= scale;
  return out;
}

std::vector<double> inverse(const Grid& grid, std::span<const Complex> coeffs) {
  const std::size_t m = grid.size();
  if (coeffs.size() != m) throw std::invalid_argument("inverse: coefficient count mismatch");
  std::vector<Complex> out(m);
  fft::transform(coeffs, out, fft::Direction::kBackward);
  std::vector<double> samples(m);
  std::transform(out.begin(), out.end(), samples.begin(), [](Complex c) { return c.real(); });
  return samples;
}

namespace {

void symmetrize(const Grid& grid, std::vector<Complex>& coeffs) {
  const std::size_t m = grid.size();
  coeffs[0] = Complex(coeffs[0].real(), 0.0);
  coeffs[m / 2] = Complex(coeffs[m / 2].real(), 0.0);
  for (std::size_t j = 1; j < m / 2; ++j) {
    const Complex avg = 0.5 * (coeffs[j] + std::conj(coeffs[m - j]));
    coeffs[j] = avg;
    coeffs[m - j] = std::conj(avg);
  }
}

}  // namespace

SpectralField::SpectralField(Grid grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size()) {
    throw std::invalid_argument("SpectralField: sample count mismatch");
  }
  coeffs_ = forward(grid_, samples_);
  symmetrize(grid_, coeffs_);
}

SpectralField::SpectralField(Grid grid, std::vector<double> samples, std::vector<Complex> coeffs)
    : grid_(grid), samples_(std::move(samples)), coeffs_(std::move(coeffs)) {}

SpectralField SpectralField::from_coeffs(Grid grid, std::vector<Complex> coeffs) {
  if (coeffs.size() != grid.size()) {
    throw std::invalid_argument("SpectralField: coefficient count mismatch");
  }
  symmetrize(grid, coeffs);
  auto samples = inverse(grid, coeffs);
  return SpectralField(grid, std::move(samples), std::move(coeffs));
}

SpectralField SpectralField::zero(Grid grid) {
  return SpectralField(grid, std::vector<double>(grid.size(), 0.0),
                       std::vector<Complex>(grid.size(), Complex{}));
}

SpectralField SpectralField::from_function(Grid grid, const std::function<double(double)>& f) {
  std::vector<double> samples(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) samples[j] = f(grid.x(j));
  return SpectralField(grid, std::move(samples));
}

double SpectralField::l2_norm() const {
  double sum = 0.0;
  for (const auto& c : coeffs_) sum += std::norm(c);
  return std::sqrt(grid_.length() * sum);
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double SpectralField::integral() const { return grid_.length() * coeffs_[0].real(); }

SpectralField SpectralField::operator+(const SpectralField& other) const {
  if (!(grid_ == other.grid_)) throw ValidationError("grid mismatch");
  std::vector<double> s(samples_);
  std::vector<Complex> c(coeffs_);
  for (std::size_t j = 0; j < s.size(); ++j) {
    s[j] += other.samples_[j];
    c[j] += other.coeffs_[j];
  }
  return SpectralField(grid_, std::move(s), std::move(c));
}

SpectralField SpectralField::operator-(const SpectralField& other) const {
  return *this + other * -1.0;
}

SpectralField SpectralField::operator*(double scale) const {
  std::vector<double> s(samples_);
  std::vector<Complex> c(coeffs_);
  for (auto& v : s) v *= scale;
  for (auto& v : c) v *= scale;
  return SpectralField(grid_, std::move(s), std::move(c));
}

SpectralField apply_multiplier(const SpectralField& field,
                               const std::function<Complex(double)>& symbol,
                               double nyquist_value) {
  const Grid& grid = field.grid();
  std::vector<Complex> c(field.coeffs().begin(), field.coeffs().end());
  for (std::size_t j = 0; j < c.size(); ++j) {
    c[j] *= grid.is_nyquist(j) ? Complex(nyquist_value, 0.0) : symbol(grid.xi(j));
  }
  return SpectralField::from_coeffs(grid, std::move(c));
}

SpectralField apply_multiplier(const SpectralField& field,
                               const std::function<Complex(double)>& symbol) {
  const double xn = field.grid().max_abs_xi();
  const double nyquist = 0.5 * (symbol(xn) + symbol(-xn)).real();
  return apply_multiplier(field, symbol, nyquist);
}

SpectralField hilbert_transform(const SpectralField& field) {
  return apply_multiplier(field, [](double xi) {
    if (xi > 0) return Complex(0.0, -1.0);
    if (xi < 0) return Complex(0.0, 1.0);
    return Complex(0.0, 0.0);
  });
}

SpectralField derivative(const SpectralField& field, int order) {
  return apply_multiplier(field, [order](double xi) { return std::pow(Complex(0.0, xi), order); });
}

SpectralField free_propagator(const SpectralField& field, double t) {
  return apply_multiplier(
      field, [t](double xi) { return std::polar(1.0, -omega(xi) * t); }, 1.0);
}

bool retained_by_dealias(const Grid& grid, std::size_t j) noexcept {
  return 3 * std::abs(grid.mode(j)) <= static_cast<long>(grid.size());
}

SpectralField dealias(const SpectralField& field) {
  const Grid& grid = field.grid();
  std::vector<Complex> c(field.coeffs().begin(), field.coeffs().end());
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (!retained_by_dealias(grid, j)) c[j] = Complex{};
  }
  return SpectralField::from_coeffs(grid, std::move(c));
}

SpectralField dealiased_product(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw ValidationError("grid mismatch");
  std::vector<double> p(a.grid().size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = a.samples()[j] * b.samples()[j];
  return dealias(SpectralField(a.grid(), std::move(p)));
}

double inner_product(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw ValidationError("grid mismatch");
  double sum = 0.0;
  for (std::size_t j = 0; j < a.coeffs().size(); ++j) {
    sum += (a.coeffs()[j] * std::conj(b.coeffs()[j])).real();
  }
  return a.grid().length() * sum;
}

}  // namespace bolab
