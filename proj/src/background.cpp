#include "bolab/background.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

#include "bolab/errors.hpp"
#include "bolab/random.hpp"

namespace bolab {

std::string to_string(BackgroundKind kind) {
  switch (kind) {
    case BackgroundKind::kZero: return "zero";
    case BackgroundKind::kBore: return "bore";
    case BackgroundKind::kPeriodicStatic: return "periodic_static";
    case BackgroundKind::kPeriodicEvolving: return "periodic_evolving";
    case BackgroundKind::kZhidkov: return "zhidkov";
    case BackgroundKind::kCustom: return "custom";
  }
  return "unknown";
}

BackgroundSpec BackgroundSpec::zero(const Grid& grid) {
  return BackgroundSpec(SpectralField::zero(grid));
}

BackgroundSpec BackgroundSpec::custom(SpectralField b0) {
  for (double v : b0.samples()) {
    if (!std::isfinite(v)) throw ValidationError("custom background has non-finite samples");
  }
  BackgroundSpec b(std::move(b0));
  b.kind_ = BackgroundKind::kCustom;
  return b;
}

namespace {

struct BoreShape {
  double lambda, kappa, lo, hi;

  // w = (1 + tanh(k(x - L/2)) - tanh(k(x - L)) - tanh(k x))/2 on [0, L).
  double value(double x) const {
    const double w = 0.5 * (1.0 + std::tanh(kappa * (x - 0.5 * lambda)) -
                            std::tanh(kappa * (x - lambda)) - std::tanh(kappa * x));
    return lo + (hi - lo) * w;
  }
  double slope(double x) const {
    auto sech2 = [](double z) {
      const double c = std::cosh(z);
      return std::isfinite(c) ? 1.0 / (c * c) : 0.0;
    };
    const double dw = 0.5 * kappa *
                      (sech2(kappa * (x - 0.5 * lambda)) - sech2(kappa * (x - lambda)) -
                       sech2(kappa * x));
    return (hi - lo) * dw;
  }
};

}  // namespace

BackgroundSpec BackgroundSpec::bore(const Grid& grid, BoreParams params) {
  if (!(params.steepness > 0.0) || !std::isfinite(params.steepness)) {
    throw ValidationError("bore steepness must be positive");
  }
  if (!std::isfinite(params.c_minus) || !std::isfinite(params.c_plus)) {
    throw ValidationError("bore limits must be finite");
  }
  const double lambda = grid.length();
  const BoreShape shape{lambda, params.steepness, params.c_minus, params.c_plus};
  const double left_edge = lambda / 16.0, right_edge = lambda - lambda / 16.0;
  const double tol = 1e-14;
  if (std::abs(shape.slope(left_edge)) > tol || std::abs(shape.slope(right_edge)) > tol) {
    throw ValidationError("box too small for the requested bore steepness: b0' exceeds 1e-14 "
                          "at the matching-zone edges");
  }
  auto b0 = SpectralField::from_function(grid, [&shape](double x) { return shape.value(x); });
  BackgroundSpec b(std::move(b0));
  b.kind_ = BackgroundKind::kBore;
  b.bore_ = params;
  return b;
}

BackgroundSpec BackgroundSpec::periodic_static(const Grid& grid, double constant,
                                               std::vector<FourierMode> modes) {
  const long kmax = static_cast<long>(grid.size() / 2) - 1;
  for (const auto& m : modes) {
    if (m.k < 1 || m.k > kmax) throw ValidationError("background mode outside the grid");
  }
  const double step = grid.frequency_step();
  auto b0 = SpectralField::from_function(grid, [&](double x) {
    double v = constant;
    for (const auto& m : modes) {
      const double arg = step * static_cast<double>(m.k) * x;
      v += m.cos_amp * std::cos(arg) + m.sin_amp * std::sin(arg);
    }
    return v;
  });
  BackgroundSpec b(std::move(b0));
  b.kind_ = BackgroundKind::kPeriodicStatic;
  b.modes_ = std::move(modes);
  return b;
}

BackgroundSpec BackgroundSpec::zhidkov(const Grid& grid, double s, double amplitude,
                                       double constant, long k_max, std::uint64_t seed) {
  if (k_max < 1 || k_max >= static_cast<long>(grid.size() / 2)) {
    throw ValidationError("zhidkov k_max must lie in [1, M/2)");
  }
  Rng rng(seed);
  std::vector<Complex> c(grid.size(), Complex(0.0, 0.0));
  c[0] = constant;
  for (long k = 1; k <= k_max; ++k) {
    const double mag = amplitude * std::pow(static_cast<double>(k), -(s + 0.5));
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    const Complex v = std::polar(mag, theta);
    c[grid.index_of_mode(k)] = v;
    c[grid.index_of_mode(-k)] = std::conj(v);
  }
  BackgroundSpec b(SpectralField::from_coeffs(grid, std::move(c)));
  b.kind_ = BackgroundKind::kZhidkov;
  return b;
}

namespace {

// Interaction-picture coefficients v = exp(i omega t) b_hat: the dispersive
// phase is removed so differencing and interpolation only see the slow
// nonlinear evolution.
std::vector<Complex> to_interaction(const SpectralField& b, double t) {
  const Grid& g = b.grid();
  std::vector<Complex> v(b.coeffs().begin(), b.coeffs().end());
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (!g.is_nyquist(j)) v[j] *= std::polar(1.0, omega(g.xi(j)) * t);
  }
  return v;
}

std::vector<Complex> combine(const std::vector<std::vector<Complex>>& v, std::size_t first,
                             std::span<const double> weights) {
  std::vector<Complex> c(v[first].size(), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto& src = v[first + i];
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += weights[i] * src[j];
  }
  return c;
}

void lagrange4(double pos, long i0, double* w) {
  for (int i = 0; i < 4; ++i) {
    double li = 1.0;
    for (int m = 0; m < 4; ++m) {
      if (m != i) li *= (pos - static_cast<double>(i0 + m)) / static_cast<double>(i - m);
    }
    w[i] = li;
  }
}

}  // namespace

BackgroundSpec BackgroundSpec::periodic_evolving(std::vector<SpectralField> trajectory,
                                                 double step) {
  if (trajectory.size() < 5) throw ValidationError("evolving background needs >= 5 samples");
  if (!(step > 0.0)) throw ValidationError("evolving background needs a positive step");
  for (const auto& f : trajectory) {
    if (!(f.grid() == trajectory.front().grid())) {
      throw ValidationError("evolving background grid mismatch");
    }
  }
  BackgroundSpec b(trajectory.front());
  b.kind_ = BackgroundKind::kPeriodicEvolving;
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    b.interaction_.push_back(to_interaction(trajectory[i], step * static_cast<double>(i)));
  }
  b.trajectory_ = std::move(trajectory);
  b.step_ = step;
  return b;
}

double BackgroundSpec::final_time() const {
  if (!time_dependent()) return std::numeric_limits<double>::infinity();
  return step_ * static_cast<double>(trajectory_.size() - 1);
}

std::vector<Complex> BackgroundSpec::interaction_at(double t) const {
  const double pos = t / step_;
  const long n = static_cast<long>(interaction_.size());
  const long i0 = std::clamp(static_cast<long>(std::floor(pos)) - 1, 0L, n - 4);
  double w[4];
  lagrange4(pos, i0, w);
  return combine(interaction_, static_cast<std::size_t>(i0), w);
}

std::vector<Complex> BackgroundSpec::interaction_derivative(long i) const {
  // 4th-order stencils: central inside, one-sided at the two ends.
  static constexpr double central[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
  static constexpr double edge0[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
  static constexpr double edge1[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};
  const long n = static_cast<long>(interaction_.size());
  double w[5];
  std::size_t first;
  if (i >= 2 && i <= n - 3) {
    first = static_cast<std::size_t>(i - 2);
    for (int k = 0; k < 5; ++k) w[k] = central[k];
  } else if (i < 2) {
    first = 0;
    for (int k = 0; k < 5; ++k) w[k] = i == 0 ? edge0[k] : edge1[k];
  } else {
    first = static_cast<std::size_t>(n - 5);
    for (int k = 0; k < 5; ++k) w[k] = -(i == n - 1 ? edge0[4 - k] : edge1[4 - k]);
  }
  for (double& v : w) v /= 12.0 * step_;
  return combine(interaction_, first, w);
}

void BackgroundSpec::check_time(double t) const {
  const double tol = 1e-9 * step_;
  if (t < -tol || t > final_time() + tol) {
    throw ValidationError("time outside the evolving background's range");
  }
}

SpectralField BackgroundSpec::at(double t) const {
  if (!time_dependent()) return b0_;
  check_time(t);
  const double pos = t / step_;
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) * step_ <= 1e-9 * step_) {
    const long n = static_cast<long>(trajectory_.size());
    return trajectory_[static_cast<std::size_t>(std::clamp(static_cast<long>(nearest), 0L, n - 1))];
  }
  std::vector<Complex> c = interaction_at(t);
  const Grid& g = grid();
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (!g.is_nyquist(j)) c[j] *= std::polar(1.0, -omega(g.xi(j)) * t);
  }
  return SpectralField::from_coeffs(g, std::move(c));
}

SpectralField BackgroundSpec::time_derivative(double t) const {
  if (!time_dependent()) return SpectralField::zero(grid());
  check_time(t);
  const long n = static_cast<long>(trajectory_.size());
  const double pos = t / step_;
  const double nearest = std::round(pos);
  std::vector<Complex> vt;
  if (std::abs(pos - nearest) * step_ <= 1e-9 * step_) {
    vt = interaction_derivative(std::clamp(static_cast<long>(nearest), 0L, n - 1));
  } else {
    const long i0 = std::clamp(static_cast<long>(std::floor(pos)) - 1, 0L, n - 4);
    std::vector<std::vector<Complex>> d;
    for (long i = i0; i < i0 + 4; ++i) d.push_back(interaction_derivative(i));
    double w[4];
    lagrange4(pos, i0, w);
    vt = combine(d, 0, w);
  }
  // b_t = -i omega b + exp(-i omega t) v_t.
  const SpectralField b = at(t);
  const Grid& g = grid();
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g.is_nyquist(j)) continue;
    const double w = omega(g.xi(j));
    vt[j] = vt[j] * std::polar(1.0, -w * t) - Complex(0.0, w) * b.coeffs()[j];
  }
  return SpectralField::from_coeffs(g, std::move(vt));
}

double BackgroundSpec::sup_norm() const {
  if (!time_dependent()) return b0_.max_abs();
  double m = 0.0;
  for (const auto& f : trajectory_) m = std::max(m, f.max_abs());
  return m;
}

std::pair<double, double> readout_window(const Grid& grid) {
  return {grid.length() / 8.0, 7.0 * grid.length() / 8.0};
}

SpectralField splitting_forcing(const SpectralField& b, const SpectralField& b_t) {
  if (!(b.grid() == b_t.grid())) throw ValidationError("forcing: grid mismatch");
  // H d_x^2 has symbol i omega(xi); d_x has symbol i xi.
  const SpectralField dispersive =
      apply_multiplier(b, [](double xi) { return Complex(0.0, omega(xi)); });
  const SpectralField flux = derivative(dealiased_product(b, b));
  return b_t + dispersive + flux;
}

SpectralField forcing_from_background(const BackgroundSpec& background, double t) {
  return splitting_forcing(background.at(t), background.time_derivative(t));
}

ForcingSpec ForcingSpec::zero(const Grid& grid) {
  ForcingSpec f;
  f.fixed_ = std::make_shared<const SpectralField>(SpectralField::zero(grid));
  return f;
}

ForcingSpec ForcingSpec::static_field(SpectralField field) {
  ForcingSpec f;
  f.kind_ = ForcingKind::kStatic;
  f.fixed_ = std::make_shared<const SpectralField>(std::move(field));
  return f;
}

ForcingSpec ForcingSpec::derived(std::shared_ptr<const BackgroundSpec> background) {
  if (!background) throw ValidationError("derived forcing needs a background");
  ForcingSpec f;
  f.kind_ = ForcingKind::kDerived;
  f.background_ = std::move(background);
  if (!f.background_->time_dependent()) {
    f.fixed_ = std::make_shared<const SpectralField>(forcing_from_background(*f.background_, 0.0));
  }
  return f;
}

bool ForcingSpec::time_dependent() const {
  return kind_ == ForcingKind::kDerived && background_->time_dependent();
}

SpectralField ForcingSpec::at(double t) const {
  if (fixed_) return *fixed_;
  return forcing_from_background(*background_, t);
}

double bump(double y) noexcept {
  if (!(std::abs(y) < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - y * y));
}

ForcingSpec matsuno_topography(const Grid& grid, double center, double width, double amplitude) {
  if (!(width > 0.0) || !(width < grid.length() / 4.0)) {
    throw ValidationError("topography width must lie in (0, length/4)");
  }
  if (!(center - width > 0.0) || !(center + width < grid.length())) {
    throw ValidationError("topography profile exits the box interior");
  }
  if (!std::isfinite(amplitude)) throw ValidationError("topography amplitude must be finite");
  return ForcingSpec::static_field(SpectralField::from_function(
      grid, [=](double x) { return amplitude * bump((x - center) / width); }));
}

RegularityReport regularity_report(const SpectralField& g, double s, RegularityNorm norm) {
  RegularityReport rep;
  if (norm == RegularityNorm::kSup) {
    rep.profile = besov_sup_norm(g, s);
  } else {
    rep.profile = sobolev_norm(g, s);
  }
  const auto& bands = rep.profile.bands;
  std::size_t arg = 0;
  for (std::size_t i = 1; i < bands.size(); ++i) {
    if (bands[i].contribution > bands[arg].contribution) arg = i;
  }
  rep.argmax_band = bands.empty() ? 0 : bands[arg].band;
  rep.proxy_satisfied = bands.size() < 3 || arg + 2 < bands.size();
  return rep;
}

}  // namespace bolab
