#include "bolab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "bolab/fft.hpp"
#include "bolab/littlewood_paley.hpp"

namespace bolab {

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ValidationError("t_final must be positive");
  if (snapshot_stride < 1) throw ValidationError("snapshot_stride must be >= 1");
  if (!(cfl > 0.0)) throw ValidationError("cfl must be positive");
}

SpectralField rhs_forced(const SpectralField& u, const SpectralField& b, const SpectralField& f,
                         bool dealias) {
  if (!(u.grid() == b.grid()) || !(u.grid() == f.grid())) {
    throw ValidationError("rhs_forced: grid mismatch");
  }
  const auto us = u.samples();
  const auto bs = b.samples();
  std::vector<double> w(us.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = us[j] * (us[j] + 2.0 * bs[j]);
  SpectralField flux(u.grid(), std::move(w));
  if (dealias) flux = bolab::dealias(flux);
  const SpectralField dispersive =
      apply_multiplier(u, [](double xi) { return Complex(0.0, omega(xi)); });
  return (dispersive + derivative(flux) + f) * -1.0;
}

namespace {

// Nonlinear tendency N(c, t) = -d_x D(u^2 + 2ub) - f on raw coefficients.
class Tendency {
 public:
  Tendency(const Grid& grid, const BackgroundSpec& background, const ForcingSpec& forcing,
           bool dealias)
      : grid_(grid),
        background_(background),
        forcing_(forcing),
        m_(grid.size()),
        deriv_(m_),
        u_(m_),
        work_(m_),
        b_samples_(m_, 0.0),
        f_coeffs_(m_, Complex(0.0, 0.0)) {
    for (std::size_t j = 0; j < m_; ++j) {
      const bool keep = !dealias || retained_by_dealias(grid, j);
      deriv_[j] = (keep && !grid.is_nyquist(j)) ? Complex(0.0, -grid.xi(j)) : Complex(0.0, 0.0);
    }
    if (!background.time_dependent()) load_background(0.0);
    if (!forcing.time_dependent()) load_forcing(0.0);
  }

  double max_background() const { return background_.sup_norm(); }

  // Writes N into out and returns max|u| of the input state.
  double operator()(const std::vector<Complex>& c, double t, std::vector<Complex>& out) {
    if (background_.time_dependent()) load_background(t);
    if (forcing_.time_dependent()) load_forcing(t);
    fft::transform(c, u_, fft::Direction::kBackward);
    double umax = 0.0;
    for (std::size_t j = 0; j < m_; ++j) {
      const double u = u_[j].real();
      umax = std::max(umax, std::abs(u));
      work_[j] = Complex(u * (u + 2.0 * b_samples_[j]), 0.0);
      if (!std::isfinite(u)) umax = std::numeric_limits<double>::infinity();
    }
    fft::transform(work_, out, fft::Direction::kForward);
    const double scale = 1.0 / static_cast<double>(m_);
    for (std::size_t j = 0; j < m_; ++j) out[j] = deriv_[j] * out[j] * scale - f_coeffs_[j];
    return umax;
  }

 private:
  void load_background(double t) {
    if (loaded_b_ && *loaded_b_ == t) return;
    const SpectralField b = background_.at(t);
    std::copy(b.samples().begin(), b.samples().end(), b_samples_.begin());
    loaded_b_ = t;
  }
  void load_forcing(double t) {
    if (loaded_f_ && *loaded_f_ == t) return;
    const SpectralField f = forcing_.at(t);
    if (!(f.grid() == grid_)) throw ValidationError("forcing grid mismatch");
    std::copy(f.coeffs().begin(), f.coeffs().end(), f_coeffs_.begin());
    loaded_f_ = t;
  }

  Grid grid_;
  const BackgroundSpec& background_;
  const ForcingSpec& forcing_;
  std::size_t m_;
  std::vector<Complex> deriv_, u_, work_;
  std::vector<double> b_samples_;
  std::vector<Complex> f_coeffs_;
  std::optional<double> loaded_b_, loaded_f_;
};

struct Propagators {
  std::vector<Complex> full, half;
};

Propagators propagators(const Grid& grid, double dt) {
  Propagators p{std::vector<Complex>(grid.size()), std::vector<Complex>(grid.size())};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double w = grid.is_nyquist(j) ? 0.0 : omega(grid.xi(j));
    p.full[j] = std::polar(1.0, -w * dt);
    p.half[j] = std::polar(1.0, -0.5 * w * dt);
  }
  return p;
}

}  // namespace

double hamiltonian(const SpectralField& u) {
  const Grid& g = u.grid();
  double quad = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) quad += std::abs(g.xi(j)) * std::norm(u.coeffs()[j]);
  double cubic = 0.0;
  for (double v : u.samples()) cubic += v * v * v;
  return 0.5 * g.length() * quad + cubic * g.spacing() / 3.0;
}

Diagnostics diagnose(const SpectralField& u, const std::vector<double>& sobolev_s) {
  Diagnostics d{u.integral(), std::pow(u.l2_norm(), 2), hamiltonian(u), {}};
  for (double s : sobolev_s) d.sobolev.push_back(sobolev_norm(u, s).value);
  return d;
}

SolutionTrajectory solve(const SpectralField& u0, const BackgroundSpec& background,
                         const ForcingSpec& forcing, const SolverConfig& config) {
  config.validate();
  const Grid& grid = config.grid;
  if (!(u0.grid() == grid) || !(background.grid() == grid)) {
    throw ValidationError("solve: grid mismatch between data, background and config");
  }
  for (double v : u0.samples()) {
    if (!std::isfinite(v)) throw ValidationError("initial data has non-finite samples");
  }
  if (background.time_dependent() && background.final_time() < config.t_final * (1.0 - 1e-12)) {
    throw ValidationError("evolving background does not cover [0, t_final]");
  }

  const std::size_t steps =
      static_cast<std::size_t>(std::ceil(config.t_final / config.dt - 1e-9));
  const double dt = config.t_final / static_cast<double>(steps);
  const double dx = grid.spacing();
  Tendency tendency(grid, background, forcing, config.dealias);
  const double bmax = tendency.max_background();
  const double u0max = u0.max_abs();
  if (dt > config.cfl * dx / (1.0 + u0max + bmax)) {
    std::ostringstream os;
    os << "dt = " << dt << " violates the CFL heuristic dt <= "
       << config.cfl * dx / (1.0 + u0max + bmax) << " at t = 0";
    throw ValidationError(os.str());
  }

  SolutionTrajectory traj;
  traj.diagnostic_s = config.diagnostic_s;
  traj.dt_schedule.push_back({0.0, dt});
  auto record = [&](double t, const std::vector<Complex>& c) {
    SpectralField f = SpectralField::from_coeffs(grid, c);
    traj.diagnostics.push_back(diagnose(f, config.diagnostic_s));
    traj.times.push_back(t);
    traj.fields.push_back(std::move(f));
  };

  std::vector<Complex> c(u0.coeffs().begin(), u0.coeffs().end());
  record(0.0, c);

  const std::size_t m = grid.size();
  std::vector<Complex> ka(m), kb(m), kc(m), kd(m), stage(m), next(m);
  std::size_t substeps = 1;
  Propagators prop = propagators(grid, dt);

  for (std::size_t n = 0; n < steps; ++n) {
    const double t_macro = dt * static_cast<double>(n);
    for (std::size_t s = 0; s < substeps; ++s) {
      const double h = dt / static_cast<double>(substeps);
      const double t = t_macro + h * static_cast<double>(s);
      double umax = tendency(c, t, ka);
      if (!std::isfinite(umax) || umax > kBlowUpThreshold) {
        std::ostringstream os;
        os << "blow-up guard: max|u| = " << umax << " at t = " << t;
        throw BlowUpError(os.str(), t, traj.fields.back());
      }
      if (h > config.cfl * dx / (1.0 + umax + bmax)) {
        // Halve until the heuristic holds; finish this macro step on the finer lattice.
        std::size_t factor = 1;
        double hh = h;
        while (hh > config.cfl * dx / (1.0 + umax + bmax)) {
          hh *= 0.5;
          factor *= 2;
          if (factor > (std::size_t{1} << 20)) {
            throw BlowUpError("CFL halving exhausted", t, traj.fields.back());
          }
        }
        substeps *= factor;
        s = s * factor;
        prop = propagators(grid, hh);
        traj.dt_schedule.push_back({t, hh});
      }
      const double hs = dt / static_cast<double>(substeps);
      const auto& e = prop.full;
      const auto& eh = prop.half;
      for (std::size_t j = 0; j < m; ++j) stage[j] = eh[j] * (c[j] + 0.5 * hs * ka[j]);
      tendency(stage, t + 0.5 * hs, kb);
      for (std::size_t j = 0; j < m; ++j) stage[j] = eh[j] * c[j] + 0.5 * hs * kb[j];
      tendency(stage, t + 0.5 * hs, kc);
      for (std::size_t j = 0; j < m; ++j) stage[j] = e[j] * c[j] + hs * eh[j] * kc[j];
      tendency(stage, t + hs, kd);
      bool finite = true;
      for (std::size_t j = 0; j < m; ++j) {
        next[j] = e[j] * c[j] +
                  hs / 6.0 * (e[j] * ka[j] + 2.0 * eh[j] * (kb[j] + kc[j]) + kd[j]);
        finite = finite && std::isfinite(next[j].real()) && std::isfinite(next[j].imag());
      }
      if (!finite) {
        std::ostringstream os;
        os << "blow-up guard: non-finite coefficient after t = " << t;
        throw BlowUpError(os.str(), t, traj.fields.back());
      }
      c.swap(next);
    }
    if ((n + 1) % config.snapshot_stride == 0 || n + 1 == steps) {
      record(n + 1 == steps ? config.t_final : dt * static_cast<double>(n + 1), c);
    }
  }
  const double final_max = traj.fields.back().max_abs();
  if (!std::isfinite(final_max) || final_max > kBlowUpThreshold) {
    throw BlowUpError("blow-up guard: final state exceeds threshold", config.t_final,
                      traj.fields.back());
  }
  return traj;
}

SolutionTrajectory solve(const SpectralField& u0, const SolverConfig& config) {
  const BackgroundSpec b = BackgroundSpec::zero(u0.grid());
  const ForcingSpec f = ForcingSpec::zero(u0.grid());
  return solve(u0, b, f, config);
}

ConvergenceReport temporal_self_convergence(const SpectralField& u0, const SolverConfig& config) {
  ConvergenceReport rep{std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, false, ""};
  std::vector<SpectralField> finals;
  try {
    for (double div : {1.0, 2.0, 4.0}) {
      SolverConfig cfg = config;
      cfg.dt = config.dt / div;
      cfg.snapshot_stride = std::numeric_limits<std::size_t>::max() / 2;
      finals.push_back(solve(u0, cfg).final_field());
    }
  } catch (const NumericalError& e) {
    rep.reason = std::string("guard triggered: ") + e.what();
    return rep;
  } catch (const ValidationError& e) {
    rep.reason = std::string("under-resolved: ") + e.what();
    return rep;
  }
  rep.error_coarse = (finals[0] - finals[1]).l2_norm();
  rep.error_fine = (finals[1] - finals[2]).l2_norm();
  const double floor = 1e-13 * std::max(1.0, finals[2].l2_norm());
  if (rep.error_coarse <= floor) {
    rep.reason = "machine floor";
    return rep;
  }
  if (!(rep.error_fine < rep.error_coarse)) {
    rep.reason = "non-monotone errors: under-resolved";
    return rep;
  }
  rep.order = std::log2(rep.error_coarse / rep.error_fine);
  rep.valid = true;
  rep.reason = "ok";
  return rep;
}

BackgroundSpec evolve_background(const SpectralField& b0, double t_final, double step) {
  SolverConfig cfg{b0.grid(), step, t_final};
  cfg.snapshot_stride = 1;
  cfg.diagnostic_s = {};
  SolutionTrajectory traj = solve(b0, cfg);
  const double h = t_final / static_cast<double>(traj.fields.size() - 1);
  return BackgroundSpec::periodic_evolving(std::move(traj.fields), h);
}

SpectralField periodic_travelling_wave(const Grid& grid, double c, double x0) {
  if (!(c > 0.0)) throw ValidationError("travelling wave parameter must be positive");
  const double kappa = 2.0 * std::numbers::pi / grid.length();
  const double a = kappa / c;
  return SpectralField::from_function(grid, [=](double x) {
    return -kappa * std::sinh(a) / (std::cosh(a) - std::cos(kappa * (x - x0)));
  });
}

double periodic_travelling_wave_speed(double length, double c) {
  const double kappa = 2.0 * std::numbers::pi / length;
  return -kappa / std::tanh(kappa / c);
}

double travelling_wave_residual(const SpectralField& u, double speed) {
  const SpectralField zero = SpectralField::zero(u.grid());
  const SpectralField ux = derivative(u);
  return (rhs_forced(u, zero, zero) + ux * speed).l2_norm() / ux.l2_norm();
}

}  // namespace bolab
