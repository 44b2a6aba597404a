#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bolab/background.hpp"
#include "bolab/errors.hpp"
#include "bolab/spectral.hpp"

namespace bolab {

struct SolverConfig {
  Grid grid;
  double dt;
  double t_final;
  std::size_t snapshot_stride = 1;
  bool dealias = true;
  double cfl = 0.5;
  /// Sobolev indices recorded in the diagnostics.
  std::vector<double> diagnostic_s = {1.0};

  void validate() const;
};

struct Diagnostics {
  double mass;
  double momentum;
  double hamiltonian;
  std::vector<double> sobolev;
};

struct DtChange {
  double time;
  double dt;
};

struct SolutionTrajectory {
  std::vector<double> times;
  std::vector<SpectralField> fields;
  std::vector<Diagnostics> diagnostics;
  std::vector<DtChange> dt_schedule;
  std::vector<double> diagnostic_s;

  const SpectralField& final_field() const { return fields.back(); }
};

/// Raised by the blow-up guard; carries the last finite state.
class BlowUpError : public NumericalError {
 public:
  BlowUpError(const std::string& what, double time, SpectralField snapshot)
      : NumericalError(what), time_(time), snapshot_(std::make_shared<SpectralField>(std::move(snapshot))) {}
  double time() const { return time_; }
  const SpectralField& snapshot() const { return *snapshot_; }

 private:
  double time_;
  std::shared_ptr<SpectralField> snapshot_;
};

inline constexpr double kBlowUpThreshold = 1e6;

/// u_t = -H u_xx - d_x(u^2 + 2 u b) - f with dealiased products. The factor 2
/// makes phi = u + b solve the unforced equation when f = f_b.
SpectralField rhs_forced(const SpectralField& u, const SpectralField& b, const SpectralField& f,
                         bool dealias = true);

/// Integrating-factor RK4 for u_t = rhs_forced(u, b(t), f(t)). The dispersive
/// part is integrated exactly; dt halves whenever the CFL heuristic
/// dt <= cfl * dx / (1 + max|u| + max|b|) fails, keeping snapshot times on the
/// original lattice.
SolutionTrajectory solve(const SpectralField& u0, const BackgroundSpec& background,
                         const ForcingSpec& forcing, const SolverConfig& config);
/// Unforced equation (b = 0, f = 0).
SolutionTrajectory solve(const SpectralField& u0, const SolverConfig& config);

/// E[u] = int (1/2) u H(u_x) + (1/3) u^3 dx.
double hamiltonian(const SpectralField& u);
Diagnostics diagnose(const SpectralField& u, const std::vector<double>& sobolev_s);

struct ConvergenceReport {
  double order;
  double error_coarse;  // ||u_dt - u_dt/2||
  double error_fine;    // ||u_dt/2 - u_dt/4||
  bool valid;
  std::string reason;
};

/// Richardson estimate from runs at dt, dt/2, dt/4 of the unforced equation.
ConvergenceReport temporal_self_convergence(const SpectralField& u0, const SolverConfig& config);

/// Solves the unforced equation from b0 with step `step`, storing every step,
/// and wraps the result as an evolving background.
BackgroundSpec evolve_background(const SpectralField& b0, double t_final, double step);

/// Periodic travelling wave -kappa sinh(a)/(cosh a - cos(kappa (x - x0))),
/// kappa = 2 pi/length, a = kappa/c; it approaches the line soliton of
/// parameter c as length grows.
SpectralField periodic_travelling_wave(const Grid& grid, double c, double x0);
/// Its propagation speed, -kappa coth(a).
double periodic_travelling_wave_speed(double length, double c);

/// ||rhs(u) + speed u_x|| / ||u_x||: zero for an exact travelling wave.
double travelling_wave_residual(const SpectralField& u, double speed);

}  // namespace bolab
