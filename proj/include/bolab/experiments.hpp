#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bolab/background.hpp"
#include "bolab/solver.hpp"

namespace bolab {

struct Check {
  std::string name;
  double value;
  double limit;
  /// "<", "<=", ">", ">=".
  std::string relation;
  bool passed;
};

struct ExperimentReport {
  std::string id;
  std::map<std::string, std::string> inputs;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<Check> checks;

  void add_input(const std::string& key, double value);
  void add_input(const std::string& key, const std::string& value);
  void add_scalar(const std::string& key, double value);
  void add_check(const std::string& name, double value, const std::string& relation,
                 double limit);
  double scalar(const std::string& key) const;
  bool passed() const;

  std::string to_json() const;
  std::string series_csv() const;
};

/// Random real field with |c_k| = <k>^{-decay} on 1 <= |k| <= k_max and
/// uniform phases, scaled to the requested L2 norm.
SpectralField random_smooth_field(const Grid& grid, long k_max, double decay, double l2_norm,
                                  std::uint64_t seed);

/// Gaussian amplitude * exp(-((x - center)/width)^2).
SpectralField gaussian(const Grid& grid, double amplitude, double center, double width);

/// Direct solve from phi0 = b0 + u0 against the split solve of the forced
/// equation for u with f = f_b; reports sup_t ||phi_A - (b + u_B)||_{L2} over
/// the box and over the readout window.
ExperimentReport splitting_consistency(const SpectralField& u0, const BackgroundSpec& background,
                                       const SolverConfig& config);

struct BoreSplittingParams {
  double c_minus = -1.0;
  double c_plus = 1.0;
  double steepness = 1.0;
  double length = 320.0;
  std::size_t num_points = 4096;
  double bump_amplitude = 0.5;
  double bump_width = 4.0;
  double dt = 0.01;
  double t_final = 0.5;
  /// Also run at (2M, dt/2) and report the discrepancy ratio.
  bool refine = true;
};

ExperimentReport bore_splitting(const BoreSplittingParams& params);

struct PeriodicSplittingParams {
  double length = 64.0;
  double period = 8.0;
  double amplitude = 0.3;
  std::size_t num_points = 512;
  double bump_amplitude = 1.0;
  double bump_width = 2.0;
  double dt = 0.02;
  double t_final = 1.0;
  bool refine = true;
};

/// Torus-evolved periodic background plus decaying perturbation: evolves b by
/// the unforced solver with step dt/2, checks the f_b residual against a
/// Richardson estimate from a dt/4 trajectory, then compares the split solve
/// against the direct solve.
ExperimentReport periodic_plus_decaying(const PeriodicSplittingParams& params);

struct BonaSmithParams {
  double length = 6.283185307179586;
  std::size_t num_points = 1024;
  double sigma_data = 2.0;
  double s = 0.6;
  /// Synthesized spectrum is supported in |xi| <= (5/4) reference_band so that
  /// P_{<= reference_band} u0 = u0.
  long reference_band = 128;
  std::vector<long> bands = {4, 8, 16, 32, 64};
  double l2_norm = 1.0;
  double dt = 1e-3;
  double t_final = 0.25;
  std::size_t snapshot_stride = 25;
  std::uint64_t seed = 20240601;
};

/// Solves from P_{<=N} u0 and from the reference data; fits the sup_t H^s
/// error against N by least squares on the interior N (endpoints excluded)
/// and compares with ||P_{>N} u0||_{H^s} computed from the spectrum.
ExperimentReport bona_smith(const BonaSmithParams& params);

struct WeakLipschitzParams {
  double length = 6.283185307179586;
  std::size_t num_points = 256;
  std::size_t pairs = 20;
  long k_max = 12;
  double decay = 1.5;
  double delta = 1e-2;
  double dt = 2e-3;
  double t_final = 0.5;
  std::size_t snapshot_stride = 5;
  std::uint64_t seed = 4242;
};

/// max over pairs of sup_t ||u1 - u2||_{H^{-1/2}} / ||u1(0) - u2(0)||_{H^{-1/2}}
/// for unit-L2 data u1(0) and u2(0) = u1(0) + delta p, ||p||_{H^{-1/2}} = 1.
ExperimentReport weak_lipschitz(const WeakLipschitzParams& params);

struct MatsunoParams {
  double length = 40.0;
  std::size_t num_points = 512;
  double center = 20.0;
  double width = 4.0;
  double amplitude = 0.05;
  std::vector<double> etas = {1e-2, 1e-3};
  double dt = 5e-3;
  double t_final = 2.0;
  std::size_t snapshot_stride = 20;
};

/// Run over a compact bump with u0 = 0, a second run at twice the amplitude
/// (linearity defect), and continuity probes f + eta q with sup|q| = 1.
ExperimentReport matsuno_run(const MatsunoParams& params);

}  // namespace bolab
