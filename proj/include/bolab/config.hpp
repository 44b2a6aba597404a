#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bolab/background.hpp"
#include "bolab/solver.hpp"

namespace bolab {

/// Run configuration for the `solve` subcommand. Text form: `key = value`
/// lines, `[section]` headers, `#` comments. Keys that do not apply to the
/// selected `kind` of a section are rejected like unknown keys.
struct RunConfig {
  std::string experiment = "solve";
  std::uint64_t seed = 1;
  std::string output_dir = "bo_lab_out";

  struct GridSection {
    std::size_t num_points = 512;
    double length = 6.283185307179586;
  } grid;

  /// kind: zero | gaussian | random | travelling_wave.
  struct InitialSection {
    std::string kind = "gaussian";
    double amplitude = 1.0;
    double center = 3.141592653589793;
    double width = 0.5;
    long k_max = 12;
    double decay = 1.5;
    double l2_norm = 1.0;
    double speed = 1.0;
    double x0 = 0.0;
  } initial;

  /// kind: zero | bore | periodic_static | periodic_evolving | zhidkov.
  struct BackgroundSection {
    std::string kind = "zero";
    double c_minus = -1.0;
    double c_plus = 1.0;
    double steepness = 1.0;
    double constant = 0.0;
    std::vector<FourierMode> modes;
    /// Trajectory step of periodic_evolving.
    double step = 0.005;
    double s = 1.0;
    double amplitude = 0.1;
    long k_max = 8;
  } background;

  /// kind: zero | derived | topography.
  struct ForcingSection {
    std::string kind = "zero";
    double center = 3.141592653589793;
    double width = 1.0;
    double amplitude = 0.05;
  } forcing;

  struct SolverSection {
    double dt = 1e-3;
    double t_final = 1.0;
    std::size_t snapshot_stride = 10;
    bool dealias = true;
    double cfl = 0.5;
  } solver;

  /// Sobolev indices reported in diagnostics.
  std::vector<double> norms_s = {0.5, 1.0};
};

/// Throws ValidationError: "line N: ..." for syntax and unknown keys,
/// "<section>.<key>: ..." for field validation.
RunConfig parse_config(const std::string& text);
/// Canonical form: fixed section and key order, shortest round-trip numbers,
/// only keys that apply to each section's kind.
std::string serialize_config(const RunConfig& config);
/// Field validation shared by the parser and programmatic construction.
void validate_config(const RunConfig& config);

Grid make_grid(const RunConfig& config);
SpectralField make_initial(const RunConfig& config);
/// periodic_evolving backgrounds are evolved by the unforced solver up to t_final.
std::shared_ptr<const BackgroundSpec> make_background(const RunConfig& config);
ForcingSpec make_forcing(const RunConfig& config,
                         const std::shared_ptr<const BackgroundSpec>& background);
SolverConfig make_solver_config(const RunConfig& config);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace bolab
