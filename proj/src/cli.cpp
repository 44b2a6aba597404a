#include "bolab/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "bolab/config.hpp"
#include "bolab/dyadic_convolution.hpp"
#include "bolab/errors.hpp"
#include "bolab/experiments.hpp"
#include "bolab/io.hpp"
#include "bolab/littlewood_paley.hpp"
#include "bolab/parallel.hpp"
#include "bolab/resonance.hpp"

namespace bolab {

namespace {

// Whole lines go out in a single write so concurrent output never interleaves.
void say(std::ostream& out, const std::string& line) {
  out << (line + "\n") << std::flush;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void summarize(std::ostream& out, const ExperimentReport& rep) {
  for (const auto& c : rep.checks) {
    say(out, std::string(c.passed ? "PASS " : "FAIL ") + rep.id + " " + c.name + " = " +
                 format_double(c.value) + " " + c.relation + " " + format_double(c.limit));
  }
}

void write_report(std::ostream& out, const ExperimentReport& rep, const std::string& dir) {
  write_directory_atomic(dir, report_files(rep));
  summarize(out, rep);
  say(out, "wrote " + dir);
}

int cmd_solve(const std::string& config_path, const std::string& out_dir, std::ostream& out) {
  RunConfig cfg = parse_config(read_text(config_path));
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  const auto background = make_background(cfg);
  const ForcingSpec forcing = make_forcing(cfg, background);
  const SolutionTrajectory traj =
      solve(make_initial(cfg), *background, forcing, make_solver_config(cfg));
  write_directory_atomic(cfg.output_dir, trajectory_files(traj, make_grid(cfg),
                                                          serialize_config(cfg), cfg.seed));
  const Diagnostics& first = traj.diagnostics.front();
  const Diagnostics& last = traj.diagnostics.back();
  say(out, "snapshots " + std::to_string(traj.times.size()) + ", dt changes " +
               std::to_string(traj.dt_schedule.size() - 1));
  say(out, "mass " + format_double(first.mass) + " -> " + format_double(last.mass));
  say(out, "hamiltonian " + format_double(first.hamiltonian) + " -> " +
               format_double(last.hamiltonian));
  say(out, "wrote " + cfg.output_dir);
  return kExitOk;
}

int cmd_resonance(std::size_t samples, std::uint64_t seed, long k_max, const std::string& path,
                  std::ostream& out) {
  if (samples == 0) throw ValidationError("--samples must be positive");
  if (!is_dyadic(k_max) || k_max < 2) throw ValidationError("--k-max must be a power of two >= 2");
  const auto rows = resonance_sweep(res3_profile_family(k_max), samples, seed);
  write_file_atomic(path, resonance_sweep_csv(rows));
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.stats.min_ratio);
    hi = std::max(hi, r.stats.max_ratio);
  }
  say(out, "profiles " + std::to_string(rows.size()) + ", |Omega_3|/(K1* K3*) in [" +
               format_double(lo) + ", " + format_double(hi) + "], C/c = " +
               format_double(hi / lo));
  const auto id3 = check_omega3_identity(samples, seed);
  const auto id4 = check_omega4_identity(samples, seed, +1.0);
  say(out, "Omega_3 = 2 xi2 xi3: max relative error " + format_double(id3.max_relative_error));
  say(out, "Omega_4 = 2 (xi2 xi3 - xi14 xi4): max relative error " +
               format_double(id4.max_relative_error));
  say(out, "wrote " + path);
  return kExitOk;
}

int cmd_convolution(const std::string& lemma, long k_max, long l_max, double resolution,
                    const std::string& path, std::ostream& out) {
  if (k_max < 1 || l_max < 1) throw ValidationError("--k-max and --l-max must be >= 1");
  if (!(resolution >= 1.0)) throw ValidationError("--resolution must be >= 1");
  using Sweep = std::function<std::vector<ConvolutionSweepRow>(long, long, double)>;
  const std::vector<std::pair<std::string, Sweep>> all = {
      {"pair", sweep_pair}, {"triple", sweep_triple}, {"quad", sweep_quad},
      {"bounded", sweep_bounded}};
  std::vector<ConvolutionSweepRow> rows;
  bool matched = false;
  for (const auto& [name, sweep] : all) {
    if (lemma != "all" && lemma != name) continue;
    matched = true;
    const auto part = sweep(k_max, l_max, resolution);
    say(out, name + ": " + std::to_string(part.size()) + " rows, max ratio " +
                 format_double(max_ratio(part)));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (!matched) throw ValidationError("--lemma must be all, pair, triple, quad or bounded");
  write_file_atomic(path, convolution_sweep_csv(rows));
  say(out, "wrote " + path);
  return kExitOk;
}

int cmd_norms(const std::string& config_path, const std::string& path, std::ostream& out) {
  const RunConfig cfg = parse_config(read_text(config_path));
  const SpectralField u0 = make_initial(cfg);
  std::string csv = NormReport::csv_header();
  for (double s : cfg.norms_s) {
    const NormReport h = sobolev_norm(u0, s);
    const NormReport b = besov_sup_norm(u0, s);
    csv += h.to_csv_rows() + b.to_csv_rows();
    say(out, "H^" + format_double(s) + " " + format_double(h.value) + ", B^" + format_double(s) +
                 "_inf,inf " + format_double(b.value));
  }
  write_file_atomic(path, csv);
  say(out, "wrote " + path);
  return kExitOk;
}

}  // namespace

bool run_selftest(std::ostream& out) {
  bool all = true;
  auto check = [&](const std::string& name, bool ok, double value) {
    all = all && ok;
    say(out, std::string(ok ? "ok   " : "FAIL ") + name + " (" + format_double(value) + ")");
  };
  const double pi = std::numbers::pi;
  const Grid g(64, 2.0 * pi);

  const auto c3 = SpectralField::from_function(g, [](double x) { return std::cos(3.0 * x); });
  const double coeff_err = std::max(std::abs(c3.coeffs()[3] - Complex(0.5, 0.0)),
                                    std::abs(c3.coeffs()[61] - Complex(0.5, 0.0)));
  check("fft cos(3x) -> 1/2 at k = +-3", coeff_err < 1e-14, coeff_err);

  const auto cos1 = SpectralField::from_function(g, [](double x) { return std::cos(x); });
  const auto sin1 = SpectralField::from_function(g, [](double x) { return std::sin(x); });
  const double hilbert_err = (hilbert_transform(cos1) - sin1).max_abs();
  check("H cos = sin", hilbert_err < 1e-13, hilbert_err);

  const double prop_err = (free_propagator(c3, 0.0) - c3).max_abs();
  check("free propagator at t = 0 is the identity", prop_err < 1e-15, prop_err);

  const std::array<double, 3> t3 = {3.0, -2.0, -1.0};
  const std::array<double, 4> t4 = {3.0, -1.0, -1.0, -1.0};
  const std::array<double, 4> t4z = {1.0, 1.0, -1.0, -1.0};
  check("Omega_3(3,-2,-1) = 4", omega_n(t3) == 4.0, omega_n(t3));
  check("Omega_4(3,-1,-1,-1) = 6", omega_n(t4) == 6.0, omega_n(t4));
  check("Omega_4(1,1,-1,-1) = 0", omega_n(t4z) == 0.0, omega_n(t4z));

  double unity_err = 0.0;
  for (double xi : {0.0, 0.7, 1.3, 3.1, 17.0, 250.5}) {
    double sum = 0.0;
    for (long k = 1; k <= 1024; k *= 2) sum += chi(k, xi);
    unity_err = std::max(unity_err, std::abs(sum - 1.0));
  }
  check("sum_K chi_K = 1", unity_err < 1e-15, unity_err);

  const auto rough = random_smooth_field(g, 20, 0.5, 1.0, 7);
  SpectralField recon = SpectralField::zero(g);
  for (long k : dyadic_bands(g)) recon = recon + project_band(rough, k);
  const double recon_err = (recon - rough).max_abs();
  check("sum_K P_K f = f", recon_err < 1e-13, recon_err);

  const std::array<ModulationRegion, 3> regions = {ModulationRegion(1, 16),
                                                   ModulationRegion(1, 8),
                                                   ModulationRegion(1, 8)};
  const auto grid = SpaceTimeGrid::for_regions(regions, 4);
  const auto p1 = LocalizedDensity::generate(grid, regions[0], 1, DensityStyle::kRandom);
  const auto p2 = LocalizedDensity::generate(grid, regions[1], 2, DensityStyle::kRandom);
  const auto p3 = LocalizedDensity::generate(grid, regions[2], 3, DensityStyle::kRandom);
  const double triple = triple_at_origin(p1, p2, p3).value;
  check("triple convolution vanishes for L1* << K1* K3*",
        vanishing_predicted(regions) && triple == 0.0, triple);

  const RunConfig cfg;
  const std::string text = serialize_config(cfg);
  check("config parse(serialize) round trip", serialize_config(parse_config(text)) == text, 0.0);

  SolverConfig sc{g, 1e-3, 0.05};
  sc.diagnostic_s = {};
  const auto traj = solve(gaussian(g, 1.0, pi, 0.5), sc);
  const double mass_drift =
      std::abs(traj.diagnostics.back().mass - traj.diagnostics.front().mass);
  check("mass conserved by the unforced solver", mass_drift < 1e-12, mass_drift);

  const Grid wide(1024, 16.0 * pi);
  const double speed = periodic_travelling_wave_speed(wide.length(), 1.0);
  const double residual =
      travelling_wave_residual(periodic_travelling_wave(wide, 1.0, 8.0 * pi), speed);
  check("travelling wave residual", residual < 1e-8, residual);
  return all;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Benjamin-Ono numerical laboratory", "bo_lab"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  auto* solve_cmd = app.add_subcommand("solve", "integrate a run config, export the trajectory");
  solve_cmd->add_option("--config", config_path, "run config file")->required();
  solve_cmd->add_option("--out", out_path, "output directory (overrides output_dir)");

  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  long k_max = 1024;
  std::string res_out = "resonance.csv";
  auto* res_cmd =
      app.add_subcommand("verify-resonance", "two-sided Omega_3 bound sweep and exact identities");
  res_cmd->add_option("--samples", samples, "samples per profile");
  res_cmd->add_option("--seed", seed, "seed");
  res_cmd->add_option("--k-max", k_max, "largest dyadic K");
  res_cmd->add_option("--out", res_out, "CSV output file");

  std::string lemma = "all", conv_out = "convolution.csv";
  long conv_k = 8, conv_l = 1024;
  double resolution = 8.0;
  auto* conv_cmd = app.add_subcommand("verify-convolution", "dyadic convolution estimate sweeps");
  conv_cmd->add_option("--lemma", lemma, "all | pair | triple | quad | bounded");
  conv_cmd->add_option("--k-max", conv_k, "largest K on the K line");
  conv_cmd->add_option("--l-max", conv_l, "largest L on the L lines");
  conv_cmd->add_option("--resolution", resolution, "lattice points per thinnest extent");
  conv_cmd->add_option("--out", conv_out, "CSV output file");

  std::string norms_config, norms_out = "norms.csv";
  auto* norms_cmd = app.add_subcommand("norms", "dyadic Sobolev and Besov profiles of the initial data");
  norms_cmd->add_option("--config", norms_config, "run config file")->required();
  norms_cmd->add_option("--out", norms_out, "CSV output file");

  std::string split_background = "bore", split_out = "splitting_out";
  auto* split_cmd = app.add_subcommand("splitting", "direct vs split solve consistency");
  split_cmd->add_option("--background", split_background, "bore | periodic");
  split_cmd->add_option("--out", split_out, "output directory");

  BonaSmithParams bs;
  std::string bs_out = "bona_smith_out";
  auto* bs_cmd = app.add_subcommand("bona-smith", "frequency-truncation convergence");
  bs_cmd->add_option("--seed", bs.seed, "seed");
  bs_cmd->add_option("--out", bs_out, "output directory");

  WeakLipschitzParams lip;
  std::string lip_out = "lipschitz_out";
  auto* lip_cmd = app.add_subcommand("lipschitz", "weak Lipschitz dependence in H^{-1/2}");
  lip_cmd->add_option("--seed", lip.seed, "seed");
  lip_cmd->add_option("--pairs", lip.pairs, "number of random data pairs");
  lip_cmd->add_option("--out", lip_out, "output directory");

  std::string mat_out = "matsuno_out";
  auto* mat_cmd = app.add_subcommand("matsuno", "flow over compact topography");
  mat_cmd->add_option("--out", mat_out, "output directory");

  auto* self_cmd = app.add_subcommand("selftest", "fast invariant suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitValidation;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(config_path, out_path, out);
    if (res_cmd->parsed()) return cmd_resonance(samples, seed, k_max, res_out, out);
    if (conv_cmd->parsed()) {
      return cmd_convolution(lemma, conv_k, conv_l, resolution, conv_out, out);
    }
    if (norms_cmd->parsed()) return cmd_norms(norms_config, norms_out, out);
    if (split_cmd->parsed()) {
      if (split_background == "bore") {
        write_report(out, bore_splitting(BoreSplittingParams{}), split_out);
      } else if (split_background == "periodic") {
        write_report(out, periodic_plus_decaying(PeriodicSplittingParams{}), split_out);
      } else {
        throw ValidationError("--background must be bore or periodic");
      }
      return kExitOk;
    }
    if (bs_cmd->parsed()) {
      write_report(out, bona_smith(bs), bs_out);
      return kExitOk;
    }
    if (lip_cmd->parsed()) {
      write_report(out, weak_lipschitz(lip), lip_out);
      return kExitOk;
    }
    if (mat_cmd->parsed()) {
      write_report(out, matsuno_run(MatsunoParams{}), mat_out);
      return kExitOk;
    }
    if (self_cmd->parsed()) return run_selftest(out) ? kExitOk : kExitNumerical;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical guard: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace bolab
