#include "bolab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "bolab/errors.hpp"
#include "bolab/littlewood_paley.hpp"
#include "bolab/parallel.hpp"
#include "bolab/random.hpp"

namespace bolab {

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double window_l2(const SpectralField& f) {
  const auto [lo, hi] = readout_window(f.grid());
  const Grid& g = f.grid();
  double s = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    if (x >= lo && x <= hi) s += f.samples()[j] * f.samples()[j];
  }
  return std::sqrt(s * g.spacing());
}

double sobolev(const SpectralField& f, double s) { return sobolev_norm(f, s).value; }

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace

void ExperimentReport::add_input(const std::string& key, double value) {
  inputs[key] = format_number(value);
}

void ExperimentReport::add_input(const std::string& key, const std::string& value) {
  inputs[key] = value;
}

void ExperimentReport::add_scalar(const std::string& key, double value) {
  scalars.emplace_back(key, value);
}

void ExperimentReport::add_check(const std::string& name, double value,
                                 const std::string& relation, double limit) {
  bool ok = false;
  if (relation == "<") ok = value < limit;
  else if (relation == "<=") ok = value <= limit;
  else if (relation == ">") ok = value > limit;
  else if (relation == ">=") ok = value >= limit;
  else throw ValidationError("unknown check relation " + relation);
  checks.push_back({name, value, limit, relation, ok});
}

double ExperimentReport::scalar(const std::string& key) const {
  for (const auto& [k, v] : scalars) {
    if (k == key) return v;
  }
  throw ValidationError("report " + id + " has no scalar " + key);
}

bool ExperimentReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["inputs"] = inputs;
  auto& sc = j["scalars"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : scalars) sc[k] = v;
  auto& ch = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    ch.push_back({{"name", c.name},
                  {"value", c.value},
                  {"relation", c.relation},
                  {"limit", c.limit},
                  {"passed", c.passed}});
  }
  j["passed"] = passed();
  j["series_columns"] = columns;
  return j.dump(2) + "\n";
}

std::string ExperimentReport::series_csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_number(r[i]);
    os << '\n';
  }
  return os.str();
}

SpectralField random_smooth_field(const Grid& grid, long k_max, double decay, double l2_norm,
                                  std::uint64_t seed) {
  if (k_max < 1 || 3 * k_max > static_cast<long>(grid.size())) {
    throw ValidationError("random field k_max must lie in [1, M/3]");
  }
  Rng rng(seed);
  std::vector<Complex> c(grid.size(), Complex(0.0, 0.0));
  for (long k = 1; k <= k_max; ++k) {
    const double mag = std::pow(1.0 + static_cast<double>(k * k), -0.5 * decay);
    const Complex v = std::polar(mag, 2.0 * std::numbers::pi * rng.uniform());
    c[grid.index_of_mode(k)] = v;
    c[grid.index_of_mode(-k)] = std::conj(v);
  }
  SpectralField f = SpectralField::from_coeffs(grid, std::move(c));
  return f * (l2_norm / f.l2_norm());
}

SpectralField gaussian(const Grid& grid, double amplitude, double center, double width) {
  return SpectralField::from_function(grid, [=](double x) {
    const double y = (x - center) / width;
    return amplitude * std::exp(-y * y);
  });
}

ExperimentReport splitting_consistency(const SpectralField& u0, const BackgroundSpec& background,
                                       const SolverConfig& config) {
  const auto b = std::make_shared<const BackgroundSpec>(background);
  const ForcingSpec f = ForcingSpec::derived(b);
  const SpectralField phi0 = background.at(0.0) + u0;
  const SolutionTrajectory direct = solve(phi0, config);
  const SolutionTrajectory split = solve(u0, *b, f, config);
  if (direct.times.size() != split.times.size()) {
    throw NumericalError("splitting: branches recorded different snapshot times");
  }
  ExperimentReport rep;
  rep.id = "splitting";
  rep.add_input("background", to_string(background.kind()));
  rep.add_input("num_points", static_cast<double>(config.grid.size()));
  rep.add_input("length", config.grid.length());
  rep.add_input("dt", config.dt);
  rep.add_input("t_final", config.t_final);
  rep.columns = {"t", "discrepancy_l2", "discrepancy_window_l2"};
  double sup = 0.0, sup_window = 0.0;
  for (std::size_t i = 0; i < direct.times.size(); ++i) {
    const double t = direct.times[i];
    const SpectralField diff = direct.fields[i] - (background.at(t) + split.fields[i]);
    const double e = diff.l2_norm(), ew = window_l2(diff);
    sup = std::max(sup, e);
    sup_window = std::max(sup_window, ew);
    rep.rows.push_back({t, e, ew});
  }
  rep.add_scalar("discrepancy", sup);
  rep.add_scalar("discrepancy_window", sup_window);
  rep.add_scalar("phi_final_l2", direct.final_field().l2_norm());
  return rep;
}

namespace {

ExperimentReport bore_case(const BoreSplittingParams& p, std::size_t m, double dt) {
  const Grid grid(m, p.length);
  const BackgroundSpec b = BackgroundSpec::bore(grid, {p.c_minus, p.c_plus, p.steepness});
  const SpectralField u0 = gaussian(grid, p.bump_amplitude, 0.5 * p.length, p.bump_width);
  SolverConfig cfg{grid, dt, p.t_final};
  cfg.snapshot_stride = 1;
  cfg.diagnostic_s = {};
  return splitting_consistency(u0, b, cfg);
}

void merge_refinement(ExperimentReport& rep, const ExperimentReport& fine) {
  const double coarse = rep.scalar("discrepancy");
  const double f = fine.scalar("discrepancy");
  rep.add_scalar("discrepancy_refined", f);
  rep.add_scalar("refinement_ratio", coarse / f);
  rep.add_check("refinement_ratio", coarse / f, ">=", 8.0);
}

}  // namespace

ExperimentReport bore_splitting(const BoreSplittingParams& p) {
  ExperimentReport rep = bore_case(p, p.num_points, p.dt);
  rep.id = "splitting-bore";
  rep.add_input("c_minus", p.c_minus);
  rep.add_input("c_plus", p.c_plus);
  rep.add_input("steepness", p.steepness);
  rep.add_input("bump_amplitude", p.bump_amplitude);
  rep.add_input("bump_width", p.bump_width);
  rep.add_check("discrepancy", rep.scalar("discrepancy"), "<", 1e-6);
  if (p.refine) merge_refinement(rep, bore_case(p, 2 * p.num_points, 0.5 * p.dt));
  return rep;
}

namespace {

struct PeriodicCase {
  ExperimentReport report;
  double residual;
  double tolerance;
};

PeriodicCase periodic_case(const PeriodicSplittingParams& p, std::size_t m, double dt) {
  const Grid grid(m, p.length);
  const double ratio = p.length / p.period;
  if (!(p.period > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw ValidationError("incommensurate periods: box length must be an integer multiple of "
                          "the background period");
  }
  const long k = std::lround(ratio);
  const BackgroundSpec b_static =
      BackgroundSpec::periodic_static(grid, 0.0, {{k, p.amplitude, 0.0}});
  const SpectralField b0 = b_static.initial();
  // Store b at every RK4 stage time of the split solve.
  const BackgroundSpec b = evolve_background(b0, p.t_final, 0.5 * dt);
  const BackgroundSpec b_half = evolve_background(b0, p.t_final, 0.25 * dt);

  // The f_b residual of the stored trajectory is pure time-discretization
  // error; its tolerance is the Richardson estimate from the step-halved
  // trajectory at the shared lattice times, plus a roundoff floor.
  double residual = 0.0, tolerance = 0.0;
  const double h = b.time_step();
  const std::size_t n = static_cast<std::size_t>(std::lround(b.final_time() / h));
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = h * static_cast<double>(i);
    const SpectralField f = forcing_from_background(b, t);
    residual = std::max(residual, f.l2_norm());
    tolerance = std::max(tolerance, (f - forcing_from_background(b_half, t)).l2_norm());
  }
  tolerance += 1e-13 * b0.l2_norm() / h;

  const SpectralField u0 = gaussian(grid, p.bump_amplitude, 0.5 * p.length, p.bump_width);
  SolverConfig cfg{grid, dt, p.t_final};
  cfg.snapshot_stride = 1;
  cfg.diagnostic_s = {};
  ExperimentReport rep = splitting_consistency(u0, b, cfg);
  return {std::move(rep), residual, tolerance};
}

}  // namespace

ExperimentReport periodic_plus_decaying(const PeriodicSplittingParams& p) {
  PeriodicCase c = periodic_case(p, p.num_points, p.dt);
  ExperimentReport rep = std::move(c.report);
  rep.id = "splitting-periodic";
  rep.add_input("period", p.period);
  rep.add_input("amplitude", p.amplitude);
  rep.add_input("bump_amplitude", p.bump_amplitude);
  rep.add_input("bump_width", p.bump_width);
  rep.add_scalar("forcing_residual", c.residual);
  rep.add_scalar("step_tolerance", c.tolerance);
  rep.add_check("forcing_residual", c.residual, "<=", 10.0 * c.tolerance);
  rep.add_check("discrepancy", rep.scalar("discrepancy"), "<", 1e-6);
  if (p.refine) merge_refinement(rep, periodic_case(p, 2 * p.num_points, 0.5 * p.dt).report);
  return rep;
}

ExperimentReport bona_smith(const BonaSmithParams& p) {
  const Grid grid(p.num_points, p.length);
  if (!is_dyadic(p.reference_band)) throw ValidationError("reference band must be dyadic");
  for (long n : p.bands) {
    if (!is_dyadic(n)) throw ValidationError("Bona-Smith bands must be dyadic");
    if (n >= p.reference_band) throw ValidationError("bands must lie below the reference band");
  }
  if (p.bands.size() < 3) throw ValidationError("rate fit needs at least three bands");
  const double xi_cut = kPlateauEdge * static_cast<double>(p.reference_band);
  if (xi_cut > grid.frequency_step() * static_cast<double>(grid.size()) / 3.0) {
    throw ValidationError("reference under-resolved: spectrum exceeds the dealiased range");
  }

  // |c_k| = <xi>^{-sigma-1/2} with random phases, |xi| <= (5/4) reference_band.
  Rng rng(p.seed);
  std::vector<Complex> c(grid.size(), Complex(0.0, 0.0));
  for (long k = 1; grid.frequency_step() * static_cast<double>(k) <= xi_cut; ++k) {
    const double xi = grid.frequency_step() * static_cast<double>(k);
    const double mag = std::pow(1.0 + xi * xi, -0.5 * (p.sigma_data + 0.5));
    const Complex v = std::polar(mag, 2.0 * std::numbers::pi * rng.uniform());
    c[grid.index_of_mode(k)] = v;
    c[grid.index_of_mode(-k)] = std::conj(v);
  }
  SpectralField u0 = SpectralField::from_coeffs(grid, std::move(c));
  u0 = u0 * (p.l2_norm / u0.l2_norm());
  const SpectralField reference_data = project_low(u0, p.reference_band);

  SolverConfig cfg{grid, p.dt, p.t_final};
  cfg.snapshot_stride = p.snapshot_stride;
  cfg.diagnostic_s = {};

  std::vector<SolutionTrajectory> runs(p.bands.size() + 1);
  parallel_for(runs.size(), [&](std::size_t i) {
    const SpectralField data =
        i == p.bands.size() ? reference_data : project_low(u0, p.bands[i]);
    runs[i] = solve(data, cfg);
  });
  const SolutionTrajectory& ref = runs.back();

  ExperimentReport rep;
  rep.id = "bona-smith";
  rep.add_input("num_points", static_cast<double>(p.num_points));
  rep.add_input("length", p.length);
  rep.add_input("sigma_data", p.sigma_data);
  rep.add_input("s", p.s);
  rep.add_input("reference_band", static_cast<double>(p.reference_band));
  rep.add_input("dt", p.dt);
  rep.add_input("t_final", p.t_final);
  rep.add_input("seed", std::to_string(p.seed));
  rep.add_scalar("reference_data_defect", (reference_data - u0).l2_norm());
  rep.columns = {"N", "error", "tail", "ratio"};

  std::vector<double> ns, errors, tails;
  double c_max = 0.0, c_min = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (std::size_t i = 0; i < p.bands.size(); ++i) {
    double err = 0.0;
    for (std::size_t k = 0; k < ref.fields.size(); ++k) {
      err = std::max(err, sobolev(runs[i].fields[k] - ref.fields[k], p.s));
    }
    const double tail = sobolev(project_high(u0, p.bands[i]), p.s);
    if (!errors.empty() && err > errors.back()) monotone = false;
    ns.push_back(static_cast<double>(p.bands[i]));
    errors.push_back(err);
    tails.push_back(tail);
    c_max = std::max(c_max, err / tail);
    c_min = std::min(c_min, err / tail);
    rep.rows.push_back({ns.back(), err, tail, err / tail});
  }
  const std::vector<double> mid_n(ns.begin() + 1, ns.end() - 1);
  const std::vector<double> mid_e(errors.begin() + 1, errors.end() - 1);
  const std::vector<double> mid_t(tails.begin() + 1, tails.end() - 1);
  const double rate = loglog_slope(mid_n, mid_e);
  const double tail_rate = loglog_slope(mid_n, mid_t);
  const double expected = -(p.sigma_data - p.s);
  rep.add_scalar("rate", rate);
  rep.add_scalar("tail_rate", tail_rate);
  rep.add_scalar("expected_rate", expected);
  rep.add_scalar("constant", c_max);
  rep.add_scalar("constant_spread", c_max / c_min);
  rep.add_scalar("monotone", monotone ? 1.0 : 0.0);
  rep.add_check("rate_relative_deviation", std::abs(rate - expected) / std::abs(expected), "<=",
                0.2);
  rep.add_check("constant_spread", c_max / c_min, "<=", 4.0);
  rep.add_check("monotone", monotone ? 1.0 : 0.0, ">=", 1.0);
  return rep;
}

namespace {

struct LipschitzRun {
  double max_ratio;
  std::vector<double> ratios;
};

LipschitzRun lipschitz_pairs(const WeakLipschitzParams& p) {
  const Grid grid(p.num_points, p.length);
  SolverConfig cfg{grid, p.dt, p.t_final};
  cfg.snapshot_stride = p.snapshot_stride;
  cfg.diagnostic_s = {};
  std::vector<double> ratios(p.pairs);
  parallel_for(p.pairs, [&](std::size_t i) {
    const std::uint64_t s1 = Rng::derive(p.seed, 2 * i), s2 = Rng::derive(p.seed, 2 * i + 1);
    const SpectralField u10 = random_smooth_field(grid, p.k_max, p.decay, 1.0, s1);
    SpectralField dir = random_smooth_field(grid, p.k_max, p.decay, 1.0, s2);
    dir = dir * (1.0 / sobolev(dir, -0.5));
    const SpectralField u20 = u10 + dir * p.delta;
    const double d0 = sobolev(u10 - u20, -0.5);
    if (!(d0 > 0.0)) throw ValidationError("weak Lipschitz: zero initial difference");
    const SolutionTrajectory a = solve(u10, cfg);
    const SolutionTrajectory b = solve(u20, cfg);
    double sup = 0.0;
    for (std::size_t k = 0; k < a.fields.size(); ++k) {
      sup = std::max(sup, sobolev(a.fields[k] - b.fields[k], -0.5));
    }
    ratios[i] = sup / d0;
  });
  return {*std::max_element(ratios.begin(), ratios.end()), ratios};
}

}  // namespace

ExperimentReport weak_lipschitz(const WeakLipschitzParams& p) {
  if (p.pairs == 0) throw ValidationError("weak Lipschitz needs at least one pair");
  if (!(p.delta > 0.0)) throw ValidationError("weak Lipschitz: zero initial difference");
  const LipschitzRun base = lipschitz_pairs(p);
  WeakLipschitzParams fine_dt = p;
  fine_dt.dt = 0.5 * p.dt;
  fine_dt.snapshot_stride = 2 * p.snapshot_stride;
  const LipschitzRun refined = lipschitz_pairs(fine_dt);
  WeakLipschitzParams small = p;
  small.delta = 0.1 * p.delta;
  const LipschitzRun shrunk = lipschitz_pairs(small);

  ExperimentReport rep;
  rep.id = "lipschitz";
  rep.add_input("num_points", static_cast<double>(p.num_points));
  rep.add_input("length", p.length);
  rep.add_input("pairs", static_cast<double>(p.pairs));
  rep.add_input("delta", p.delta);
  rep.add_input("dt", p.dt);
  rep.add_input("t_final", p.t_final);
  rep.add_input("seed", std::to_string(p.seed));
  rep.columns = {"pair", "ratio", "ratio_dt_half", "ratio_delta_tenth"};
  for (std::size_t i = 0; i < p.pairs; ++i) {
    rep.rows.push_back({static_cast<double>(i), base.ratios[i], refined.ratios[i], shrunk.ratios[i]});
  }
  const double dt_change = std::abs(refined.max_ratio / base.max_ratio - 1.0);
  const double delta_change = std::abs(shrunk.max_ratio / base.max_ratio - 1.0);
  rep.add_scalar("max_ratio", base.max_ratio);
  rep.add_scalar("max_ratio_dt_half", refined.max_ratio);
  rep.add_scalar("max_ratio_delta_tenth", shrunk.max_ratio);
  rep.add_check("dt_halving_change", dt_change, "<=", 0.1);
  rep.add_check("delta_shrink_change", delta_change, "<=", 0.1);
  rep.add_check("max_ratio_finite", std::isfinite(base.max_ratio) ? 1.0 : 0.0, ">=", 1.0);
  return rep;
}

ExperimentReport matsuno_run(const MatsunoParams& p) {
  const Grid grid(p.num_points, p.length);
  const ForcingSpec f = matsuno_topography(grid, p.center, p.width, p.amplitude);
  const ForcingSpec f2 = matsuno_topography(grid, p.center, p.width, 2.0 * p.amplitude);
  const BackgroundSpec b = BackgroundSpec::zero(grid);
  const SpectralField u0 = SpectralField::zero(grid);
  SolverConfig cfg{grid, p.dt, p.t_final};
  cfg.snapshot_stride = p.snapshot_stride;
  cfg.diagnostic_s = {};

  // Shape perturbation with sup 1 and the bump's support.
  const SpectralField q = SpectralField::from_function(grid, [&](double x) {
    const double y = (x - p.center) / p.width;
    return std::numbers::e * bump(y) * (1.0 - 2.0 * y * y);
  });

  const std::size_t runs = 2 + p.etas.size();
  std::vector<SolutionTrajectory> traj(runs);
  parallel_for(runs, [&](std::size_t i) {
    if (i == 0) {
      traj[i] = solve(u0, b, f, cfg);
    } else if (i == 1) {
      traj[i] = solve(u0, b, f2, cfg);
    } else {
      const ForcingSpec fe = ForcingSpec::static_field(f.at(0.0) + q * p.etas[i - 2]);
      traj[i] = solve(u0, b, fe, cfg);
    }
  });

  ExperimentReport rep;
  rep.id = "matsuno";
  rep.add_input("num_points", static_cast<double>(p.num_points));
  rep.add_input("length", p.length);
  rep.add_input("center", p.center);
  rep.add_input("width", p.width);
  rep.add_input("amplitude", p.amplitude);
  rep.add_input("dt", p.dt);
  rep.add_input("t_final", p.t_final);
  rep.columns = {"t", "u_l2", "u_max"};
  for (std::size_t k = 0; k < traj[0].fields.size(); ++k) {
    rep.rows.push_back({traj[0].times[k], traj[0].fields[k].l2_norm(), traj[0].fields[k].max_abs()});
  }
  double defect = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < traj[0].fields.size(); ++k) {
    defect = std::max(defect, (traj[1].fields[k] - traj[0].fields[k] * 2.0).l2_norm());
    scale = std::max(scale, traj[1].fields[k].l2_norm());
  }
  rep.add_scalar("forcing_integral", f.at(0.0).integral());
  rep.add_scalar("forcing_integral_expected", p.amplitude * p.width * kBumpMass);
  rep.add_scalar("final_l2", traj[0].final_field().l2_norm());
  rep.add_scalar("linearity_defect", scale > 0.0 ? defect / scale : 0.0);
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (std::size_t e = 0; e < p.etas.size(); ++e) {
    double sup = 0.0;
    for (std::size_t k = 0; k < traj[0].fields.size(); ++k) {
      sup = std::max(sup, (traj[2 + e].fields[k] - traj[0].fields[k]).l2_norm());
    }
    const double ratio = sup / p.etas[e];
    rep.add_scalar("response_ratio_eta_" + format_number(p.etas[e]), ratio);
    rmin = std::min(rmin, ratio);
    rmax = std::max(rmax, ratio);
  }
  if (!p.etas.empty()) {
    rep.add_scalar("response_ratio_spread", rmax / rmin);
    rep.add_check("response_ratio_spread", rmax / rmin, "<=", 2.0);
  }
  return rep;
}

}  // namespace bolab
