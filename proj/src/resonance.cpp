#include "bolab/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "bolab/errors.hpp"
#include "bolab/parallel.hpp"
#include "bolab/spectral.hpp"

namespace bolab {

double omega_n(std::span<const double> xi) {
  if (xi.size() != 3 && xi.size() != 4) throw ValidationError("omega_n: n must be 3 or 4");
  double sum = 0.0, scale = 0.0, res = 0.0;
  for (double v : xi) {
    sum += v;
    scale += std::abs(v);
    res += omega(v);
  }
  if (std::abs(sum) > 1e-12 * std::max(1.0, scale)) {
    throw ValidationError("omega_n: tuple violates the zero-sum constraint");
  }
  return res;
}

bool comparable(long a, long b) noexcept { return std::max(a, b) <= 2 * std::min(a, b); }
bool much_greater(long a, long b) noexcept { return a >= 16 * b; }
bool greater_or_comparable(long a, long b) noexcept { return 8 * a >= b; }

long dyadic_of(double xi) noexcept {
  const double a = std::abs(xi);
  long k = 1;
  while (static_cast<double>(2 * k) <= a) k *= 2;
  return k;
}

std::vector<long> DyadicProfile::sorted_desc() const {
  std::vector<long> s(k);
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

std::string DyadicProfile::label() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "-" : "") << k[i];
  return os.str();
}

namespace {

struct Shell {
  double lo, hi;
};

Shell shell_of(long k) {
  if (k == 1) return {0.0, 2.0};
  return {static_cast<double>(k), 2.0 * static_cast<double>(k)};
}

std::size_t dependent_index(const DyadicProfile& p) {
  return static_cast<std::size_t>(std::max_element(p.k.begin(), p.k.end()) - p.k.begin());
}

void validate_profile(const DyadicProfile& p) {
  if (p.k.size() < 2) throw ValidationError("profile needs at least two shells");
  for (long v : p.k) {
    if (v < 1 || (v & (v - 1)) != 0) throw ValidationError("profile entries must be dyadic");
  }
}

}  // namespace

bool profile_feasible(const DyadicProfile& profile) {
  validate_profile(profile);
  const std::size_t dep = dependent_index(profile);
  const Shell target = shell_of(profile.k[dep]);
  const std::size_t free_count = profile.k.size() - 1;
  for (unsigned mask = 0; mask < (1u << free_count); ++mask) {
    double lo = 0.0, hi = 0.0;
    std::size_t bit = 0;
    for (std::size_t i = 0; i < profile.k.size(); ++i) {
      if (i == dep) continue;
      const Shell s = shell_of(profile.k[i]);
      if (profile.k[i] == 1) {
        lo -= s.hi;
        hi += s.hi;
      } else if (mask & (1u << bit)) {
        lo -= s.hi;
        hi -= s.lo;
      } else {
        lo += s.lo;
        hi += s.hi;
      }
      ++bit;
    }
    // The closing coordinate is -sum; its magnitude must reach the target shell.
    const bool pos = std::max(lo, target.lo) < std::min(hi, target.hi);
    const bool neg = std::max(lo, -target.hi) < std::min(hi, -target.lo);
    if (pos || neg) return true;
  }
  return false;
}

std::optional<std::vector<double>> sample_tuple(Rng& rng, const DyadicProfile& profile,
                                                std::uint64_t max_attempts, std::uint64_t* attempts) {
  const std::size_t n = profile.k.size();
  const std::size_t dep = dependent_index(profile);
  const Shell target = shell_of(profile.k[dep]);
  std::vector<double> xi(n);
  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    if (attempts) ++*attempts;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == dep) continue;
      const Shell s = shell_of(profile.k[i]);
      xi[i] = rng.sign() * rng.uniform(s.lo, s.hi);
      sum += xi[i];
    }
    const double closing = -sum;
    const double a = std::abs(closing);
    if (a >= target.lo && a < target.hi) {
      xi[dep] = closing;
      return xi;
    }
  }
  return std::nullopt;
}

namespace {

RatioStats check_resonance(std::size_t samples, const DyadicProfile& profile,
                           std::uint64_t seed, std::size_t n) {
  validate_profile(profile);
  if (profile.k.size() != n) throw ValidationError("profile has the wrong arity");
  const auto sorted = profile.sorted_desc();
  if (sorted[2] <= 1) throw ValidationError("resonance bound requires K_3^* > 1");
  if (!profile_feasible(profile)) {
    throw InfeasibleProfile("no zero-sum tuple realizes profile " + profile.label());
  }
  const double scale = static_cast<double>(sorted[0]) * static_cast<double>(sorted[2]);
  Rng rng(seed);
  RatioStats stats{std::numeric_limits<double>::infinity(), 0.0, 0, 0};
  for (std::size_t s = 0; s < samples; ++s) {
    auto tuple = sample_tuple(rng, profile, 1'000'000, &stats.attempts);
    if (!tuple) throw InfeasibleProfile("rejection cap reached for profile " + profile.label());
    // Evaluate directly; the closing coordinate makes the sum vanish by construction.
    double res = 0.0;
    for (double v : *tuple) res += omega(v);
    const double ratio = std::abs(res) / scale;
    stats.min_ratio = std::min(stats.min_ratio, ratio);
    stats.max_ratio = std::max(stats.max_ratio, ratio);
    ++stats.samples;
  }
  return stats;
}

}  // namespace

RatioStats check_res3(std::size_t samples, const DyadicProfile& profile, std::uint64_t seed) {
  return check_resonance(samples, profile, seed, 3);
}

RatioStats check_res4(std::size_t samples, const DyadicProfile& profile, std::uint64_t seed) {
  return check_resonance(samples, profile, seed, 4);
}

ResDifResult res_dif_eval(double xa, double xb, double x2, double x3) {
  const double first[3] = {xa, x2 + xb, x3};
  const double second[3] = {xa + xb, x2, x3};
  const double o1 = omega(first[0]) + omega(first[1]) + omega(first[2]);
  const double o2 = omega(second[0]) + omega(second[1]) + omega(second[2]);
  const double tuple[4] = {xa, xb, x2, x3};
  omega_n(tuple);  // zero-sum validation
  if (o1 == 0.0 || o2 == 0.0) throw NumericalError("res_dif: inner Omega_3 vanishes");
  const double lhs = std::abs(1.0 / o1 - 1.0 / o2);
  const double kb = static_cast<double>(dyadic_of(xb));
  const double k2 = static_cast<double>(dyadic_of(x2));
  const double k3 = static_cast<double>(dyadic_of(x3));
  const double bound = kb / (k3 * k2 * k2);
  return {lhs, bound, lhs / bound};
}

ResDifResult res_dif_check(double xa, double xb, double x2, double x3) {
  const long ka = dyadic_of(xa), kb = dyadic_of(xb), k2 = dyadic_of(x2), k3 = dyadic_of(x3);
  if (!comparable(ka, k2) || !greater_or_comparable(k2, kb) || !much_greater(k2, k3) ||
      k3 <= 1) {
    throw ValidationError("res_dif: dyadic hypotheses K_a ~ K_2 >~ K_b, K_2 >> K_3 > 1 fail");
  }
  return res_dif_eval(xa, xb, x2, x3);
}

RatioStats res_dif_sweep(std::size_t samples, long k2, long k3, long kb, std::uint64_t seed) {
  if (!much_greater(k2, k3) || k3 <= 1 || !greater_or_comparable(k2, kb)) {
    throw ValidationError("res_dif sweep: shells violate K_2 >~ K_b, K_2 >> K_3 > 1");
  }
  Rng rng(seed);
  RatioStats stats{std::numeric_limits<double>::infinity(), 0.0, 0, 0};
  const Shell s2 = shell_of(k2), s3 = shell_of(k3), sb = shell_of(kb);
  while (stats.samples < samples) {
    if (++stats.attempts > 1'000'000ULL * std::max<std::size_t>(samples, 1)) {
      throw InfeasibleProfile("res_dif sweep: rejection cap reached");
    }
    const double x2 = rng.sign() * rng.uniform(s2.lo, s2.hi);
    const double x3 = rng.sign() * rng.uniform(s3.lo, s3.hi);
    const double xb = rng.sign() * rng.uniform(sb.lo, sb.hi);
    const double xa = -(xb + x2 + x3);
    if (dyadic_of(x2) != k2 || dyadic_of(x3) != k3 || dyadic_of(xb) != kb) continue;
    if (!comparable(dyadic_of(xa), k2)) continue;
    ResDifResult r;
    try {
      r = res_dif_eval(xa, xb, x2, x3);
    } catch (const NumericalError&) {
      continue;
    }
    stats.min_ratio = std::min(stats.min_ratio, r.ratio);
    stats.max_ratio = std::max(stats.max_ratio, r.ratio);
    ++stats.samples;
  }
  return stats;
}

std::vector<ResonanceSweepRow> resonance_sweep(const std::vector<DyadicProfile>& profiles,
                                               std::size_t samples, std::uint64_t seed) {
  std::vector<ResonanceSweepRow> rows(profiles.size());
  parallel_for(profiles.size(), [&](std::size_t i) {
    const std::uint64_t task_seed = Rng::derive(seed, i);
    const auto& p = profiles[i];
    RatioStats st = p.k.size() == 3 ? check_res3(samples, p, task_seed)
                                    : check_res4(samples, p, task_seed);
    rows[i] = {p, st, task_seed};
  });
  return rows;
}

std::string resonance_sweep_csv(const std::vector<ResonanceSweepRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "profile,samples,min_ratio,max_ratio,seed\n";
  for (const auto& r : rows) {
    os << r.profile.label() << ',' << r.stats.samples << ',' << r.stats.min_ratio << ','
       << r.stats.max_ratio << ',' << r.seed << '\n';
  }
  return os.str();
}

std::vector<DyadicProfile> res3_profile_family(long k_max) {
  std::vector<DyadicProfile> out;
  for (long k = 2; k <= k_max; k *= 2) {
    for (long kp = 2; kp <= k; kp *= 2) {
      for (DyadicProfile p : {DyadicProfile{{k, k, kp}}, DyadicProfile{{2 * k, k, kp}}}) {
        if (p.k[0] <= k_max && profile_feasible(p)) out.push_back(p);
      }
    }
  }
  return out;
}

namespace {

// Distinct magnitudes, descending, log-uniform in [1, max_magnitude].
std::vector<double> descending_magnitudes(Rng& rng, std::size_t n, double max_magnitude) {
  std::vector<double> m(n);
  do {
    for (double& v : m) v = std::pow(max_magnitude, rng.uniform());
    std::sort(m.begin(), m.end(), std::greater<>());
  } while (std::adjacent_find(m.begin(), m.end()) != m.end());
  return m;
}

}  // namespace

IdentityStats check_omega3_identity(std::size_t samples, std::uint64_t seed,
                                    double max_magnitude) {
  if (!(max_magnitude > 1.0)) throw ValidationError("max_magnitude must exceed 1");
  Rng rng(seed);
  IdentityStats out;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto m = descending_magnitudes(rng, 2, max_magnitude);
    const double xi[3] = {m[0] + m[1], -m[0], -m[1]};
    const double o = omega_n(xi);
    out.max_relative_error =
        std::max(out.max_relative_error, std::abs(o - 2.0 * xi[1] * xi[2]) / std::abs(o));
    ++out.samples;
  }
  return out;
}

IdentityStats check_omega4_identity(std::size_t samples, std::uint64_t seed, double sign,
                                    double max_magnitude) {
  if (!(max_magnitude > 1.0)) throw ValidationError("max_magnitude must exceed 1");
  Rng rng(seed);
  IdentityStats out;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto m = descending_magnitudes(rng, 3, max_magnitude);
    const double xi[4] = {m[0] + m[1] + m[2], -m[0], -m[1], -m[2]};
    const double o = omega_n(xi);
    const double rhs = sign * 2.0 * (xi[1] * xi[2] - (xi[0] + xi[3]) * xi[3]);
    out.max_relative_error = std::max(out.max_relative_error, std::abs(o - rhs) / std::abs(o));
    ++out.samples;
  }
  return out;
}

}  // namespace bolab
