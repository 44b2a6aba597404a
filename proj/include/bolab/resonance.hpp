#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bolab/random.hpp"

namespace bolab {

/// Sum of omega over a zero-sum tuple (n = 3 or 4). Throws ValidationError
/// when |sum xi| exceeds 1e-12 * max(1, sum |xi|).
double omega_n(std::span<const double> xi);

/// Dyadic comparators used throughout: A ~ B iff max/min <= 2, A >> B iff
/// A >= 16 B, A >~ B iff 8 A >= B.
bool comparable(long a, long b) noexcept;
bool much_greater(long a, long b) noexcept;
bool greater_or_comparable(long a, long b) noexcept;

/// Dyadic shell of a frequency: largest power of two <= |xi|, and 1 for |xi| < 2.
long dyadic_of(double xi) noexcept;

/// Per-coordinate dyadic magnitudes K_1..K_n.
struct DyadicProfile {
  std::vector<long> k;

  /// K_1^* >= ... >= K_n^*.
  std::vector<long> sorted_desc() const;
  long star(std::size_t i) const { return sorted_desc().at(i - 1); }
  std::string label() const;
};

/// True when some zero-sum tuple has |xi_i| in [K_i, 2K_i) for every i
/// (for K_i = 1 the shell is |xi| < 2).
bool profile_feasible(const DyadicProfile& profile);

/// Draws the coordinates other than the largest shell uniformly (random
/// signs) and closes the tuple by the zero-sum condition; rejects until the
/// closing coordinate lands in its shell. Returns nullopt after
/// `max_attempts` rejections. Draws are added to `*attempts` when given.
std::optional<std::vector<double>> sample_tuple(Rng& rng, const DyadicProfile& profile,
                                                std::uint64_t max_attempts = 1'000'000,
                                                std::uint64_t* attempts = nullptr);

struct RatioStats {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t samples = 0;
  std::uint64_t attempts = 0;
};

/// Range of |Omega_3| / (K_1^* K_3^*) over random tuples of the profile.
/// Requires K_3^* > 1 and a feasible profile.
RatioStats check_res3(std::size_t samples, const DyadicProfile& profile, std::uint64_t seed);
/// Same for |Omega_4|; only the maximum is meaningful (Omega_4 can vanish).
RatioStats check_res4(std::size_t samples, const DyadicProfile& profile, std::uint64_t seed);

struct ResDifResult {
  double lhs;
  double bound;
  double ratio;
};

/// |1/Omega_3(xa, x2+xb, x3) - 1/Omega_3(xa+xb, x2, x3)| against
/// K_b K_3^{-1} K_2^{-2}, without checking the dyadic hypotheses.
ResDifResult res_dif_eval(double xa, double xb, double x2, double x3);
/// As res_dif_eval, but enforces K_a ~ K_2 >~ K_b and K_2 >> K_3 > 1.
ResDifResult res_dif_check(double xa, double xb, double x2, double x3);

/// Maximum res_dif ratio over random tuples with |x2| ~ k2, |x3| ~ k3,
/// |xb| ~ kb and the closing coordinate xa ~ k2.
RatioStats res_dif_sweep(std::size_t samples, long k2, long k3, long kb, std::uint64_t seed);

struct ResonanceSweepRow {
  DyadicProfile profile;
  RatioStats stats;
  std::uint64_t seed;
};

/// Runs check_res3 (3-entry profiles) or check_res4 (4-entry) per profile in
/// parallel; task i uses seed Rng::derive(seed, i).
std::vector<ResonanceSweepRow> resonance_sweep(const std::vector<DyadicProfile>& profiles,
                                               std::size_t samples, std::uint64_t seed);
std::string resonance_sweep_csv(const std::vector<ResonanceSweepRow>& rows);

struct IdentityStats {
  std::size_t samples = 0;
  double max_relative_error = 0.0;
};

/// Gamma_3 tuples with xi1 > -xi2 > -xi3 > 0 and magnitudes log-uniform in
/// [1, max_magnitude]: max of |Omega_3 - 2 xi2 xi3| / |Omega_3|.
IdentityStats check_omega3_identity(std::size_t samples, std::uint64_t seed,
                                    double max_magnitude = 1024.0);
/// Gamma_4 tuples with xi1 > -xi2 > -xi3 > -xi4 > 0: max of
/// |Omega_4 - sign * 2 (xi2 xi3 - xi14 xi4)| / |Omega_4|. The algebraically
/// correct sign is +1.
IdentityStats check_omega4_identity(std::size_t samples, std::uint64_t seed, double sign,
                                    double max_magnitude = 1024.0);

/// Profiles (K,K,K') and (2K,K,K') with 2 <= K' <= K <= k_max (feasible
/// ones only), the family used by the two-sided bound check.
std::vector<DyadicProfile> res3_profile_family(long k_max);

}  // namespace bolab
