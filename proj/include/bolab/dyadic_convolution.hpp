#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bolab/littlewood_paley.hpp"

namespace bolab {

/// Lattice (a*dtau, j*dxi), a, j integers, truncated to |a| <= tau_extent,
/// |j| <= xi_extent. Sums over the lattice carry the weight dtau*dxi so they
/// approximate integrals over R^2.
struct SpaceTimeGrid {
  double dtau;
  double dxi;
  long tau_extent;
  long xi_extent;
  /// Points per unit of the smallest modulation shell.
  double resolution;

  /// Grid for the given regions: dtau = L_min/resolution,
  /// dxi = min(L_min/K_max, K_min)/resolution, extents covering +-(8/5)K_max in xi and
  /// +-(omega((8/5)K_max) + (8/5)L_max) in tau.
  static SpaceTimeGrid for_regions(std::span<const ModulationRegion> regions,
                                   double resolution = 8.0);
  bool covers(const ModulationRegion& region) const;
  double cell() const { return dtau * dxi; }
};

/// Nonnegative lattice function stored as xi-columns of contiguous tau runs.
struct ColumnField {
  struct Column {
    long j;
    long a0;
    std::vector<double> values;
  };
  std::vector<Column> columns;  // strictly increasing j

  double value_at(long a, long j) const;
  double sum_squares() const;
  std::size_t point_count() const;
};

enum class DensityStyle { kPlateau, kRandom };

/// Nonnegative density on the lattice supported in D_{L,K}.
class LocalizedDensity {
 public:
  /// Plateau: indicator of the region. Random: independent U(0,1] values on
  /// the region, reproducible from `seed`.
  static LocalizedDensity generate(const SpaceTimeGrid& grid, const ModulationRegion& region,
                                   std::uint64_t seed, DensityStyle style);

  const SpaceTimeGrid& grid() const { return grid_; }
  const ModulationRegion& home() const { return home_; }
  const ColumnField& field() const { return field_; }

  double l2_norm() const;
  LocalizedDensity scaled(double factor) const;
  /// Zero density with the same home (used for degenerate-input checks).
  LocalizedDensity zeroed() const;

 private:
  LocalizedDensity(SpaceTimeGrid grid, ModulationRegion home, ColumnField field)
      : grid_(grid), home_(home), field_(std::move(field)) {}

  SpaceTimeGrid grid_;
  ModulationRegion home_;
  ColumnField field_;
};

/// Lattice convolution (f*g)(p) = sum_q f(q) g(p-q) * cell. Uses direct
/// column sums when cheap and a zero-padded 2D FFT otherwise.
ColumnField convolve(const ColumnField& f, const ColumnField& g, double cell);
/// Direct column-sum convolution only.
ColumnField convolve_direct(const ColumnField& f, const ColumnField& g, double cell);

struct PairEstimate {
  double conv_norm;
  double bound;
  double ratio;
};

/// ||phi1 * phi2||_{L2} against (L_1^*)^{1/4} (L_2^*)^{1/2} ||phi1|| ||phi2||.
PairEstimate pair_estimate(const LocalizedDensity& phi1, const LocalizedDensity& phi2);

struct MultiEstimate {
  double value;
  double bound_general;
  double ratio_general;
  /// NaN when K_3^* = 1 (improved bound not applicable).
  double bound_improved;
  double ratio_improved;
};

/// (phi1*phi2*phi3)(0,0) by exact sparse summation; zero whenever the
/// supports exclude every zero-sum configuration. Bounds
/// (L_3^*)^{1/2}(K_3^*)^{1/2} and (L_1^* L_3^*)^{1/2}(K_1^*)^{-1/2}.
MultiEstimate triple_at_origin(const LocalizedDensity& phi1, const LocalizedDensity& phi2,
                               const LocalizedDensity& phi3);

/// (phi1*phi2*phi3*phi4)(0,0) = sum_p (phi1*phi2)(p)(phi3*phi4)(-p). Bounds
/// (L_3^* L_4^*)^{1/2}(K_3^* K_4^*)^{1/2} and
/// (L_1^* L_2^* L_4^*)^{1/2}(K_1^*)^{-1/2}(K_4^*)^{1/2}.
MultiEstimate quad_at_origin(const LocalizedDensity& phi1, const LocalizedDensity& phi2,
                             const LocalizedDensity& phi3, const LocalizedDensity& phi4);

/// Nonnegative spectral measure sum_m w_m delta_{p_m} on the lattice; its
/// inverse transform g has sup norm sum_m w_m (attained at the origin).
class BoundedFactor {
 public:
  struct Atom {
    long a;
    long j;
    double weight;
  };

  /// g == value (a single atom at the origin).
  static BoundedFactor constant(double value);
  static BoundedFactor from_atoms(std::vector<Atom> atoms);
  /// Physical samples g(t_n, x_m) on an nt x nx periodic patch whose DFT
  /// frequencies fall on lattice points with the given strides; atoms take the
  /// modulus of each DFT coefficient.
  static BoundedFactor from_samples(const std::vector<std::vector<double>>& samples,
                                    long stride_tau, long stride_xi);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double sup_norm() const;

 private:
  explicit BoundedFactor(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}
  std::vector<Atom> atoms_;
};

struct BoundedEstimate {
  double value;
  double bound_one;
  double ratio_one;
  double bound_two;
  double ratio_two;
};

/// (phi1*phi2*phi3*phi_inf)(0,0) with bounds (L_3^*)^{1/2}(K_3^*)^{1/2} and
/// (L_2^*)^{1/4}(L_3^*)^{1/2}, each times ||phi_inf^vee||_{L^inf}.
BoundedEstimate quad_with_bounded(const LocalizedDensity& phi1, const LocalizedDensity& phi2,
                                  const LocalizedDensity& phi3, const BoundedFactor& g);

/// Triple convolution evaluated at lattice point (a, j).
double triple_at(const ColumnField& f1, const ColumnField& f2, const ColumnField& f3, long a,
                 long j, double cell);

/// True when support arithmetic forces the triple value to vanish:
/// K_3^* > 1 and 16 L_1^* <= K_1^* K_3^*.
bool vanishing_predicted(std::span<const ModulationRegion> regions);

struct ConvolutionSweepRow {
  std::string lemma;
  std::vector<long> ks;
  std::vector<long> ls;
  double value;
  double bound;
  double ratio;
  std::uint64_t seed;
  double resolution;
};

std::string convolution_sweep_csv(const std::vector<ConvolutionSweepRow>& rows);

/// Estimate sweeps over plateau densities along two kinds of lines: K shapes
/// for K = 1..k_max with every L = 1, and L shapes for L = 1..l_max with every
/// K equal to 1 or 2.
std::vector<ConvolutionSweepRow> sweep_pair(long k_max, long l_max, double resolution);
std::vector<ConvolutionSweepRow> sweep_triple(long k_max, long l_max, double resolution);
std::vector<ConvolutionSweepRow> sweep_quad(long k_max, long l_max, double resolution);
std::vector<ConvolutionSweepRow> sweep_bounded(long k_max, long l_max, double resolution);

double max_ratio(const std::vector<ConvolutionSweepRow>& rows);

}  // namespace bolab
