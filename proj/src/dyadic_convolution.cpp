#include "bolab/dyadic_convolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "bolab/errors.hpp"
#include "bolab/fft.hpp"
#include "bolab/parallel.hpp"
#include "bolab/random.hpp"
#include "bolab/spectral.hpp"

namespace bolab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Column lookup by j; fields store strictly increasing j.
const ColumnField::Column* find_column(const ColumnField& f, long j) {
  auto it = std::lower_bound(f.columns.begin(), f.columns.end(), j,
                             [](const ColumnField::Column& c, long v) { return c.j < v; });
  if (it == f.columns.end() || it->j != j) return nullptr;
  return &*it;
}

long col_end(const ColumnField::Column& c) { return c.a0 + static_cast<long>(c.values.size()); }

struct Extent {
  long lo = std::numeric_limits<long>::max();
  long hi = std::numeric_limits<long>::min();  // exclusive
};

// Column ranges of f*g (j -> [lo, hi)).
std::vector<Extent> product_extents(const ColumnField& f, const ColumnField& g, long& j0) {
  j0 = f.columns.front().j + g.columns.front().j;
  const long j1 = f.columns.back().j + g.columns.back().j;
  std::vector<Extent> ext(static_cast<std::size_t>(j1 - j0 + 1));
  for (const auto& cf : f.columns) {
    for (const auto& cg : g.columns) {
      auto& e = ext[static_cast<std::size_t>(cf.j + cg.j - j0)];
      e.lo = std::min(e.lo, cf.a0 + cg.a0);
      e.hi = std::max(e.hi, col_end(cf) + col_end(cg) - 1);
    }
  }
  return ext;
}

// Canonical operand order so that f*g and g*f run the identical computation.
bool canonical_less(const ColumnField& f, const ColumnField& g) {
  if (f.point_count() != g.point_count()) return f.point_count() < g.point_count();
  if (f.columns.size() != g.columns.size()) return f.columns.size() < g.columns.size();
  for (std::size_t i = 0; i < f.columns.size(); ++i) {
    const auto& a = f.columns[i];
    const auto& b = g.columns[i];
    if (a.j != b.j) return a.j < b.j;
    if (a.a0 != b.a0) return a.a0 < b.a0;
    if (a.values != b.values) return a.values < b.values;
  }
  return false;
}

std::size_t good_fft_size(std::size_t n) {
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

ColumnField convolve_fft(const ColumnField& f, const ColumnField& g, double cell) {
  long j0 = 0;
  const auto ext = product_extents(f, g, j0);

  auto box = [](const ColumnField& h, long& amin, long& amax) {
    amin = std::numeric_limits<long>::max();
    amax = std::numeric_limits<long>::min();
    for (const auto& c : h.columns) {
      amin = std::min(amin, c.a0);
      amax = std::max(amax, col_end(c) - 1);
    }
  };
  long fa0, fa1, ga0, ga1;
  box(f, fa0, fa1);
  box(g, ga0, ga1);
  const long fj0 = f.columns.front().j, gj0 = g.columns.front().j;
  const std::size_t rows = good_fft_size(static_cast<std::size_t>(
      f.columns.back().j - fj0 + g.columns.back().j - gj0 + 1));
  const std::size_t cols =
      good_fft_size(static_cast<std::size_t>(fa1 - fa0 + ga1 - ga0 + 1));
  if (rows * cols > (std::size_t{1} << 26)) {
    throw NumericalError("convolution box exceeds the FFT memory budget");
  }

  // Both real inputs share one complex transform: z = f + i g.
  std::vector<Complex> z(rows * cols), zhat(rows * cols);
  for (const auto& c : f.columns) {
    const std::size_t r = static_cast<std::size_t>(c.j - fj0);
    for (std::size_t k = 0; k < c.values.size(); ++k) {
      z[r * cols + static_cast<std::size_t>(c.a0 - fa0) + k].real(c.values[k]);
    }
  }
  for (const auto& c : g.columns) {
    const std::size_t r = static_cast<std::size_t>(c.j - gj0);
    for (std::size_t k = 0; k < c.values.size(); ++k) {
      z[r * cols + static_cast<std::size_t>(c.a0 - ga0) + k].imag(c.values[k]);
    }
  }
  fft::transform_2d(z, zhat, rows, cols, fft::Direction::kForward);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t rr = (rows - r) % rows;
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t cc = (cols - c) % cols;
      const Complex a = zhat[r * cols + c];
      const Complex b = std::conj(zhat[rr * cols + cc]);
      const Complex fh = 0.5 * (a + b);
      const Complex gh = Complex(0.0, -0.5) * (a - b);
      z[r * cols + c] = fh * gh;
    }
  }
  fft::transform_2d(z, zhat, rows, cols, fft::Direction::kBackward);

  const double scale = cell / static_cast<double>(rows * cols);
  const long out_j0 = fj0 + gj0, out_a0 = fa0 + ga0;
  ColumnField out;
  for (std::size_t i = 0; i < ext.size(); ++i) {
    const Extent& e = ext[i];
    if (e.lo >= e.hi) continue;
    const long j = j0 + static_cast<long>(i);
    const std::size_t r = static_cast<std::size_t>(j - out_j0);
    ColumnField::Column col{j, e.lo, std::vector<double>(static_cast<std::size_t>(e.hi - e.lo))};
    for (long a = e.lo; a < e.hi; ++a) {
      col.values[static_cast<std::size_t>(a - e.lo)] =
          zhat[r * cols + static_cast<std::size_t>(a - out_a0)].real() * scale;
    }
    out.columns.push_back(std::move(col));
  }
  return out;
}

}  // namespace

SpaceTimeGrid SpaceTimeGrid::for_regions(std::span<const ModulationRegion> regions,
                                         double resolution) {
  if (regions.empty()) throw ValidationError("grid needs at least one region");
  if (!(resolution >= 1.0)) throw ValidationError("grid resolution must be >= 1");
  long l_min = std::numeric_limits<long>::max(), l_max = 0;
  long k_min = std::numeric_limits<long>::max(), k_max = 0;
  for (const auto& r : regions) {
    l_min = std::min(l_min, r.modulation);
    l_max = std::max(l_max, r.modulation);
    k_min = std::min(k_min, r.frequency);
    k_max = std::max(k_max, r.frequency);
  }
  SpaceTimeGrid g{};
  g.resolution = resolution;
  g.dtau = static_cast<double>(l_min) / resolution;
  // Resolve both the strip crossings (width ~ L_min/K_max) and the thinnest shell.
  g.dxi = std::min(static_cast<double>(l_min) / static_cast<double>(k_max),
                   static_cast<double>(k_min)) /
          resolution;
  const double xi_range = kSupportEdge * static_cast<double>(k_max);
  const double tau_range = omega(xi_range) + kSupportEdge * static_cast<double>(l_max);
  g.xi_extent = static_cast<long>(std::ceil(xi_range / g.dxi)) + 1;
  g.tau_extent = static_cast<long>(std::ceil(tau_range / g.dtau)) + 1;
  return g;
}

bool SpaceTimeGrid::covers(const ModulationRegion& region) const {
  const double xi_range = kSupportEdge * static_cast<double>(region.frequency);
  const double tau_range = omega(xi_range) + kSupportEdge * static_cast<double>(region.modulation);
  return xi_range <= static_cast<double>(xi_extent) * dxi &&
         tau_range <= static_cast<double>(tau_extent) * dtau;
}

double ColumnField::value_at(long a, long j) const {
  const Column* c = find_column(*this, j);
  if (!c || a < c->a0 || a >= col_end(*c)) return 0.0;
  return c->values[static_cast<std::size_t>(a - c->a0)];
}

double ColumnField::sum_squares() const {
  double s = 0.0;
  for (const auto& c : columns) {
    for (double v : c.values) s += v * v;
  }
  return s;
}

std::size_t ColumnField::point_count() const {
  std::size_t n = 0;
  for (const auto& c : columns) n += c.values.size();
  return n;
}

LocalizedDensity LocalizedDensity::generate(const SpaceTimeGrid& grid,
                                            const ModulationRegion& region, std::uint64_t seed,
                                            DensityStyle style) {
  if (!grid.covers(region)) throw ValidationError("region exceeds the space-time grid");
  Rng rng(seed);
  const double l = static_cast<double>(region.modulation);
  ColumnField field;
  for (long j = -grid.xi_extent; j <= grid.xi_extent; ++j) {
    const double xi = static_cast<double>(j) * grid.dxi;
    if (!in_band_support(region.frequency, xi)) continue;
    const double w = omega(xi);
    const long a_lo = static_cast<long>(std::floor((w - kSupportEdge * l) / grid.dtau)) - 1;
    const long a_hi = static_cast<long>(std::ceil((w + kSupportEdge * l) / grid.dtau)) + 1;
    long first = 0, last = -1;
    bool any = false;
    for (long a = a_lo; a <= a_hi; ++a) {
      if (region.contains(static_cast<double>(a) * grid.dtau, xi)) {
        if (!any) first = a;
        last = a;
        any = true;
      }
    }
    if (!any) continue;
    ColumnField::Column col{j, first, std::vector<double>(static_cast<std::size_t>(last - first + 1))};
    for (long a = first; a <= last; ++a) {
      if (!region.contains(static_cast<double>(a) * grid.dtau, xi)) continue;
      col.values[static_cast<std::size_t>(a - first)] =
          style == DensityStyle::kPlateau ? 1.0 : 1.0 - rng.uniform();
    }
    field.columns.push_back(std::move(col));
  }
  return LocalizedDensity(grid, region, std::move(field));
}

double LocalizedDensity::l2_norm() const { return std::sqrt(field_.sum_squares() * grid_.cell()); }

LocalizedDensity LocalizedDensity::scaled(double factor) const {
  if (!(factor >= 0.0)) throw ValidationError("densities stay nonnegative: factor must be >= 0");
  ColumnField f = field_;
  for (auto& c : f.columns) {
    for (double& v : c.values) v *= factor;
  }
  return LocalizedDensity(grid_, home_, std::move(f));
}

LocalizedDensity LocalizedDensity::zeroed() const { return scaled(0.0); }

ColumnField convolve_direct(const ColumnField& f_in, const ColumnField& g_in, double cell) {
  if (f_in.columns.empty() || g_in.columns.empty()) return {};
  const bool swap = canonical_less(g_in, f_in);
  const ColumnField& f = swap ? g_in : f_in;
  const ColumnField& g = swap ? f_in : g_in;
  long j0 = 0;
  const auto ext = product_extents(f, g, j0);
  std::vector<ColumnField::Column> cols(ext.size());
  for (std::size_t i = 0; i < ext.size(); ++i) {
    if (ext[i].lo < ext[i].hi) {
      cols[i] = {j0 + static_cast<long>(i), ext[i].lo,
                 std::vector<double>(static_cast<std::size_t>(ext[i].hi - ext[i].lo), 0.0)};
    }
  }
  for (const auto& cf : f.columns) {
    for (const auto& cg : g.columns) {
      auto& out = cols[static_cast<std::size_t>(cf.j + cg.j - j0)];
      double* base = out.values.data() + (cf.a0 + cg.a0 - out.a0);
      for (std::size_t p = 0; p < cf.values.size(); ++p) {
        const double v = cf.values[p];
        if (v == 0.0) continue;
        double* dst = base + p;
        for (std::size_t q = 0; q < cg.values.size(); ++q) dst[q] += v * cg.values[q];
      }
    }
  }
  ColumnField out;
  for (auto& c : cols) {
    if (c.values.empty()) continue;
    for (double& v : c.values) v *= cell;
    out.columns.push_back(std::move(c));
  }
  return out;
}

ColumnField convolve(const ColumnField& f, const ColumnField& g, double cell) {
  if (f.columns.empty() || g.columns.empty()) return {};
  const double direct_cost =
      static_cast<double>(f.point_count()) * static_cast<double>(g.point_count());
  const double rows = static_cast<double>(f.columns.back().j - f.columns.front().j +
                                          g.columns.back().j - g.columns.front().j + 1);
  long fa0 = std::numeric_limits<long>::max(), fa1 = std::numeric_limits<long>::min();
  for (const auto* h : {&f, &g}) {
    long lo = std::numeric_limits<long>::max(), hi = std::numeric_limits<long>::min();
    for (const auto& c : h->columns) {
      lo = std::min(lo, c.a0);
      hi = std::max(hi, col_end(c));
    }
    fa0 = std::min(fa0, lo);
    fa1 = std::max(fa1, hi);
  }
  const double box = rows * 2.0 * static_cast<double>(fa1 - fa0);
  const double fft_cost = 40.0 * box * std::log2(std::max(box, 2.0));
  if (direct_cost <= fft_cost || box > static_cast<double>(std::size_t{1} << 26)) {
    return convolve_direct(f, g, cell);
  }
  // The FFT route sums in a different order; canonical ordering keeps it symmetric too.
  return canonical_less(g, f) ? convolve_fft(g, f, cell) : convolve_fft(f, g, cell);
}

namespace {

double pair_at_origin(const ColumnField& a, const ColumnField& b, double cell) {
  double s = 0.0;
  for (const auto& ca : a.columns) {
    const auto* cb = find_column(b, -ca.j);
    if (!cb) continue;
    // sum_a A(a) B(-a): B index runs backwards.
    const long lo = std::max(ca.a0, 1 - col_end(*cb));
    const long hi = std::min(col_end(ca), -cb->a0 + 1);
    for (long x = lo; x < hi; ++x) {
      s += ca.values[static_cast<std::size_t>(x - ca.a0)] *
           cb->values[static_cast<std::size_t>(-x - cb->a0)];
    }
  }
  return s * cell;
}

struct Stars {
  std::vector<double> l;  // descending
  std::vector<double> k;  // descending
};

Stars stars_of(std::initializer_list<const LocalizedDensity*> phis) {
  Stars s;
  for (const auto* p : phis) {
    s.l.push_back(static_cast<double>(p->home().modulation));
    s.k.push_back(static_cast<double>(p->home().frequency));
  }
  std::sort(s.l.begin(), s.l.end(), std::greater<>());
  std::sort(s.k.begin(), s.k.end(), std::greater<>());
  return s;
}

void require_compatible(std::initializer_list<const LocalizedDensity*> phis) {
  const SpaceTimeGrid& g = (*phis.begin())->grid();
  for (const auto* p : phis) {
    const SpaceTimeGrid& h = p->grid();
    if (h.dtau != g.dtau || h.dxi != g.dxi) {
      throw ValidationError("densities live on different space-time grids");
    }
  }
}

void require_nonzero(std::initializer_list<const LocalizedDensity*> phis) {
  for (const auto* p : phis) {
    if (p->field().sum_squares() == 0.0) throw ValidationError("zero-norm density");
  }
}

}  // namespace

double triple_at(const ColumnField& f1, const ColumnField& f2, const ColumnField& f3, long a,
                 long j, double cell) {
  // Symmetric in the three factors: loop over the two smallest, look up the largest.
  std::array<const ColumnField*, 3> fs{&f1, &f2, &f3};
  std::sort(fs.begin(), fs.end(), [](const ColumnField* x, const ColumnField* y) {
    return x->point_count() < y->point_count();
  });
  const ColumnField& p = *fs[0];
  const ColumnField& q = *fs[1];
  const ColumnField& r = *fs[2];
  if (p.columns.empty() || q.columns.empty() || r.columns.empty()) return 0.0;
  double total = 0.0;
  for (const auto& cp : p.columns) {
    for (const auto& cq : q.columns) {
      const auto* cr = find_column(r, j - cp.j - cq.j);
      if (!cr) continue;
      // r index a - ap - aq must lie in [cr.a0, end).
      const long need_lo = a - col_end(*cr) + 1;  // ap + aq >= need_lo
      const long need_hi = a - cr->a0;             // ap + aq <= need_hi
      if (cp.a0 + cq.a0 > need_hi || col_end(cp) + col_end(cq) - 2 < need_lo) continue;
      for (std::size_t ip = 0; ip < cp.values.size(); ++ip) {
        const double vp = cp.values[ip];
        if (vp == 0.0) continue;
        const long ap = cp.a0 + static_cast<long>(ip);
        const long q_lo = std::max(cq.a0, need_lo - ap);
        const long q_hi = std::min(col_end(cq) - 1, need_hi - ap);
        double inner = 0.0;
        for (long aq = q_lo; aq <= q_hi; ++aq) {
          inner += cq.values[static_cast<std::size_t>(aq - cq.a0)] *
                   cr->values[static_cast<std::size_t>(a - ap - aq - cr->a0)];
        }
        total += vp * inner;
      }
    }
  }
  return total * cell * cell;
}

PairEstimate pair_estimate(const LocalizedDensity& phi1, const LocalizedDensity& phi2) {
  require_compatible({&phi1, &phi2});
  require_nonzero({&phi1, &phi2});
  const double cell = phi1.grid().cell();
  const ColumnField conv = convolve(phi1.field(), phi2.field(), cell);
  const double norm = std::sqrt(conv.sum_squares() * cell);
  const Stars s = stars_of({&phi1, &phi2});
  const double bound = std::pow(s.l[0], 0.25) * std::sqrt(s.l[1]) * phi1.l2_norm() * phi2.l2_norm();
  return {norm, bound, norm / bound};
}

MultiEstimate triple_at_origin(const LocalizedDensity& phi1, const LocalizedDensity& phi2,
                               const LocalizedDensity& phi3) {
  require_compatible({&phi1, &phi2, &phi3});
  require_nonzero({&phi1, &phi2, &phi3});
  const double value = triple_at(phi1.field(), phi2.field(), phi3.field(), 0, 0, phi1.grid().cell());
  const Stars s = stars_of({&phi1, &phi2, &phi3});
  const double norms = phi1.l2_norm() * phi2.l2_norm() * phi3.l2_norm();
  MultiEstimate r{};
  r.value = value;
  r.bound_general = std::sqrt(s.l[2] * s.k[2]) * norms;
  r.ratio_general = value / r.bound_general;
  if (s.k[2] > 1.0) {
    r.bound_improved = std::sqrt(s.l[0] * s.l[2] / s.k[0]) * norms;
    r.ratio_improved = value / r.bound_improved;
  } else {
    r.bound_improved = r.ratio_improved = kNaN;
  }
  return r;
}

MultiEstimate quad_at_origin(const LocalizedDensity& phi1, const LocalizedDensity& phi2,
                             const LocalizedDensity& phi3, const LocalizedDensity& phi4) {
  require_compatible({&phi1, &phi2, &phi3, &phi4});
  require_nonzero({&phi1, &phi2, &phi3, &phi4});
  const double cell = phi1.grid().cell();
  // Pair the largest factor with the smallest to keep both convolutions cheap.
  std::array<const ColumnField*, 4> fs{&phi1.field(), &phi2.field(), &phi3.field(), &phi4.field()};
  std::stable_sort(fs.begin(), fs.end(), [](const ColumnField* x, const ColumnField* y) {
    return x->point_count() < y->point_count();
  });
  const ColumnField a = convolve(*fs[0], *fs[3], cell);
  const ColumnField b = convolve(*fs[1], *fs[2], cell);
  const double value = pair_at_origin(a, b, cell);
  const Stars s = stars_of({&phi1, &phi2, &phi3, &phi4});
  const double norms = phi1.l2_norm() * phi2.l2_norm() * phi3.l2_norm() * phi4.l2_norm();
  MultiEstimate r{};
  r.value = value;
  r.bound_general = std::sqrt(s.l[2] * s.l[3] * s.k[2] * s.k[3]) * norms;
  r.ratio_general = value / r.bound_general;
  if (s.k[2] > 1.0) {
    r.bound_improved = std::sqrt(s.l[0] * s.l[1] * s.l[3] * s.k[3] / s.k[0]) * norms;
    r.ratio_improved = value / r.bound_improved;
  } else {
    r.bound_improved = r.ratio_improved = kNaN;
  }
  return r;
}

BoundedFactor BoundedFactor::constant(double value) {
  if (value < 0.0) throw ValidationError("constant factor must be nonnegative");
  return BoundedFactor({{0, 0, value}});
}

BoundedFactor BoundedFactor::from_atoms(std::vector<Atom> atoms) {
  for (const auto& a : atoms) {
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) {
      throw ValidationError("bounded factor atoms need finite nonnegative weights");
    }
  }
  return BoundedFactor(std::move(atoms));
}

BoundedFactor BoundedFactor::from_samples(const std::vector<std::vector<double>>& samples,
                                          long stride_tau, long stride_xi) {
  if (samples.empty() || samples.front().empty()) throw ValidationError("empty sample patch");
  if (stride_tau < 1 || stride_xi < 1) throw ValidationError("strides must be >= 1");
  const std::size_t nt = samples.size(), nx = samples.front().size();
  std::vector<Complex> in(nt * nx), out(nt * nx);
  for (std::size_t n = 0; n < nt; ++n) {
    if (samples[n].size() != nx) throw ValidationError("ragged sample patch");
    for (std::size_t m = 0; m < nx; ++m) {
      if (!std::isfinite(samples[n][m])) throw ValidationError("non-finite sample");
      in[n * nx + m] = samples[n][m];
    }
  }
  fft::transform_2d(in, out, nt, nx, fft::Direction::kForward);
  auto signed_mode = [](std::size_t i, std::size_t n) {
    return i < (n + 1) / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
  };
  std::vector<Atom> atoms;
  const double scale = 1.0 / static_cast<double>(nt * nx);
  for (std::size_t n = 0; n < nt; ++n) {
    for (std::size_t m = 0; m < nx; ++m) {
      const double w = std::abs(out[n * nx + m]) * scale;
      if (w == 0.0) continue;
      atoms.push_back({signed_mode(n, nt) * stride_tau, signed_mode(m, nx) * stride_xi, w});
    }
  }
  return BoundedFactor(std::move(atoms));
}

double BoundedFactor::sup_norm() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  return s;
}

BoundedEstimate quad_with_bounded(const LocalizedDensity& phi1, const LocalizedDensity& phi2,
                                  const LocalizedDensity& phi3, const BoundedFactor& g) {
  require_compatible({&phi1, &phi2, &phi3});
  require_nonzero({&phi1, &phi2, &phi3});
  const double sup = g.sup_norm();
  if (!(sup > 0.0)) throw ValidationError("bounded factor has zero sup norm");
  const double cell = phi1.grid().cell();
  double value = 0.0;
  for (const auto& atom : g.atoms()) {
    if (atom.weight == 0.0) continue;
    value += atom.weight *
             triple_at(phi1.field(), phi2.field(), phi3.field(), -atom.a, -atom.j, cell);
  }
  const Stars s = stars_of({&phi1, &phi2, &phi3});
  const double norms = phi1.l2_norm() * phi2.l2_norm() * phi3.l2_norm() * sup;
  BoundedEstimate r{};
  r.value = value;
  r.bound_one = std::sqrt(s.l[2] * s.k[2]) * norms;
  r.ratio_one = value / r.bound_one;
  r.bound_two = std::pow(s.l[1], 0.25) * std::sqrt(s.l[2]) * norms;
  r.ratio_two = value / r.bound_two;
  return r;
}

bool vanishing_predicted(std::span<const ModulationRegion> regions) {
  if (regions.size() != 3) throw ValidationError("vanishing criterion needs three regions");
  std::vector<long> ks, ls;
  for (const auto& r : regions) {
    ks.push_back(r.frequency);
    ls.push_back(r.modulation);
  }
  std::sort(ks.begin(), ks.end(), std::greater<>());
  const long l1 = *std::max_element(ls.begin(), ls.end());
  return ks[2] > 1 && 16 * l1 <= ks[0] * ks[2];
}

std::string convolution_sweep_csv(const std::vector<ConvolutionSweepRow>& rows) {
  auto join = [](const std::vector<long>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "-" : "") + std::to_string(v[i]);
    return s;
  };
  std::ostringstream os;
  os.precision(17);
  os << "lemma-id,K-profile,L-profile,value,bound,ratio,seed,grid-resolution\n";
  for (const auto& r : rows) {
    os << r.lemma << ',' << join(r.ks) << ',' << join(r.ls) << ',' << r.value << ',' << r.bound
       << ',' << r.ratio << ',' << r.seed << ',' << r.resolution << '\n';
  }
  return os.str();
}

double max_ratio(const std::vector<ConvolutionSweepRow>& rows) {
  double m = 0.0;
  for (const auto& r : rows) {
    if (std::isfinite(r.ratio)) m = std::max(m, r.ratio);
  }
  return m;
}

namespace {

struct Profile {
  std::vector<long> ks;
  std::vector<long> ls;
};

std::vector<LocalizedDensity> plateau_densities(const Profile& p, double resolution) {
  std::vector<ModulationRegion> regions;
  for (std::size_t i = 0; i < p.ks.size(); ++i) regions.emplace_back(p.ls[i], p.ks[i]);
  const SpaceTimeGrid grid = SpaceTimeGrid::for_regions(regions, resolution);
  std::vector<LocalizedDensity> out;
  for (const auto& r : regions) out.push_back(LocalizedDensity::generate(grid, r, 0, DensityStyle::kPlateau));
  return out;
}

std::vector<long> dyadics(long max) {
  std::vector<long> v;
  for (long k = 1; k <= max; k *= 2) v.push_back(k);
  return v;
}

template <class Eval>
std::vector<ConvolutionSweepRow> run_sweep(const std::vector<Profile>& profiles,
                                           std::size_t rows_per_profile, Eval eval) {
  std::vector<std::vector<ConvolutionSweepRow>> slots(profiles.size());
  parallel_for(profiles.size(), [&](std::size_t i) { slots[i] = eval(profiles[i]); });
  std::vector<ConvolutionSweepRow> rows;
  rows.reserve(profiles.size() * rows_per_profile);
  for (auto& s : slots) {
    for (auto& r : s) rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

namespace {

// K-line: every K-shape at K = 1..k_max with all L = 1. L-lines: every
// L-shape at L = 1..l_max with all K = kb, kb in {1, 2}. A full K x L
// rectangle is out of reach: D_{1,K} holds O(K^2) lattice points.
std::vector<Profile> line_profiles(long k_max, long l_max,
                                   const std::vector<std::vector<int>>& k_shapes,
                                   const std::vector<std::vector<int>>& l_shapes) {
  std::vector<Profile> out;
  auto expand = [](const std::vector<int>& shape, long v) {
    std::vector<long> r;
    for (int s : shape) r.push_back(s ? v : 1);
    return r;
  };
  for (long k : dyadics(k_max)) {
    for (const auto& ks : k_shapes) {
      out.push_back({expand(ks, k), std::vector<long>(ks.size(), 1)});
    }
  }
  for (long kb : {1L, 2L}) {
    for (long l : dyadics(l_max)) {
      for (const auto& ls : l_shapes) {
        out.push_back({std::vector<long>(ls.size(), kb), expand(ls, l)});
      }
    }
  }
  std::vector<Profile> unique;
  for (auto& p : out) {
    const bool seen = std::any_of(unique.begin(), unique.end(), [&](const Profile& q) {
      return q.ks == p.ks && q.ls == p.ls;
    });
    if (!seen) unique.push_back(std::move(p));
  }
  return unique;
}

}  // namespace

std::vector<ConvolutionSweepRow> sweep_pair(long k_max, long l_max, double resolution) {
  const auto profiles = line_profiles(k_max, l_max, {{1, 1}, {1, 0}}, {{0, 1}, {1, 1}});
  return run_sweep(profiles, 1, [resolution](const Profile& p) {
    const auto d = plateau_densities(p, resolution);
    const PairEstimate e = pair_estimate(d[0], d[1]);
    return std::vector<ConvolutionSweepRow>{
        {"pair", p.ks, p.ls, e.conv_norm, e.bound, e.ratio, 0, resolution}};
  });
}

std::vector<ConvolutionSweepRow> sweep_triple(long k_max, long l_max, double resolution) {
  const auto profiles =
      line_profiles(k_max, l_max, {{1, 1, 0}, {1, 1, 1}}, {{1, 0, 0}, {1, 1, 1}});
  return run_sweep(profiles, 2, [resolution](const Profile& p) {
    const auto d = plateau_densities(p, resolution);
    const MultiEstimate e = triple_at_origin(d[0], d[1], d[2]);
    std::vector<ConvolutionSweepRow> rows{
        {"triple-general", p.ks, p.ls, e.value, e.bound_general, e.ratio_general, 0, resolution}};
    if (std::isfinite(e.ratio_improved)) {
      rows.push_back({"triple-improved", p.ks, p.ls, e.value, e.bound_improved, e.ratio_improved,
                      0, resolution});
    }
    return rows;
  });
}

std::vector<ConvolutionSweepRow> sweep_quad(long k_max, long l_max, double resolution) {
  const auto profiles = line_profiles(k_max, l_max, {{1, 1, 0, 0}, {1, 1, 1, 1}},
                                      {{1, 0, 0, 0}, {1, 1, 1, 1}});
  return run_sweep(profiles, 2, [resolution](const Profile& p) {
    const auto d = plateau_densities(p, resolution);
    const MultiEstimate e = quad_at_origin(d[0], d[1], d[2], d[3]);
    std::vector<ConvolutionSweepRow> rows{
        {"quad-general", p.ks, p.ls, e.value, e.bound_general, e.ratio_general, 0, resolution}};
    if (std::isfinite(e.ratio_improved)) {
      rows.push_back({"quad-improved", p.ks, p.ls, e.value, e.bound_improved, e.ratio_improved,
                      0, resolution});
    }
    return rows;
  });
}

std::vector<ConvolutionSweepRow> sweep_bounded(long k_max, long l_max, double resolution) {
  const auto profiles =
      line_profiles(k_max, l_max, {{1, 1, 0}, {1, 1, 1}}, {{1, 0, 0}, {1, 1, 1}});
  // Unit constant: the extremal bounded factor for nonnegative densities.
  const BoundedFactor g = BoundedFactor::constant(1.0);
  return run_sweep(profiles, 2, [resolution, &g](const Profile& p) {
    const auto d = plateau_densities(p, resolution);
    const BoundedEstimate e = quad_with_bounded(d[0], d[1], d[2], g);
    return std::vector<ConvolutionSweepRow>{
        {"bounded-one", p.ks, p.ls, e.value, e.bound_one, e.ratio_one, 0, resolution},
        {"bounded-two", p.ks, p.ls, e.value, e.bound_two, e.ratio_two, 0, resolution}};
  });
}

}  // namespace bolab
