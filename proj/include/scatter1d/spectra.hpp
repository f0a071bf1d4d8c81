#pragma once

// Complex-k zeros of transfer-matrix entries and their physical meaning,
// plus the slab laser-threshold solver, invisibility finder and the
// polynomial-in-coupling check for multi-delta potentials.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "scatter1d/models.hpp"

namespace scatter1d {

using ComplexFn = std::function<Complex(Complex k)>;

struct Region {
  double re_min = 0.0;
  double re_max = 1.0;
  double im_min = 0.0;
  double im_max = 0.0;

  bool contains(Complex k, double margin = 0.0) const {
    return k.real() >= re_min - margin && k.real() <= re_max + margin &&
           k.imag() >= im_min - margin && k.imag() <= im_max + margin;
  }
};

struct ZeroOptions {
  int nx = 400;
  int ny = 400;
  double tol_res = 1e-10;
  double tol_sep = 1e-8;
  int max_iter = 100;
};

struct Zero {
  Complex k;
  double residual = 0.0;
  bool converged = true;  // false: reported with its last residual (NotConverged)
};

/// Scans |f| on an nx x ny grid for local minima and refines each one with
/// damped Newton (central-difference derivative). Roots closer than tol_sep
/// are merged. Candidates that leave the region are discarded; candidates that
/// stall inside it are kept with converged = false. Sorted by (Re k, Im k).
std::vector<Zero> find_zeros(const ComplexFn& f, const Region& region,
                             const ZeroOptions& opts = {});

/// Same refinement seeded from local minima of |f| on n points of the segment
/// [a, b] in the complex plane.
std::vector<Zero> find_zeros_on_segment(const ComplexFn& f, Complex a, Complex b, int n,
                                        const ZeroOptions& opts = {});

enum class SpectralKind {
  SpectralSingularity,
  TimeReversedSingularity,
  SelfDualSingularity,
  Resonance,
  Antiresonance,
  BoundState,
  ComplexEigenvalue,
};

const char* to_string(SpectralKind kind);

struct SpectralPoint {
  Complex k;
  double energy = 0.0;  // Re(k)^2 - Im(k)^2
  double width = 0.0;   // -2 Re(k) Im(k)
  SpectralKind kind = SpectralKind::SpectralSingularity;
  double residual = 0.0;  // |M22| (or |M11| for time-reversed points)
  bool converged = true;
};

struct SpectrumOptions {
  ZeroOptions zeros;
  double axis_tol = 1e-9;        // |Im k| or |Re k| below axis_tol*max(1,|k|) snaps to the axis
  double self_dual_tol = 1e-6;   // |M11| / max(1, |M|) at a root of M22
  int axis_samples = 4000;       // seeds along the real and imaginary axes
};

/// Zeros of M22 and M11 inside `region`, classified. Zeros of M22 on the
/// negative real or negative imaginary axis and non-real zeros of M11 are not
/// reported (the former mirror zeros of M11 at -k).
std::vector<SpectralPoint> classify_spectrum(const PotentialModel& model, const Region& region,
                                             const SpectrumOptions& opts = {});

/// Same, for an arbitrary matrix callback.
std::vector<SpectralPoint> classify_spectrum(const std::function<TransferMatrix(Complex)>& source,
                                             const Region& region,
                                             const SpectrumOptions& opts = {});

struct EigenvalueLimit {
  Complex finite_limit;       // eigenvalue that stays bounded, at the closest approach point
  bool finite_is_plus = true; // which of (s_+, s_-) stays bounded
  double divergence_exponent = 0.0;  // slope of log|s_div| against log|k - k0|
  Complex m11_half;           // M11(k0) / 2
};

/// Follows the S-matrix eigenvalues along `approach` (k -> k0). Throws
/// NotASingularity if |M22(k0)| > tol.
EigenvalueLimit s_eigenvalue_limit(const PotentialModel& model, double k0,
                                   std::span<const double> approach, double tol = 1e-8);

struct LaserSolution {
  double k0 = 0.0;
  Complex n0;
  double eta0 = 0.0;
  double kappa0 = 0.0;
  int m = 1;
  double phi0 = 0.0;
  double g = 0.0;
  double width = 0.0;
  double m22_residual = 0.0;
  int iterations = 0;

  Barrier equivalent_barrier() const { return {k0 * k0 * (1.0 - n0 * n0), 0.0, width}; }
};

struct LaserQuery {
  enum class SolveFor { KappaAndK, EtaAndKappa };

  SolveFor solve_for = SolveFor::KappaAndK;
  double width = 1.0;
  int m = 1;
  double eta0 = 1.5;  // given when solving for (kappa0, k0)
  double k0 = 1.0;    // given when solving for (eta0, kappa0)
  double damping = 1.0;
  int max_iter = 10000;
  double tol = 1e-15;
};

/// Threshold gain of a homogeneous slab: damped fixed-point iteration on the
/// coupled (kappa0, k0) or (eta0, kappa0) equations. Verifies |M22(k0)| < 1e-8
/// on the equivalent barrier; throws NotConverged otherwise.
LaserSolution slab_laser_solve(const LaserQuery& query);

/// (2/L) ln|(n0 + 1)/(n0 - 1)|.
double threshold_gain(Complex n0, double width);

enum class InvisibilityKind {
  LeftReflectionless,
  RightReflectionless,
  Transparent,
  LeftInvisible,
  RightInvisible,
  BidirectionallyInvisible,
};

const char* to_string(InvisibilityKind kind);

struct InvisibilityPoint {
  double k = 0.0;
  InvisibilityKind kind = InvisibilityKind::Transparent;
  double abs_r_l = 0.0;
  double abs_r_r = 0.0;
  double abs_t_minus_one = 0.0;
};

struct InvisibilityOptions {
  int samples = 2000;
  double tol = 1e-9;  // |M21|, |M12| or |M22 - 1| accepted as zero
  double tol_sep = 1e-8;
  int max_iter = 100;
};

struct InvisibilityResult {
  bool transparent_everywhere = false;  // M = I at every probe: no k list is meaningful
  std::vector<InvisibilityPoint> points;
};

InvisibilityResult find_invisibility(const PotentialModel& model, double k_min, double k_max,
                                     const InvisibilityOptions& opts = {});

enum class Entry { M11, M12, M21, M22 };

Complex entry_of(const TransferMatrix& m, Entry e);

struct PolynomialCheck {
  bool is_polynomial = false;
  double max_interp_residual = 0.0;
};

/// Interpolates values[0..degree] with a polynomial in the samples and
/// returns the largest miss on the remaining samples, relative to max |value|.
double interpolation_residual(std::span<const double> samples, std::span<const Complex> values,
                              int degree);

/// Checks that an entry of the multi-delta transfer matrix is a polynomial of
/// the given degree (default: number of centers) in eps.
PolynomialCheck verify_polynomial_exactness(const MultiDelta& md, double k, Entry entry,
                                            std::span<const double> eps_samples,
                                            int degree = -1, double tol = 1e-9);

/// PT-symmetric mirrored pair: height z on [-L, 0), conj(z) on [0, L].
Sampled pt_mirror_pair(Complex z, double half_width);

struct PtSingularity {
  double k0 = 0.0;
  double gain = 0.0;  // Im z of the left half
  double m22_residual = 0.0;
  double m11_ratio = 0.0;  // |M11(k0)| / |M(k0)|
  Sampled model;
};

/// Tunes Im z of the mirrored pair (Re z fixed) until M22 has a real zero in
/// [k_min, k_max]: coarse scan over gain in [gain_min, gain_max], then a
/// two-variable Newton solve for (k0, gain).
PtSingularity tune_pt_mirror_singularity(double re_z, double half_width, double gain_min,
                                         double gain_max, double k_min, double k_max,
                                         int scan = 200);

}  // namespace scatter1d
