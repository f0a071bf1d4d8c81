#pragma once

// Catalog of one-dimensional interactions and their transfer matrices.
//
// Delta, MultiDelta, Barrier and PointInteractions have exact matrices.
// Sampled potentials are reduced to a row of constant slices (one Barrier per
// slice, height taken at the slice midpoint) and composed left to right.
// LocallyPeriodic potentials are tabulated onto such a row of slices.

#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "scatter1d/core.hpp"

namespace scatter1d {

/// Plain 2x2 complex matrix (matching matrices of point interactions).
struct Matrix2 {
  Complex a11{1.0};
  Complex a12{0.0};
  Complex a21{0.0};
  Complex a22{1.0};

  Complex det() const { return a11 * a22 - a12 * a21; }
};

/// v(x) = z delta(x).
struct Delta {
  Complex z;
};

/// v(x) = eps * sum_j z_j delta(x - c_j), centers strictly increasing.
struct MultiDelta {
  double eps = 1.0;
  std::vector<Complex> couplings;
  std::vector<double> centers;
};

/// v(x) = z on [x0, x0 + width], zero elsewhere.
struct Barrier {
  Complex z;
  double x0 = 0.0;
  double width = 1.0;
};

/// Matching matrix B(k) relating (psi, psi') across a center. Must be safe to
/// call concurrently.
using MatchingMatrixFn = std::function<Matrix2(Complex k)>;

struct PointInteraction {
  double center = 0.0;
  MatchingMatrixFn matching;

  static PointInteraction constant(double center, Matrix2 b);
};

struct PointInteractions {
  std::vector<PointInteraction> sites;
};

/// f(x) = sum_n z_n exp(2 pi i n x / width) on [-width/2, width/2].
struct LocallyPeriodic {
  double width = 1.0;
  std::map<int, Complex> coefficients;
  int slices_per_period = 64;

  Complex value(double x) const;
  int slice_count() const;
};

/// Piecewise-constant potential on [a, b]: heights[j] is the value on the
/// j-th of heights.size() equal slices.
struct Sampled {
  double a = 0.0;
  double b = 1.0;
  std::vector<Complex> heights;

  int slices() const { return static_cast<int>(heights.size()); }
};

using PotentialFn = std::function<Complex(double x)>;

/// Midpoint sampling of v on n equal slices of [a, b].
Sampled sample_potential(const PotentialFn& v, double a, double b, int n);

using PotentialModel =
    std::variant<Delta, MultiDelta, Barrier, PointInteractions, LocallyPeriodic, Sampled>;

std::string model_name(const PotentialModel& model);

/// Throws InvalidArgument naming the offending field.
void validate(const PotentialModel& model);

/// True for models that are local scattering potentials (det M = 1 expected).
bool is_potential(const PotentialModel& model);

/// A localized piece of the interaction together with its transfer matrix.
struct Element {
  double x_from = 0.0;
  double x_to = 0.0;
  TransferMatrix m;
};

/// Left-to-right pieces whose composition is the model's transfer matrix.
std::vector<Element> elements(const PotentialModel& model, Complex k);

/// Transfer matrix at (possibly complex) k. Throws for k = 0 or singular B_j.
TransferMatrix transfer_matrix(const PotentialModel& model, Complex k);

/// Barrier on [x0, x0 + width] of height z, using the cos/sin form.
TransferMatrix barrier_matrix(Complex z, double x0, double width, Complex k);

/// N_c^{-1} B N_c for a single point interaction at c.
TransferMatrix point_interaction_matrix(double center, const Matrix2& b, Complex k);

/// Product of det B_j(k) over all sites.
Complex matching_determinant_product(const PointInteractions& pi, Complex k);

/// Closed-form amplitudes for Delta and Barrier (real k > 0).
ScatteringData closed_form_scattering(const Delta& delta, double k);
ScatteringData closed_form_scattering(const Barrier& barrier, double k);

struct RefractiveIndex {
  Complex n;
  Complex n_plus;   // (n + 1/n) / 2
  Complex n_minus;  // (n - 1/n) / 2
};

/// n = sqrt(1 - z/k^2) on the principal branch. Throws when n = 0.
RefractiveIndex refractive_index(Complex z, double k);

/// g = -2 k Im(n).
double gain_coefficient(Complex n, double k);

/// Homogeneous slab of relative permittivity eps_slab on [0, width].
struct SlabOptics {
  Complex eps_slab{1.0};
  double width = 1.0;

  /// Barrier with z = k^2 (1 - eps_slab).
  Barrier barrier_at(double k) const;
};

struct ProfileEntry {
  double x_from;  // -inf for the leftmost region
  double x_to;    // +inf for the rightmost region
  CoefficientPair pair;
};

/// Coefficients (A, B) in every force-free gap, starting from `left` at
/// x -> -inf. The last entry equals M * left.
std::vector<ProfileEntry> coefficient_profile(const PotentialModel& model, double k,
                                              const CoefficientPair& left);

}  // namespace scatter1d
