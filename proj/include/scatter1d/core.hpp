#pragma once

// Complex 2x2 transfer-matrix algebra and conversions between transfer
// matrices, scattering data and S-matrices.
//
// Units: hbar = 2m = 1, so the energy of a plane wave e^{ikx} is E = k^2.
// Asymptotic solutions are written A e^{ikx} + B e^{-ikx}; the transfer
// matrix maps the pair (A_-, B_-) at x -> -inf to (A_+, B_+) at x -> +inf.

#include <array>
#include <complex>
#include <span>
#include <utility>

#include "scatter1d/errors.hpp"

namespace scatter1d {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Square root on the branch sqrt(w) = sqrt(|w|) e^{i phi}, phi in [0, pi).
/// Unlike std::sqrt, the result never has a negative imaginary part.
Complex principal_sqrt(Complex w);

bool is_finite(Complex z);

/// Amplitudes of e^{+ikx} (a) and e^{-ikx} (b) in a force-free region.
struct CoefficientPair {
  Complex a;
  Complex b;
};

struct TransferMatrix {
  Complex m11{1.0};
  Complex m12{0.0};
  Complex m21{0.0};
  Complex m22{1.0};
  Complex k{0.0};

  static TransferMatrix identity(Complex k) { return {1.0, 0.0, 0.0, 1.0, k}; }

  Complex det() const { return m11 * m22 - m12 * m21; }
  /// Maximum absolute row sum.
  double norm_inf() const;
  TransferMatrix inverse() const;
  CoefficientPair apply(const CoefficientPair& in) const;
};

/// Matrix product a*b. Throws MismatchedWavenumber if a.k != b.k.
TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b);

/// Largest entrywise |a_ij - b_ij| / max(1, |b_ij|).
double max_relative_difference(const TransferMatrix& a, const TransferMatrix& b);

/// Composes matrices of adjacent regions listed left to right: the result is
/// M_n ... M_2 M_1. An empty list yields the identity (with k = 0).
TransferMatrix compose(std::span<const TransferMatrix> ms);

struct ScatteringData {
  Complex r_l{0.0};
  Complex r_r{0.0};
  Complex t_l{1.0};
  Complex t_r{1.0};
  Complex k{0.0};

  static ScatteringData free(Complex k) { return {0.0, 0.0, 1.0, 1.0, k}; }
};

inline constexpr double kDefaultM22Floor = 1e-14;

/// r_l = -M21/M22, t_l = det M/M22, r_r = M12/M22, t_r = 1/M22.
/// Throws SpectralSingularityProximity when |M22| <= floor * max(1, |M|_inf).
ScatteringData scattering_from_transfer(const TransferMatrix& m,
                                        double floor = kDefaultM22Floor);

TransferMatrix transfer_from_scattering(const ScatteringData& d);

enum class SConvention { S1, S2, S3, S4 };

struct SMatrix {
  std::array<std::array<Complex, 2>, 2> s{};
  SConvention convention = SConvention::S1;

  const Complex& operator()(int i, int j) const { return s[i][j]; }
  Complex& operator()(int i, int j) { return s[i][j]; }
};

/// S1 = [[t_l, r_r], [r_l, t_r]]; S2 = s1 S1; S3 = S1 s1; S4 = s1 S1 s1.
SMatrix s_matrix(const ScatteringData& d, SConvention convention = SConvention::S1);

/// Eigenvalues (s_+, s_-) of S1, using principal_sqrt for the discriminant.
std::pair<Complex, Complex> s_eigenvalues(const ScatteringData& d);

/// det S = t_l t_r - r_l r_r, equal to M11/M22.
Complex det_s(const ScatteringData& d);

/// Scattering data at -k from data at k (requires det S != 0, k != 0).
ScatteringData negative_k_data(const ScatteringData& d);

/// Wronskian W = 2ik/t of the Jost solutions. Needs t_l == t_r within
/// reciprocity_tol (relative).
Complex wronskian_constant(const ScatteringData& d, double reciprocity_tol = 1e-10);

}  // namespace scatter1d
