#pragma once

#include <functional>
#include <span>
#include <string>

#include "scatter1d/core.hpp"

namespace scatter1d {

struct SymmetryOp {
  enum class Kind { Parity, ParityAbout, TimeReversal, PT, PTAbout, Translation };

  Kind kind = Kind::Parity;
  double a = 0.0;  // reflection point (ParityAbout, PTAbout) or shift (Translation)

  static SymmetryOp parity() { return {Kind::Parity, 0.0}; }
  static SymmetryOp parity_about(double a) { return {Kind::ParityAbout, a}; }
  static SymmetryOp time_reversal() { return {Kind::TimeReversal, 0.0}; }
  static SymmetryOp pt() { return {Kind::PT, 0.0}; }
  static SymmetryOp pt_about(double a) { return {Kind::PTAbout, a}; }
  static SymmetryOp translation(double a) { return {Kind::Translation, a}; }
};

std::string to_string(const SymmetryOp& op);

/// Transfer matrix of the transformed system:
///   P -> s1 M^{-1} s1,  T -> s1 M* s1,  PT -> (M^{-1})*,
///   T_a -> e^{-iak s3} M e^{iak s3},  P_a -> T_{2a} P,  (PT)_a -> T_{2a} PT.
TransferMatrix transform_transfer(const TransferMatrix& m, const SymmetryOp& op);

/// Same transformation expressed on (r_l, r_r, t_l, t_r).
ScatteringData transform_scattering(const ScatteringData& d, const SymmetryOp& op);

enum class Exactness { Exact, Broken, NotApplicable };

const char* to_string(Exactness e);

struct SymmetryVerdict {
  SymmetryOp op;
  bool holds = false;
  double max_residual = 0.0;
  double tolerance = 0.0;
  Exactness exactness = Exactness::NotApplicable;
  double tau_max = 0.0;
  int skipped_points = 0;
};

using MatrixSource = std::function<TransferMatrix(Complex k)>;

inline constexpr double kDefaultSymmetryTol = 1e-8;

/// Largest channel-wise |a - b| / max(1, |b|).
double scattering_difference(const ScatteringData& a, const ScatteringData& b);

/// Checks invariance of the scattering data under `op` on every grid point.
/// Points where |M22| / max(1, |M|) < 1e-6 are skipped and counted. For T and
/// PT the verdict also reports exactness from tau(k).
SymmetryVerdict classify(const MatrixSource& source, std::span<const double> grid,
                         const SymmetryOp& op, double tol = kDefaultSymmetryTol);

enum class Sign { Minus = -1, Indeterminate = 0, Plus = 1 };

struct SigmaSigns {
  double sigma = 0.0;  // arg det S in (-pi, pi]
  Sign eps_l = Sign::Indeterminate;
  Sign eps_r = Sign::Indeterminate;
  Sign eta_l = Sign::Indeterminate;
  Sign eta_r = Sign::Indeterminate;
};

/// Decomposes data with |det S| = 1 as t = eps |t| e^{i sigma/2} and
/// r = i eta |r| e^{i sigma/2}. Channels with |amplitude| <= tol have an
/// Indeterminate sign. Throws NotUnimodular when ||det S| - 1| > tol.
SigmaSigns sigma_and_signs(const ScatteringData& d, double tol = kDefaultSymmetryTol);

/// tau = (eps_l |t_l| + eps_r |t_r|) / 2.
double tau(const ScatteringData& d, const SigmaSigns& signs);

}  // namespace scatter1d
