#include "scatter1d/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace scatter1d {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MismatchedWavenumber: return "MismatchedWavenumber";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SpectralSingularityProximity: return "SpectralSingularityProximity";
    case ErrorCode::VanishingDeterminantS: return "VanishingDeterminantS";
    case ErrorCode::NonReciprocal: return "NonReciprocal";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::NotASingularity: return "NotASingularity";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::Validation: return "Validation";
  }
  return "Unknown";
}

namespace {

std::string proximity_message(double abs_m22, double floor) {
  std::ostringstream os;
  os << "|M22| = " << abs_m22 << " is below the floor " << floor
     << ": scattering amplitudes diverge (spectral singularity)";
  return os.str();
}

}  // namespace

SpectralSingularityProximity::SpectralSingularityProximity(double abs_m22, double floor)
    : Error(ErrorCode::SpectralSingularityProximity, proximity_message(abs_m22, floor)),
      abs_m22_(abs_m22),
      floor_(floor) {}

Complex principal_sqrt(Complex w) {
  double phase = std::arg(w);
  if (phase < 0.0) phase += 2.0 * std::numbers::pi;
  return std::polar(std::sqrt(std::abs(w)), 0.5 * phase);
}

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double TransferMatrix::norm_inf() const {
  return std::max(std::abs(m11) + std::abs(m12), std::abs(m21) + std::abs(m22));
}

TransferMatrix TransferMatrix::inverse() const {
  const Complex d = det();
  if (d == 0.0 || !is_finite(d)) {
    throw Error(ErrorCode::SingularMatrix, "transfer matrix is not invertible");
  }
  return {m22 / d, -m12 / d, -m21 / d, m11 / d, k};
}

CoefficientPair TransferMatrix::apply(const CoefficientPair& in) const {
  return {m11 * in.a + m12 * in.b, m21 * in.a + m22 * in.b};
}

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
  if (std::abs(a.k - b.k) > 1e-14 * std::max(1.0, std::abs(a.k))) {
    std::ostringstream os;
    os << "cannot multiply transfer matrices at k = " << a.k << " and k = " << b.k;
    throw Error(ErrorCode::MismatchedWavenumber, os.str());
  }
  return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
          a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22, a.k};
}

double max_relative_difference(const TransferMatrix& a, const TransferMatrix& b) {
  auto rel = [](Complex x, Complex y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); };
  return std::max({rel(a.m11, b.m11), rel(a.m12, b.m12), rel(a.m21, b.m21), rel(a.m22, b.m22)});
}

TransferMatrix compose(std::span<const TransferMatrix> ms) {
  if (ms.empty()) return TransferMatrix::identity(0.0);
  TransferMatrix total = ms.front();
  for (const auto& m : ms.subspan(1)) total = m * total;
  return total;
}

ScatteringData scattering_from_transfer(const TransferMatrix& m, double floor) {
  const double threshold = floor * std::max(1.0, m.norm_inf());
  const double abs_m22 = std::abs(m.m22);
  if (!(abs_m22 > threshold)) throw SpectralSingularityProximity(abs_m22, threshold);
  return {-m.m21 / m.m22, m.m12 / m.m22, m.det() / m.m22, 1.0 / m.m22, m.k};
}

TransferMatrix transfer_from_scattering(const ScatteringData& d) {
  if (d.t_r == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "t_r = 0 has no transfer matrix");
  }
  return {(d.t_l * d.t_r - d.r_l * d.r_r) / d.t_r, d.r_r / d.t_r, -d.r_l / d.t_r,
          1.0 / d.t_r, d.k};
}

SMatrix s_matrix(const ScatteringData& d, SConvention convention) {
  SMatrix out;
  out.convention = convention;
  switch (convention) {
    case SConvention::S1: out.s = {{{d.t_l, d.r_r}, {d.r_l, d.t_r}}}; break;
    case SConvention::S2: out.s = {{{d.r_l, d.t_r}, {d.t_l, d.r_r}}}; break;
    case SConvention::S3: out.s = {{{d.r_r, d.t_l}, {d.t_r, d.r_l}}}; break;
    case SConvention::S4: out.s = {{{d.t_r, d.r_l}, {d.r_r, d.t_l}}}; break;
  }
  return out;
}

std::pair<Complex, Complex> s_eigenvalues(const ScatteringData& d) {
  const Complex mean = 0.5 * (d.t_l + d.t_r);
  const Complex half_diff = 0.5 * (d.t_l - d.t_r);
  const Complex root = principal_sqrt(half_diff * half_diff + d.r_l * d.r_r);
  return {mean + root, mean - root};
}

Complex det_s(const ScatteringData& d) { return d.t_l * d.t_r - d.r_l * d.r_r; }

ScatteringData negative_k_data(const ScatteringData& d) {
  if (d.k == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "negative-k relations exclude k = 0");
  }
  const Complex D = det_s(d);
  if (D == 0.0 || !is_finite(D)) {
    throw Error(ErrorCode::VanishingDeterminantS, "det S vanishes; -k data undefined");
  }
  return {-d.r_r / D, -d.r_l / D, d.t_l / D, d.t_r / D, -d.k};
}

Complex wronskian_constant(const ScatteringData& d, double reciprocity_tol) {
  const double scale = std::max(std::abs(d.t_l), std::abs(d.t_r));
  if (std::abs(d.t_l - d.t_r) > reciprocity_tol * std::max(1.0, scale)) {
    throw Error(ErrorCode::NonReciprocal,
                "Wronskian 2ik/t presumes reciprocal transmission (t_l == t_r)");
  }
  if (d.t_l == 0.0) throw Error(ErrorCode::InvalidArgument, "t = 0");
  return 2.0 * kI * d.k / d.t_l;
}

}  // namespace scatter1d
