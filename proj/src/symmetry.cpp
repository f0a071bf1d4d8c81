#include "scatter1d/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace scatter1d {

std::string to_string(const SymmetryOp& op) {
  std::ostringstream os;
  switch (op.kind) {
    case SymmetryOp::Kind::Parity: return "P";
    case SymmetryOp::Kind::TimeReversal: return "T";
    case SymmetryOp::Kind::PT: return "PT";
    case SymmetryOp::Kind::ParityAbout: os << "P(a=" << op.a << ")"; break;
    case SymmetryOp::Kind::PTAbout: os << "PT(a=" << op.a << ")"; break;
    case SymmetryOp::Kind::Translation: os << "Translation(a=" << op.a << ")"; break;
  }
  return os.str();
}

const char* to_string(Exactness e) {
  switch (e) {
    case Exactness::Exact: return "Exact";
    case Exactness::Broken: return "Broken";
    case Exactness::NotApplicable: return "NotApplicable";
  }
  return "NotApplicable";
}

namespace {

TransferMatrix translate(const TransferMatrix& m, double a) {
  return {m.m11, std::exp(-2.0 * kI * a * m.k) * m.m12, std::exp(2.0 * kI * a * m.k) * m.m21,
          m.m22, m.k};
}

TransferMatrix parity(const TransferMatrix& m) {
  const Complex d = m.det();
  if (d == 0.0) throw Error(ErrorCode::SingularMatrix, "parity transform needs det M != 0");
  return {m.m11 / d, -m.m21 / d, -m.m12 / d, m.m22 / d, m.k};
}

TransferMatrix pt(const TransferMatrix& m) {
  const Complex d = std::conj(m.det());
  if (d == 0.0) throw Error(ErrorCode::SingularMatrix, "PT transform needs det M != 0");
  return {std::conj(m.m22) / d, -std::conj(m.m12) / d, -std::conj(m.m21) / d,
          std::conj(m.m11) / d, m.k};
}

ScatteringData translate(const ScatteringData& d, double a) {
  return {std::exp(2.0 * kI * a * d.k) * d.r_l, std::exp(-2.0 * kI * a * d.k) * d.r_r, d.t_l,
          d.t_r, d.k};
}

Complex conj_det_s(const ScatteringData& d) {
  const Complex D = det_s(d);
  if (D == 0.0 || !is_finite(D)) {
    throw Error(ErrorCode::VanishingDeterminantS, "transform needs det S != 0");
  }
  return std::conj(D);
}

Sign sign_of(double x) { return x < 0.0 ? Sign::Minus : Sign::Plus; }

}  // namespace

TransferMatrix transform_transfer(const TransferMatrix& m, const SymmetryOp& op) {
  if (m.det() == 0.0 || !is_finite(m.det())) {
    throw Error(ErrorCode::SingularMatrix, "cannot transform a singular transfer matrix");
  }
  switch (op.kind) {
    case SymmetryOp::Kind::Parity: return parity(m);
    case SymmetryOp::Kind::ParityAbout: return translate(parity(m), 2.0 * op.a);
    case SymmetryOp::Kind::TimeReversal:
      return {std::conj(m.m22), std::conj(m.m21), std::conj(m.m12), std::conj(m.m11), m.k};
    case SymmetryOp::Kind::PT: return pt(m);
    case SymmetryOp::Kind::PTAbout: return translate(pt(m), 2.0 * op.a);
    case SymmetryOp::Kind::Translation: return translate(m, op.a);
  }
  return m;
}

ScatteringData transform_scattering(const ScatteringData& d, const SymmetryOp& op) {
  switch (op.kind) {
    case SymmetryOp::Kind::Parity: return {d.r_r, d.r_l, d.t_r, d.t_l, d.k};
    case SymmetryOp::Kind::ParityAbout:
      return translate(ScatteringData{d.r_r, d.r_l, d.t_r, d.t_l, d.k}, 2.0 * op.a);
    case SymmetryOp::Kind::TimeReversal: {
      const Complex Dc = conj_det_s(d);
      return {-std::conj(d.r_r) / Dc, -std::conj(d.r_l) / Dc, std::conj(d.t_l) / Dc,
              std::conj(d.t_r) / Dc, d.k};
    }
    case SymmetryOp::Kind::PT:
    case SymmetryOp::Kind::PTAbout: {
      const Complex Dc = conj_det_s(d);
      const ScatteringData out{-std::conj(d.r_l) / Dc, -std::conj(d.r_r) / Dc,
                               std::conj(d.t_r) / Dc, std::conj(d.t_l) / Dc, d.k};
      return op.kind == SymmetryOp::Kind::PT ? out : translate(out, 2.0 * op.a);
    }
    case SymmetryOp::Kind::Translation: return translate(d, op.a);
  }
  return d;
}

double scattering_difference(const ScatteringData& a, const ScatteringData& b) {
  auto rel = [](Complex x, Complex y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); };
  return std::max({rel(a.r_l, b.r_l), rel(a.r_r, b.r_r), rel(a.t_l, b.t_l), rel(a.t_r, b.t_r)});
}

SigmaSigns sigma_and_signs(const ScatteringData& d, double tol) {
  const Complex D = det_s(d);
  if (std::abs(std::abs(D) - 1.0) > tol) {
    std::ostringstream os;
    os << "|det S| = " << std::abs(D) << " is not unimodular";
    throw Error(ErrorCode::NotUnimodular, os.str());
  }
  SigmaSigns out;
  out.sigma = std::arg(D);
  const Complex half = std::exp(-0.5 * kI * out.sigma);
  auto eps = [&](Complex t) {
    return std::abs(t) > tol ? sign_of((t * half).real()) : Sign::Indeterminate;
  };
  auto eta = [&](Complex r) {
    return std::abs(r) > tol ? sign_of((r * half / kI).real()) : Sign::Indeterminate;
  };
  out.eps_l = eps(d.t_l);
  out.eps_r = eps(d.t_r);
  out.eta_l = eta(d.r_l);
  out.eta_r = eta(d.r_r);
  return out;
}

double tau(const ScatteringData& d, const SigmaSigns& signs) {
  return 0.5 * (static_cast<int>(signs.eps_l) * std::abs(d.t_l) +
                static_cast<int>(signs.eps_r) * std::abs(d.t_r));
}

SymmetryVerdict classify(const MatrixSource& source, std::span<const double> grid,
                         const SymmetryOp& op, double tol) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "classification grid is empty");
  const bool wants_tau =
      op.kind == SymmetryOp::Kind::TimeReversal || op.kind == SymmetryOp::Kind::PT;

  SymmetryVerdict verdict;
  verdict.op = op;
  verdict.tolerance = tol;
  bool tau_available = wants_tau;
  for (double k : grid) {
    if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "classification grid needs k > 0");
    const TransferMatrix m = source(k);
    if (std::abs(m.m22) < 1e-6 * std::max(1.0, m.norm_inf())) {
      ++verdict.skipped_points;
      continue;
    }
    ScatteringData d;
    ScatteringData transformed;
    try {
      d = scattering_from_transfer(m);
      transformed = transform_scattering(d, op);
    } catch (const Error&) {
      ++verdict.skipped_points;
      continue;
    }
    verdict.max_residual = std::max(verdict.max_residual, scattering_difference(transformed, d));
    if (tau_available) {
      try {
        const SigmaSigns signs = sigma_and_signs(d, tol);
        verdict.tau_max = std::max(verdict.tau_max, std::abs(tau(d, signs)));
      } catch (const Error&) {
        tau_available = false;
      }
    }
  }
  verdict.holds = verdict.max_residual <= tol;
  if (wants_tau && tau_available && verdict.holds) {
    verdict.exactness = verdict.tau_max <= 1.0 + tol ? Exactness::Exact : Exactness::Broken;
  }
  return verdict;
}

}  // namespace scatter1d
