#include "scatter1d/verify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "scatter1d/parallel.hpp"

namespace scatter1d {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Passed: return "Passed";
    case CheckStatus::Failed: return "Failed";
    case CheckStatus::NotApplicable: return "NotApplicable";
  }
  return "?";
}

ScatteringSystem ScatteringSystem::from_model(const PotentialModel& model) {
  validate(model);
  ScatteringSystem sys;
  sys.name = model_name(model);
  sys.source = [model](Complex k) { return transfer_matrix(model, k); };
  sys.is_potential = scatter1d::is_potential(model);
  if (const auto* pi = std::get_if<PointInteractions>(&model)) {
    sys.det_product = [pi = *pi](Complex k) { return matching_determinant_product(pi, k); };
  }
  return sys;
}

ScatteringSystem with_corrupted_m11(ScatteringSystem system, Complex factor) {
  system.name += " (corrupted)";
  system.source = [inner = system.source, factor](Complex k) {
    TransferMatrix m = inner(k);
    m.m11 *= factor;
    return m;
  };
  return system;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) {
    throw Error(ErrorCode::InvalidArgument, "log grid needs 0 < min <= max and count >= 1");
  }
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    g[i] = count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  }
  return g;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
  if (!(hi >= lo) || count < 1) {
    throw Error(ErrorCode::InvalidArgument, "linear grid needs min <= max and count >= 1");
  }
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  return g;
}

std::vector<double> default_grid() { return log_grid(0.1, 10.0, 100); }

namespace {

double rel(double residual, double magnitude) { return residual / std::max(1.0, magnitude); }

struct PointData {
  TransferMatrix m;
  ScatteringData d;
};

// Data at k, or nothing near a zero of M22.
std::optional<PointData> point_data(const ScatteringSystem& sys, Complex k) {
  const TransferMatrix m = sys.source(k);
  if (std::abs(m.m22) < 1e-6 * std::max(1.0, m.norm_inf())) return std::nullopt;
  try {
    return PointData{m, scattering_from_transfer(m)};
  } catch (const SpectralSingularityProximity&) {
    return std::nullopt;
  }
}

using PointCheck = std::function<std::optional<double>(double k)>;

ResidualReport evaluate(std::string name, const std::vector<double>& grid, double tol,
                        const PointCheck& check) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "verification grid is empty");
  ResidualReport r;
  r.identity_name = std::move(name);
  r.grid = grid;
  r.tolerance = tol;
  std::vector<std::optional<double>> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { values[i] = check(grid[i]); });
  int used = 0;
  double sum = 0.0;
  for (const auto& v : values) {
    if (!v) {
      ++r.skipped_points;
      continue;
    }
    ++used;
    sum += *v;
    r.max_residual = std::max(r.max_residual, *v);
  }
  if (used == 0) {
    r.status = CheckStatus::NotApplicable;
    r.note = "every grid point was skipped";
    return r;
  }
  r.mean_residual = sum / used;
  r.status = r.max_residual <= tol ? CheckStatus::Passed : CheckStatus::Failed;
  return r;
}

ResidualReport not_applicable(std::string name, const std::vector<double>& grid, double tol,
                              std::string note) {
  ResidualReport r;
  r.identity_name = std::move(name);
  r.grid = grid;
  r.tolerance = tol;
  r.status = CheckStatus::NotApplicable;
  r.note = std::move(note);
  return r;
}

constexpr double kSignTol = 1e-8;

}  // namespace

ResidualReport check_transmission_reciprocity(const ScatteringSystem& sys,
                                              const std::vector<double>& grid, double tol) {
  return evaluate("transmission_reciprocity", grid, tol, [&](double k) -> std::optional<double> {
    const auto p = point_data(sys, k);
    if (!p) return std::nullopt;
    const double dt = rel(std::abs(p->d.t_l - p->d.t_r), std::abs(p->d.t_r));
    return std::max(dt, std::abs(p->m.det() - 1.0));
  });
}

ResidualReport check_reciprocity(const ScatteringSystem& sys, const std::vector<double>& grid,
                                 double tol) {
  if (!sys.det_product) return check_transmission_reciprocity(sys, grid, tol);
  return evaluate("det_product", grid, tol, [&](double k) -> std::optional<double> {
    const TransferMatrix m = sys.source(k);
    const Complex expected = sys.det_product(k);
    return rel(std::abs(m.det() - expected), std::abs(expected));
  });
}

ResidualReport check_unitarity(const ScatteringSystem& sys, const std::vector<double>& grid,
                               double tol) {
  const SymmetryVerdict t = classify(sys.source, grid, SymmetryOp::time_reversal());
  if (!t.holds) return not_applicable("unitarity", grid, tol, "system is not T-symmetric");
  return evaluate("unitarity", grid, tol, [&](double k) -> std::optional<double> {
    const auto p = point_data(sys, k);
    if (!p) return std::nullopt;
    const ScatteringData& d = p->d;
    SigmaSigns s;
    try {
      s = sigma_and_signs(d, kSignTol);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (s.eps_l == Sign::Indeterminate || s.eps_r == Sign::Indeterminate) return std::nullopt;
    const double rl2 = std::norm(d.r_l);
    const double sign = static_cast<int>(s.eps_l) * static_cast<int>(s.eps_r);
    const double balance = rel(std::abs(rl2 - std::norm(d.r_r)), rl2);
    const double unit = rel(std::abs(rl2 + sign * std::abs(d.t_l * d.t_r) - 1.0), rl2);
    return std::max(balance, unit);
  });
}

ResidualReport check_pt_pseudo_unitarity(const ScatteringSystem& sys,
                                          const std::vector<double>& grid, double tol) {
  const SymmetryVerdict pt = classify(sys.source, grid, SymmetryOp::pt());
  if (!pt.holds) return not_applicable("pt_pseudo_unitarity", grid, tol, "system is not PT-symmetric");
  return evaluate("pt_pseudo_unitarity", grid, tol, [&](double k) -> std::optional<double> {
    const auto p = point_data(sys, k);
    if (!p) return std::nullopt;
    const ScatteringData& d = p->d;
    SigmaSigns s;
    try {
      s = sigma_and_signs(d, kSignTol);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (s.eps_l == Sign::Indeterminate || s.eps_r == Sign::Indeterminate) return std::nullopt;
    const double tt = std::abs(d.t_l * d.t_r);
    const double rr = std::abs(d.r_l * d.r_r);
    const double identity = static_cast<int>(s.eps_l) * static_cast<int>(s.eps_r) * tt +
                            static_cast<int>(s.eta_l) * static_cast<int>(s.eta_r) * rr - 1.0;

    const SMatrix S = s_matrix(d);
    // X = s1 S s1 swaps both rows and columns.
    double worst = 0.0;
    double scale = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        Complex acc{0.0};
        for (int l = 0; l < 2; ++l) acc += std::conj(S(l, i)) * S(1 - l, 1 - j);
        worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
        scale = std::max(scale, std::norm(S(i, j)));
      }
    }
    return std::max(rel(std::abs(identity), std::max(tt, rr)), rel(worst, scale));
  });
}

ResidualReport check_modulus_relations(const ScatteringSystem& sys,
                                       const std::vector<double>& grid, double tol) {
  std::vector<char> gate(grid.size(), 1);
  parallel_for(grid.size(), [&](std::size_t i) {
    const auto p = point_data(sys, grid[i]);
    if (p && std::abs(std::abs(det_s(p->d)) - 1.0) >= tol) gate[i] = 0;
  });
  if (std::find(gate.begin(), gate.end(), 0) != gate.end()) {
    return not_applicable("modulus_relations", grid, tol, "|det S| differs from 1 on the grid");
  }
  return evaluate("modulus_relations", grid, tol, [&](double k) -> std::optional<double> {
    const auto p = point_data(sys, k);
    const auto q = point_data(sys, -k);
    if (!p || !q) return std::nullopt;
    const ScatteringData& d = p->d;
    const ScatteringData& n = q->d;
    auto mod = [](Complex a, Complex b) { return rel(std::abs(std::abs(a) - std::abs(b)), std::abs(b)); };
    auto sum = [](Complex r_minus, Complex r, Complex t_minus, Complex t_swap) {
      const Complex v = r_minus * r + t_minus * t_swap;
      return rel(std::abs(v - 1.0), std::max(std::abs(r_minus * r), std::abs(t_minus * t_swap)));
    };
    return std::max({mod(n.r_l, d.r_r), mod(n.r_r, d.r_l), mod(n.t_l, d.t_l), mod(n.t_r, d.t_r),
                     sum(n.r_l, d.r_l, n.t_l, d.t_r), sum(n.r_r, d.r_r, n.t_r, d.t_l)});
  });
}

ResidualReport check_negative_k(const ScatteringSystem& sys, const std::vector<double>& grid,
                                double tol) {
  return evaluate("negative_k", grid, tol, [&](double k) -> std::optional<double> {
    const auto p = point_data(sys, k);
    const auto q = point_data(sys, -k);
    if (!p || !q) return std::nullopt;
    try {
      return scattering_difference(negative_k_data(p->d), q->d);
    } catch (const Error&) {
      return std::nullopt;
    }
  });
}

bool VerifySummary::all_passed() const {
  return std::none_of(reports.begin(), reports.end(),
                      [](const ResidualReport& r) { return r.status == CheckStatus::Failed; });
}

VerifySummary run_all(const ScatteringSystem& sys, const std::vector<double>& grid,
                      const VerifyOptions& opts) {
  VerifySummary out;
  for (const SymmetryOp& op : {SymmetryOp::parity(), SymmetryOp::time_reversal(), SymmetryOp::pt()}) {
    out.symmetries.push_back(classify(sys.source, grid, op, opts.symmetry_tol));
  }
  out.reports.push_back(check_reciprocity(sys, grid, opts.tol));
  out.reports.push_back(check_unitarity(sys, grid, opts.tol));
  out.reports.push_back(check_pt_pseudo_unitarity(sys, grid, opts.tol));
  out.reports.push_back(check_modulus_relations(sys, grid, opts.tol));
  out.reports.push_back(check_negative_k(sys, grid, opts.tol));
  return out;
}

}  // namespace scatter1d
