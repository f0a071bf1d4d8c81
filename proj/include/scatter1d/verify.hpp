#pragma once

// Grid-evaluated residual checks. Each check is gated: when the system is
// outside the class an identity applies to, the report is NotApplicable
// rather than a failure.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scatter1d/models.hpp"
#include "scatter1d/symmetry.hpp"

namespace scatter1d {

enum class CheckStatus { Passed, Failed, NotApplicable };

const char* to_string(CheckStatus s);

struct ResidualReport {
  std::string identity_name;
  std::vector<double> grid;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::NotApplicable;
  int skipped_points = 0;
  std::string note;

  bool passed() const { return status == CheckStatus::Passed; }
};

/// What the checks need to know about a system: its matrix at any k, whether
/// it is a local potential, and (for point interactions) prod det B_j(k).
struct ScatteringSystem {
  std::string name;
  MatrixSource source;
  bool is_potential = true;
  std::function<Complex(Complex)> det_product;  // empty unless point interactions

  static ScatteringSystem from_model(const PotentialModel& model);
};

/// Wraps a system so that M11 is multiplied by `factor` (breaks det M = 1).
/// Used to exercise the failure path of the suite.
ScatteringSystem with_corrupted_m11(ScatteringSystem system, Complex factor);

std::vector<double> log_grid(double lo, double hi, int count);
std::vector<double> linear_grid(double lo, double hi, int count);

/// 100 log-spaced points in [0.1, 10].
std::vector<double> default_grid();

inline constexpr double kDefaultCheckTol = 1e-10;

/// |t_l - t_r| and |det M - 1|; for point interactions det M against
/// prod det B_j instead.
ResidualReport check_reciprocity(const ScatteringSystem& sys, const std::vector<double>& grid,
                                 double tol = kDefaultCheckTol);

/// |t_l - t_r| and |det M - 1| regardless of the kind of system.
ResidualReport check_transmission_reciprocity(const ScatteringSystem& sys,
                                              const std::vector<double>& grid,
                                              double tol = kDefaultCheckTol);

/// Gated on T symmetry: |r_l|^2 - |r_r|^2 and |r_l|^2 + eps_l eps_r |t_l t_r| - 1.
ResidualReport check_unitarity(const ScatteringSystem& sys, const std::vector<double>& grid,
                               double tol = kDefaultCheckTol);

/// Gated on PT symmetry: eps_l eps_r |t_l t_r| + eta_l eta_r |r_l r_r| - 1 and
/// the norm of S^dagger s1 S s1 - I.
ResidualReport check_pt_pseudo_unitarity(const ScatteringSystem& sys,
                                          const std::vector<double>& grid,
                                          double tol = kDefaultCheckTol);

/// Gated on |det S| = 1: moduli of r and t at -k against k, and
/// r(-k) r(k) + t(-k) t_swap(k) = 1. The -k data is evaluated directly.
ResidualReport check_modulus_relations(const ScatteringSystem& sys,
                                       const std::vector<double>& grid,
                                       double tol = kDefaultCheckTol);

/// Directly evaluated data at -k against negative_k_data(d(k)).
ResidualReport check_negative_k(const ScatteringSystem& sys, const std::vector<double>& grid,
                                double tol = kDefaultCheckTol);

struct VerifyOptions {
  double tol = kDefaultCheckTol;
  double symmetry_tol = kDefaultSymmetryTol;
};

struct VerifySummary {
  std::vector<SymmetryVerdict> symmetries;  // P, T, PT
  std::vector<ResidualReport> reports;

  bool all_passed() const;
};

VerifySummary run_all(const ScatteringSystem& sys, const std::vector<double>& grid,
                      const VerifyOptions& opts = {});

}  // namespace scatter1d
