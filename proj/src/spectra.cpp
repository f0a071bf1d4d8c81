#include "scatter1d/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "scatter1d/parallel.hpp"

namespace scatter1d {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Evaluations that throw (k = 0, singular matching matrix) count as holes.
Complex safe_eval(const ComplexFn& f, Complex k) {
  try {
    const Complex v = f(k);
    return is_finite(v) ? v : Complex{kNaN, kNaN};
  } catch (const Error&) {
    return {kNaN, kNaN};
  }
}

bool usable(Complex v) { return !std::isnan(v.real()); }

Zero newton(const ComplexFn& f, Complex k, const ZeroOptions& opts) {
  Complex fk = safe_eval(f, k);
  if (!usable(fk)) return {k, std::numeric_limits<double>::infinity(), false};
  int polish = 0;
  for (int it = 0; it < opts.max_iter; ++it) {
    if (std::abs(fk) < opts.tol_res && ++polish > 3) break;
    const double h = 1e-6 * std::max(1.0, std::abs(k));
    const Complex d = (safe_eval(f, k + h) - safe_eval(f, k - h)) / (2.0 * h);
    if (!usable(d) || d == 0.0) break;
    const Complex step = fk / d;
    bool accepted = false;
    for (double lambda = 1.0; lambda > 1e-9; lambda *= 0.5) {
      const Complex kn = k - lambda * step;
      const Complex fn = safe_eval(f, kn);
      if (usable(fn) && std::abs(fn) < std::abs(fk)) {
        k = kn;
        fk = fn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return {k, std::abs(fk), std::abs(fk) < opts.tol_res};
}

std::vector<Zero> dedupe(std::vector<Zero> zs, double tol_sep) {
  std::sort(zs.begin(), zs.end(), [](const Zero& a, const Zero& b) {
    return a.k.real() != b.k.real() ? a.k.real() < b.k.real() : a.k.imag() < b.k.imag();
  });
  std::vector<Zero> out;
  for (const Zero& z : zs) {
    auto dup = std::find_if(out.begin(), out.end(), [&](const Zero& o) {
      return std::abs(o.k - z.k) <= tol_sep * std::max(1.0, std::abs(z.k));
    });
    if (dup == out.end()) {
      out.push_back(z);
    } else if ((z.converged && !dup->converged) ||
               (z.converged == dup->converged && z.residual < dup->residual)) {
      *dup = z;
    }
  }
  return out;
}

std::vector<Zero> refine_all(const ComplexFn& f, const std::vector<Complex>& seeds,
                             const ZeroOptions& opts, const std::function<bool(Complex)>& keep) {
  std::vector<Zero> refined(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) { refined[i] = newton(f, seeds[i], opts); });
  std::vector<Zero> kept;
  for (const Zero& z : refined) {
    if (std::isfinite(z.residual) && keep(z.k)) kept.push_back(z);
  }
  return dedupe(std::move(kept), opts.tol_sep);
}

}  // namespace

std::vector<Zero> find_zeros(const ComplexFn& f, const Region& region, const ZeroOptions& opts) {
  if (!(region.re_min <= region.re_max) || !(region.im_min <= region.im_max)) {
    throw Error(ErrorCode::InvalidArgument, "region bounds are inverted");
  }
  const int nx = std::max(2, opts.nx);
  const int ny = region.im_min == region.im_max ? 1 : std::max(2, opts.ny);
  const double dx = (region.re_max - region.re_min) / (nx - 1);
  const double dy = ny > 1 ? (region.im_max - region.im_min) / (ny - 1) : 0.0;
  auto node = [&](int i, int j) { return Complex{region.re_min + i * dx, region.im_min + j * dy}; };

  std::vector<double> mag(static_cast<std::size_t>(nx) * ny, kNaN);
  parallel_for(static_cast<std::size_t>(nx), [&](std::size_t i) {
    for (int j = 0; j < ny; ++j) {
      const Complex v = safe_eval(f, node(static_cast<int>(i), j));
      mag[i * ny + j] = usable(v) ? std::abs(v) : kNaN;
    }
  });

  std::vector<Complex> seeds;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const double m = mag[static_cast<std::size_t>(i) * ny + j];
      if (std::isnan(m)) continue;
      bool minimum = true;
      bool strictly_below_one = false;
      for (int di = -1; di <= 1 && minimum; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          const int a = i + di;
          const int b = j + dj;
          if ((di == 0 && dj == 0) || a < 0 || a >= nx || b < 0 || b >= ny) continue;
          const double nb = mag[static_cast<std::size_t>(a) * ny + b];
          if (std::isnan(nb)) continue;
          if (nb < m) {
            minimum = false;
            break;
          }
          if (m < nb) strictly_below_one = true;
        }
      }
      if (minimum && strictly_below_one) seeds.push_back(node(i, j));
    }
  }
  const double margin = 1e-9 * std::max({1.0, std::abs(region.re_max), std::abs(region.re_min),
                                         std::abs(region.im_max), std::abs(region.im_min)});
  return refine_all(f, seeds, opts, [&](Complex k) { return region.contains(k, margin); });
}

std::vector<Zero> find_zeros_on_segment(const ComplexFn& f, Complex a, Complex b, int n,
                                        const ZeroOptions& opts) {
  n = std::max(3, n);
  std::vector<double> mag(static_cast<std::size_t>(n));
  auto node = [&](int i) { return a + (b - a) * (static_cast<double>(i) / (n - 1)); };
  parallel_for(mag.size(), [&](std::size_t i) {
    const Complex v = safe_eval(f, node(static_cast<int>(i)));
    mag[i] = usable(v) ? std::abs(v) : kNaN;
  });
  std::vector<Complex> seeds;
  for (int i = 0; i < n; ++i) {
    if (std::isnan(mag[i])) continue;
    const double left = i > 0 ? mag[i - 1] : kNaN;
    const double right = i + 1 < n ? mag[i + 1] : kNaN;
    const bool le = std::isnan(left) || mag[i] <= left;
    const bool re = std::isnan(right) || mag[i] <= right;
    const bool strict = (!std::isnan(left) && mag[i] < left) || (!std::isnan(right) && mag[i] < right);
    if (le && re && strict) seeds.push_back(node(i));
  }
  // Keep refined roots near the segment's bounding box.
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  const Region box{std::min(a.real(), b.real()), std::max(a.real(), b.real()),
                   std::min(a.imag(), b.imag()), std::max(a.imag(), b.imag())};
  return refine_all(f, seeds, opts, [&](Complex k) { return box.contains(k, 1e-6 * scale); });
}

const char* to_string(SpectralKind kind) {
  switch (kind) {
    case SpectralKind::SpectralSingularity: return "SpectralSingularity";
    case SpectralKind::TimeReversedSingularity: return "TimeReversedSingularity";
    case SpectralKind::SelfDualSingularity: return "SelfDualSingularity";
    case SpectralKind::Resonance: return "Resonance";
    case SpectralKind::Antiresonance: return "Antiresonance";
    case SpectralKind::BoundState: return "BoundState";
    case SpectralKind::ComplexEigenvalue: return "ComplexEigenvalue";
  }
  return "?";
}

std::vector<SpectralPoint> classify_spectrum(const PotentialModel& model, const Region& region,
                                             const SpectrumOptions& opts) {
  validate(model);
  return classify_spectrum([&model](Complex k) { return transfer_matrix(model, k); }, region,
                           opts);
}

std::vector<SpectralPoint> classify_spectrum(const std::function<TransferMatrix(Complex)>& source,
                                             const Region& region, const SpectrumOptions& opts) {
  const ComplexFn m22 = [&](Complex k) { return source(k).m22; };
  const ComplexFn m11 = [&](Complex k) { return source(k).m11; };

  auto search = [&](const ComplexFn& f) {
    std::vector<Zero> zs = find_zeros(f, region, opts.zeros);
    if (region.im_min <= 0.0 && region.im_max >= 0.0 && region.re_max > 0.0) {
      const double lo = std::max(region.re_min, 0.0);
      auto axis = find_zeros_on_segment(f, lo, region.re_max, opts.axis_samples, opts.zeros);
      zs.insert(zs.end(), axis.begin(), axis.end());
    }
    if (region.re_min <= 0.0 && region.re_max >= 0.0 && region.im_max > 0.0) {
      const double lo = std::max(region.im_min, 0.0);
      auto axis = find_zeros_on_segment(f, Complex{0.0, lo}, Complex{0.0, region.im_max},
                                        opts.axis_samples, opts.zeros);
      zs.insert(zs.end(), axis.begin(), axis.end());
    }
    return dedupe(std::move(zs), opts.zeros.tol_sep);
  };

  auto snap = [&](Complex k) {
    const double t = opts.axis_tol * std::max(1.0, std::abs(k));
    if (std::abs(k.imag()) <= t) k.imag(0.0);
    if (std::abs(k.real()) <= t) k.real(0.0);
    return k;
  };
  auto make_point = [](Complex k, SpectralKind kind, double residual, bool converged) {
    SpectralPoint p;
    p.k = k;
    p.energy = k.real() * k.real() - k.imag() * k.imag();
    p.width = -2.0 * k.real() * k.imag();
    p.kind = kind;
    p.residual = residual;
    p.converged = converged;
    return p;
  };
  auto ratio = [&](Complex k, bool use_m11) {
    const TransferMatrix m = source(k);
    return std::abs(use_m11 ? m.m11 : m.m22) / std::max(1.0, m.norm_inf());
  };

  std::vector<SpectralPoint> out;
  for (const Zero& z : search(m22)) {
    const Complex k = snap(z.k);
    const double re = k.real();
    const double im = k.imag();
    if (im == 0.0) {
      if (re <= 0.0) continue;  // zero of M11 at -k, reported from the M11 search
      const bool dual = ratio(k, true) < opts.self_dual_tol;
      out.push_back(make_point(k, dual ? SpectralKind::SelfDualSingularity
                                       : SpectralKind::SpectralSingularity,
                               z.residual, z.converged));
    } else if (re == 0.0) {
      if (im > 0.0) out.push_back(make_point(k, SpectralKind::BoundState, z.residual, z.converged));
    } else if (im > 0.0) {
      out.push_back(make_point(k, SpectralKind::ComplexEigenvalue, z.residual, z.converged));
    } else {
      out.push_back(make_point(k, re > 0.0 ? SpectralKind::Resonance : SpectralKind::Antiresonance,
                               z.residual, z.converged));
    }
  }
  for (const Zero& z : search(m11)) {
    const Complex k = snap(z.k);
    if (k.imag() != 0.0 || k.real() <= 0.0) continue;
    const bool seen = std::any_of(out.begin(), out.end(), [&](const SpectralPoint& p) {
      return p.kind == SpectralKind::SelfDualSingularity &&
             std::abs(p.k - k) <= opts.zeros.tol_sep * std::max(1.0, std::abs(k));
    });
    if (seen) continue;
    const bool dual = ratio(k, false) < opts.self_dual_tol;
    out.push_back(make_point(k, dual ? SpectralKind::SelfDualSingularity
                                     : SpectralKind::TimeReversedSingularity,
                             z.residual, z.converged));
  }
  std::sort(out.begin(), out.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
    return a.k.real() != b.k.real() ? a.k.real() < b.k.real() : a.k.imag() < b.k.imag();
  });
  return out;
}

EigenvalueLimit s_eigenvalue_limit(const PotentialModel& model, double k0,
                                   std::span<const double> approach, double tol) {
  const TransferMatrix at = transfer_matrix(model, k0);
  if (std::abs(at.m22) > tol) {
    std::ostringstream os;
    os << "k0 = " << k0 << " is not a spectral singularity: |M22| = " << std::abs(at.m22);
    throw Error(ErrorCode::NotASingularity, os.str());
  }
  if (approach.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "approach sequence needs at least two points");
  }
  std::vector<std::pair<Complex, Complex>> eig;
  std::size_t closest = 0;
  for (std::size_t i = 0; i < approach.size(); ++i) {
    if (approach[i] == k0) throw Error(ErrorCode::InvalidArgument, "approach point equals k0");
    eig.push_back(s_eigenvalues(scattering_from_transfer(transfer_matrix(model, approach[i]))));
    if (std::abs(approach[i] - k0) < std::abs(approach[closest] - k0)) closest = i;
  }
  EigenvalueLimit out;
  out.finite_is_plus = std::abs(eig[closest].first) < std::abs(eig[closest].second);
  out.finite_limit = out.finite_is_plus ? eig[closest].first : eig[closest].second;
  out.m11_half = at.m11 / 2.0;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(approach.size());
  for (std::size_t i = 0; i < approach.size(); ++i) {
    const double x = std::log(std::abs(approach[i] - k0));
    const double y = std::log(std::abs(out.finite_is_plus ? eig[i].second : eig[i].first));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.divergence_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

double threshold_gain(Complex n0, double width) {
  return 2.0 / width * std::log(std::abs((n0 + 1.0) / (n0 - 1.0)));
}

LaserSolution slab_laser_solve(const LaserQuery& q) {
  if (q.m < 1) throw Error(ErrorCode::InvalidArgument, "laser: mode index m must be >= 1");
  if (!(q.width > 0.0)) throw Error(ErrorCode::InvalidArgument, "laser: width must be > 0");
  if (!(q.damping > 0.0 && q.damping <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "laser: damping must lie in (0, 1]");
  }
  const bool given_eta = q.solve_for == LaserQuery::SolveFor::KappaAndK;
  if (given_eta && !(q.eta0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "laser: eta0 must be > 0");
  if (!given_eta && !(q.k0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "laser: k0 must be > 0");

  const double L = q.width;
  const double two_pi_m = 2.0 * std::numbers::pi * q.m;
  auto phi_of = [](Complex n) {
    const Complex rho = (n - 1.0) / (n + 1.0);
    return std::arg(rho * rho);
  };
  auto kappa_of = [L](double eta, double kappa, double k) {
    const double num = (eta - 1.0) * (eta - 1.0) + kappa * kappa;
    const double den = (eta + 1.0) * (eta + 1.0) + kappa * kappa;
    return std::log(std::abs(num / den)) / (2.0 * k * L);
  };

  double eta = given_eta ? q.eta0 : two_pi_m / (2.0 * L * q.k0);
  double k = given_eta ? two_pi_m / (2.0 * L * q.eta0) : q.k0;
  double kappa = 0.0;
  double lambda = q.damping;
  double last_change = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < q.max_iter; ++it) {
    const double phi = phi_of({eta, kappa});
    double eta_new = eta;
    double k_new = k;
    if (given_eta) {
      k_new = (two_pi_m - phi) / (2.0 * L * eta);
    } else {
      eta_new = (two_pi_m - phi) / (2.0 * L * k);
    }
    const double kappa_new = kappa_of(eta_new, kappa, k_new);
    const double change = std::max({std::abs(k_new - k) / std::abs(k),
                                    std::abs(eta_new - eta) / std::abs(eta),
                                    std::abs(kappa_new - kappa) / std::max(std::abs(kappa_new), 1e-300)});
    if (change > last_change && lambda > 1e-3) lambda *= 0.5;
    last_change = change;
    eta += lambda * (eta_new - eta);
    k += lambda * (k_new - k);
    kappa += lambda * (kappa_new - kappa);
    if (change <= q.tol) break;
  }

  LaserSolution s;
  s.k0 = k;
  s.eta0 = eta;
  s.kappa0 = kappa;
  s.n0 = {eta, kappa};
  s.m = q.m;
  s.phi0 = phi_of(s.n0);
  s.g = gain_coefficient(s.n0, k);
  s.width = L;
  s.iterations = it;
  s.m22_residual = std::abs(transfer_matrix(s.equivalent_barrier(), k).m22);
  if (!(s.kappa0 < 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "laser: solution has kappa0 >= 0 (no gain); threshold requires Im n0 < 0");
  }
  if (it >= q.max_iter || !(s.m22_residual < 1e-8)) {
    std::ostringstream os;
    os << "laser threshold iteration did not converge: |M22(k0)| = " << s.m22_residual
       << " after " << it << " iterations (k0 = " << k << ", kappa0 = " << kappa << ")";
    throw NotConverged(os.str(), s.m22_residual);
  }
  return s;
}

const char* to_string(InvisibilityKind kind) {
  switch (kind) {
    case InvisibilityKind::LeftReflectionless: return "LeftReflectionless";
    case InvisibilityKind::RightReflectionless: return "RightReflectionless";
    case InvisibilityKind::Transparent: return "Transparent";
    case InvisibilityKind::LeftInvisible: return "LeftInvisible";
    case InvisibilityKind::RightInvisible: return "RightInvisible";
    case InvisibilityKind::BidirectionallyInvisible: return "BidirectionallyInvisible";
  }
  return "?";
}

namespace {

// Minima of |f| over real k, refined by Gauss-Newton on |f|^2.
std::vector<double> real_zeros(const std::function<Complex(double)>& f, double a, double b,
                               const InvisibilityOptions& opts) {
  const int n = std::max(3, opts.samples);
  std::vector<double> mag(static_cast<std::size_t>(n));
  auto node = [&](int i) { return a + (b - a) * i / (n - 1); };
  parallel_for(mag.size(), [&](std::size_t i) { mag[i] = std::abs(f(node(static_cast<int>(i)))); });

  std::vector<double> seeds;
  for (int i = 1; i + 1 < n; ++i) {
    if (mag[i] <= mag[i - 1] && mag[i] <= mag[i + 1] && (mag[i] < mag[i - 1] || mag[i] < mag[i + 1])) {
      seeds.push_back(node(i));
    }
  }
  std::vector<double> found(seeds.size(), kNaN);
  parallel_for(seeds.size(), [&](std::size_t s) {
    double x = seeds[s];
    Complex fx = f(x);
    for (int it = 0; it < opts.max_iter && std::abs(fx) > 0.0; ++it) {
      const double h = 1e-6 * std::max(1.0, std::abs(x));
      const Complex d = (f(x + h) - f(x - h)) / (2.0 * h);
      const double dd = std::norm(d);
      if (dd == 0.0) break;
      const double step = (std::conj(d) * fx).real() / dd;
      bool accepted = false;
      for (double lambda = 1.0; lambda > 1e-9; lambda *= 0.5) {
        const double xn = x - lambda * step;
        const Complex fn = f(xn);
        if (std::abs(fn) < std::abs(fx)) {
          x = xn;
          fx = fn;
          accepted = true;
          break;
        }
      }
      if (!accepted || std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    if (std::abs(fx) <= opts.tol && x >= a && x <= b) found[s] = x;
  });
  std::vector<double> out;
  for (double x : found) {
    if (!std::isnan(x)) out.push_back(x);
  }
  return out;
}

}  // namespace

InvisibilityResult find_invisibility(const PotentialModel& model, double k_min, double k_max,
                                     const InvisibilityOptions& opts) {
  if (!(k_min > 0.0) || !(k_min < k_max)) {
    throw Error(ErrorCode::InvalidArgument, "invisibility search needs 0 < k_min < k_max");
  }
  validate(model);
  InvisibilityResult result;

  double deviation = 0.0;
  for (int i = 0; i < 7; ++i) {
    const double k = k_min + (k_max - k_min) * i / 6.0;
    deviation = std::max(deviation, max_relative_difference(transfer_matrix(model, k),
                                                            TransferMatrix::identity(k)));
  }
  if (deviation < 1e-14) {
    result.transparent_everywhere = true;
    return result;
  }

  auto entry = [&model](int which) {
    return [&model, which](double k) {
      const TransferMatrix m = transfer_matrix(model, k);
      return which == 0 ? m.m21 : which == 1 ? m.m12 : m.m22 - 1.0;
    };
  };
  struct Tagged {
    double k;
    int which;
  };
  std::vector<Tagged> all;
  for (int which = 0; which < 3; ++which) {
    for (double k : real_zeros(entry(which), k_min, k_max, opts)) all.push_back({k, which});
  }
  std::sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) { return a.k < b.k; });

  std::size_t i = 0;
  while (i < all.size()) {
    bool has[3] = {false, false, false};
    const double k = all[i].k;
    std::size_t j = i;
    for (; j < all.size() && all[j].k - k <= opts.tol_sep * std::max(1.0, k); ++j) {
      has[all[j].which] = true;
    }
    i = j;

    InvisibilityPoint p;
    p.k = k;
    try {
      const ScatteringData d = scattering_from_transfer(transfer_matrix(model, k));
      p.abs_r_l = std::abs(d.r_l);
      p.abs_r_r = std::abs(d.r_r);
      p.abs_t_minus_one = std::max(std::abs(d.t_l - 1.0), std::abs(d.t_r - 1.0));
    } catch (const SpectralSingularityProximity&) {
      continue;
    }
    auto emit = [&](InvisibilityKind kind) {
      p.kind = kind;
      result.points.push_back(p);
    };
    const bool l = has[0], r = has[1], t = has[2];
    if (l && r && t) {
      emit(InvisibilityKind::BidirectionallyInvisible);
    } else if (l && t) {
      emit(InvisibilityKind::LeftInvisible);
    } else if (r && t) {
      emit(InvisibilityKind::RightInvisible);
    } else {
      if (l) emit(InvisibilityKind::LeftReflectionless);
      if (r) emit(InvisibilityKind::RightReflectionless);
      if (t) emit(InvisibilityKind::Transparent);
    }
  }
  return result;
}

Complex entry_of(const TransferMatrix& m, Entry e) {
  switch (e) {
    case Entry::M11: return m.m11;
    case Entry::M12: return m.m12;
    case Entry::M21: return m.m21;
    case Entry::M22: return m.m22;
  }
  return m.m11;
}

double interpolation_residual(std::span<const double> samples, std::span<const Complex> values,
                              int degree) {
  if (samples.size() != values.size()) {
    throw Error(ErrorCode::InvalidArgument, "samples and values differ in length");
  }
  if (degree < 0 || samples.size() < static_cast<std::size_t>(degree) + 2) {
    throw Error(ErrorCode::InvalidArgument, "need at least degree + 2 samples");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      if (samples[i] == samples[j]) throw Error(ErrorCode::InvalidArgument, "duplicate sample");
    }
  }
  const std::size_t m = static_cast<std::size_t>(degree) + 1;
  // Newton divided differences on the first m samples.
  std::vector<Complex> c(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(m));
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t i = m - 1; i >= j; --i) {
      c[i] = (c[i] - c[i - 1]) / (samples[i] - samples[i - j]);
    }
  }
  double scale = 0.0;
  for (const Complex& v : values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t s = m; s < samples.size(); ++s) {
    Complex p = c[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) p = p * (samples[s] - samples[i]) + c[i];
    worst = std::max(worst, std::abs(p - values[s]));
  }
  return worst / scale;
}

PolynomialCheck verify_polynomial_exactness(const MultiDelta& md, double k, Entry entry,
                                            std::span<const double> eps_samples, int degree,
                                            double tol) {
  if (degree < 0) degree = static_cast<int>(md.centers.size());
  std::vector<Complex> values;
  values.reserve(eps_samples.size());
  for (double eps : eps_samples) {
    MultiDelta scaled = md;
    scaled.eps = eps;
    // eps = 0 is the free system; validate() rejects it, so build it directly.
    values.push_back(eps == 0.0 ? entry_of(TransferMatrix::identity(k), entry)
                                : entry_of(transfer_matrix(scaled, k), entry));
  }
  PolynomialCheck out;
  out.max_interp_residual = interpolation_residual(eps_samples, values, degree);
  out.is_polynomial = out.max_interp_residual < tol;
  return out;
}

Sampled pt_mirror_pair(Complex z, double half_width) {
  if (!(half_width > 0.0)) throw Error(ErrorCode::InvalidArgument, "half_width must be > 0");
  return {-half_width, half_width, {z, std::conj(z)}};
}

PtSingularity tune_pt_mirror_singularity(double re_z, double half_width, double gain_min,
                                         double gain_max, double k_min, double k_max, int scan) {
  if (!(k_min > 0.0 && k_min < k_max) || !(gain_min < gain_max) || scan < 2) {
    throw Error(ErrorCode::InvalidArgument, "invalid PT tuning window");
  }
  auto m22 = [&](double k, double gain) {
    return transfer_matrix(pt_mirror_pair({re_z, gain}, half_width), k).m22;
  };
  constexpr int kSamples = 400;
  std::vector<std::pair<double, double>> best(static_cast<std::size_t>(scan));  // (|M22|, k)
  parallel_for(best.size(), [&](std::size_t s) {
    const double gain = gain_min + (gain_max - gain_min) * s / (scan - 1);
    best[s] = {std::numeric_limits<double>::infinity(), k_min};
    for (int i = 0; i < kSamples; ++i) {
      const double k = k_min + (k_max - k_min) * i / (kSamples - 1);
      const double v = std::abs(m22(k, gain));
      if (v < best[s].first) best[s] = {v, k};
    }
  });
  const auto pick = std::min_element(best.begin(), best.end());
  double gain = gain_min + (gain_max - gain_min) * (pick - best.begin()) / (scan - 1);
  double k = pick->second;

  Complex f = m22(k, gain);
  for (int it = 0; it < 100 && std::abs(f) > 1e-14; ++it) {
    const double hk = 1e-7 * std::max(1.0, std::abs(k));
    const double hg = 1e-7 * std::max(1.0, std::abs(gain));
    const Complex dk = (m22(k + hk, gain) - m22(k - hk, gain)) / (2.0 * hk);
    const Complex dg = (m22(k, gain + hg) - m22(k, gain - hg)) / (2.0 * hg);
    // Solve [Re dk, Re dg; Im dk, Im dg] [x; y] = -[Re f; Im f].
    const double det = dk.real() * dg.imag() - dg.real() * dk.imag();
    if (det == 0.0) break;
    const double x = -(f.real() * dg.imag() - dg.real() * f.imag()) / det;
    const double y = -(dk.real() * f.imag() - f.real() * dk.imag()) / det;
    bool accepted = false;
    for (double lambda = 1.0; lambda > 1e-9; lambda *= 0.5) {
      const Complex fn = m22(k + lambda * x, gain + lambda * y);
      if (std::abs(fn) < std::abs(f)) {
        k += lambda * x;
        gain += lambda * y;
        f = fn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (!(std::abs(f) < 1e-10) || !(k > 0.0)) {
    std::ostringstream os;
    os << "PT mirror tuning did not reach a spectral singularity: |M22| = " << std::abs(f);
    throw NotConverged(os.str(), std::abs(f));
  }
  PtSingularity out;
  out.k0 = k;
  out.gain = gain;
  out.model = pt_mirror_pair({re_z, gain}, half_width);
  const TransferMatrix m = transfer_matrix(out.model, k);
  out.m22_residual = std::abs(m.m22);
  out.m11_ratio = std::abs(m.m11) / m.norm_inf();
  return out;
}

}  // namespace scatter1d
