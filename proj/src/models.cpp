#include "scatter1d/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace scatter1d {

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, what);
}

void require_nonzero_k(Complex k) {
  if (k == 0.0 || !is_finite(k)) invalid("wavenumber k must be finite and nonzero");
}

// sin(w)/w, entire in w.
Complex sinc(Complex w) {
  if (std::abs(w) < 1e-4) {
    const Complex w2 = w * w;
    return 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
  }
  return std::sin(w) / w;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::vector<Element> sliced_elements(double a, double b, const std::vector<Complex>& heights,
                                     Complex k) {
  const int n = static_cast<int>(heights.size());
  const double h = (b - a) / n;
  std::vector<Element> out;
  out.reserve(heights.size());
  for (int j = 0; j < n; ++j) {
    const double x0 = a + j * h;
    // Last slice ends exactly at b.
    const double x1 = (j + 1 == n) ? b : a + (j + 1) * h;
    out.push_back({x0, x1, barrier_matrix(heights[j], x0, x1 - x0, k)});
  }
  return out;
}

}  // namespace

PointInteraction PointInteraction::constant(double center, Matrix2 b) {
  return {center, [b](Complex) { return b; }};
}

Complex LocallyPeriodic::value(double x) const {
  Complex f{0.0};
  for (const auto& [n, zn] : coefficients) {
    f += zn * std::exp(kI * (2.0 * std::numbers::pi * n * x / width));
  }
  return f;
}

int LocallyPeriodic::slice_count() const {
  int max_harmonic = 1;
  for (const auto& [n, zn] : coefficients) max_harmonic = std::max(max_harmonic, std::abs(n));
  return slices_per_period * max_harmonic;
}

Sampled sample_potential(const PotentialFn& v, double a, double b, int n) {
  if (!(a < b)) invalid("Sampled: support must satisfy a < b");
  if (n < 1) invalid("Sampled: slices must be >= 1");
  Sampled s{a, b, {}};
  s.heights.reserve(static_cast<std::size_t>(n));
  const double h = (b - a) / n;
  for (int j = 0; j < n; ++j) s.heights.push_back(v(a + (j + 0.5) * h));
  return s;
}

std::string model_name(const PotentialModel& model) {
  return std::visit(Overloaded{
                        [](const Delta&) { return std::string("Delta"); },
                        [](const MultiDelta&) { return std::string("MultiDelta"); },
                        [](const Barrier&) { return std::string("Barrier"); },
                        [](const PointInteractions&) { return std::string("PointInteractions"); },
                        [](const LocallyPeriodic&) { return std::string("LocallyPeriodic"); },
                        [](const Sampled&) { return std::string("Sampled"); },
                    },
                    model);
}

void validate(const PotentialModel& model) {
  std::visit(
      Overloaded{
          [](const Delta& d) {
            if (!is_finite(d.z)) invalid("Delta.z must be finite");
          },
          [](const MultiDelta& md) {
            if (md.couplings.size() != md.centers.size()) {
              invalid("MultiDelta: couplings and centers differ in length");
            }
            if (!std::isfinite(md.eps) || md.eps == 0.0) invalid("MultiDelta.eps must be nonzero");
            for (std::size_t j = 1; j < md.centers.size(); ++j) {
              if (!(md.centers[j - 1] < md.centers[j])) {
                invalid("MultiDelta.centers must be strictly increasing");
              }
            }
          },
          [](const Barrier& b) {
            if (!(b.width > 0.0) || !std::isfinite(b.width)) invalid("Barrier.width must be > 0");
            if (!is_finite(b.z) || !std::isfinite(b.x0)) invalid("Barrier: z and x0 must be finite");
          },
          [](const PointInteractions& pi) {
            for (std::size_t j = 0; j < pi.sites.size(); ++j) {
              if (!pi.sites[j].matching) invalid("PointInteractions: missing matching matrix");
              if (j > 0 && !(pi.sites[j - 1].center < pi.sites[j].center)) {
                invalid("PointInteractions.centers must be strictly increasing");
              }
            }
          },
          [](const LocallyPeriodic& lp) {
            if (!(lp.width > 0.0)) invalid("LocallyPeriodic.width must be > 0");
            if (lp.slices_per_period < 1) invalid("LocallyPeriodic.slices_per_period must be >= 1");
          },
          [](const Sampled& s) {
            if (!(s.a < s.b)) invalid("Sampled: support must satisfy a < b");
            if (s.heights.empty()) invalid("Sampled: slices must be >= 1");
          },
      },
      model);
}

bool is_potential(const PotentialModel& model) {
  return !std::holds_alternative<PointInteractions>(model);
}

TransferMatrix barrier_matrix(Complex z, double x0, double width, Complex k) {
  require_nonzero_k(k);
  const Complex n = principal_sqrt(1.0 - z / (k * k));
  const Complex phase = k * width * n;
  const Complex c = std::cos(phase);
  const Complex s_times_n = std::sin(phase) * n;
  const Complex s_over_n = k * width * sinc(phase);
  const Complex plus = 0.5 * (s_times_n + s_over_n);   // n_+ sin
  const Complex minus = 0.5 * (s_times_n - s_over_n);  // n_- sin
  // Translating [0, L] to [x0, x0 + L] multiplies M12 by e^{-2ikx0}, M21 by e^{2ikx0}.
  const Complex e_left = std::exp(-kI * k * width);
  const Complex e_right = std::exp(kI * k * width);
  return {(c + kI * plus) * e_left, kI * minus * std::exp(-kI * k * (width + 2.0 * x0)),
          -kI * minus * std::exp(kI * k * (width + 2.0 * x0)), (c - kI * plus) * e_right, k};
}

TransferMatrix point_interaction_matrix(double center, const Matrix2& b, Complex k) {
  require_nonzero_k(k);
  if (b.det() == 0.0 || !is_finite(b.det())) {
    invalid("matching matrix B is singular at the requested k");
  }
  const Complex e = std::exp(kI * center * k);
  const Complex ik = kI * k;
  const TransferMatrix n{e, 1.0 / e, ik * e, -ik / e, k};
  const TransferMatrix n_inv{1.0 / (2.0 * e), 1.0 / (2.0 * ik * e), 0.5 * e, -e / (2.0 * ik), k};
  const TransferMatrix bm{b.a11, b.a12, b.a21, b.a22, k};
  return n_inv * (bm * n);
}

Complex matching_determinant_product(const PointInteractions& pi, Complex k) {
  Complex p{1.0};
  for (const auto& site : pi.sites) p *= site.matching(k).det();
  return p;
}

std::vector<Element> elements(const PotentialModel& model, Complex k) {
  require_nonzero_k(k);
  return std::visit(
      Overloaded{
          [k](const Delta& d) {
            return std::vector<Element>{
                {0.0, 0.0, point_interaction_matrix(0.0, {1.0, 0.0, d.z, 1.0}, k)}};
          },
          [k](const MultiDelta& md) {
            std::vector<Element> out;
            for (std::size_t j = 0; j < md.centers.size(); ++j) {
              const double c = md.centers[j];
              out.push_back(
                  {c, c, point_interaction_matrix(c, {1.0, 0.0, md.eps * md.couplings[j], 1.0}, k)});
            }
            return out;
          },
          [k](const Barrier& b) {
            return std::vector<Element>{
                {b.x0, b.x0 + b.width, barrier_matrix(b.z, b.x0, b.width, k)}};
          },
          [k](const PointInteractions& pi) {
            std::vector<Element> out;
            for (const auto& site : pi.sites) {
              out.push_back(
                  {site.center, site.center, point_interaction_matrix(site.center, site.matching(k), k)});
            }
            return out;
          },
          [k](const LocallyPeriodic& lp) {
            const Sampled s = sample_potential([&lp](double x) { return lp.value(x); },
                                               -0.5 * lp.width, 0.5 * lp.width, lp.slice_count());
            return sliced_elements(s.a, s.b, s.heights, k);
          },
          [k](const Sampled& s) { return sliced_elements(s.a, s.b, s.heights, k); },
      },
      model);
}

TransferMatrix transfer_matrix(const PotentialModel& model, Complex k) {
  validate(model);
  const auto parts = elements(model, k);
  if (parts.empty()) return TransferMatrix::identity(k);
  TransferMatrix total = parts.front().m;
  for (std::size_t j = 1; j < parts.size(); ++j) total = parts[j].m * total;
  return total;
}

ScatteringData closed_form_scattering(const Delta& delta, double k) {
  if (!(k > 0.0)) invalid("closed-form amplitudes need k > 0");
  const Complex denom = 2.0 * k + kI * delta.z;
  const Complex r = -kI * delta.z / denom;
  const Complex t = 2.0 * k / denom;
  return {r, r, t, t, k};
}

ScatteringData closed_form_scattering(const Barrier& barrier, double k) {
  if (!(k > 0.0)) invalid("closed-form amplitudes need k > 0");
  const double L = barrier.width;
  const Complex n = principal_sqrt(1.0 - barrier.z / (k * k));
  const Complex phase = k * L * n;
  const Complex c = std::cos(phase);
  const Complex s_times_n = std::sin(phase) * n;
  const Complex s_over_n = k * L * sinc(phase);
  const Complex plus = 0.5 * (s_times_n + s_over_n);
  const Complex minus = 0.5 * (s_times_n - s_over_n);
  const Complex denom = c - kI * plus;
  const Complex r_l = kI * minus / denom;
  const Complex r_r = r_l * std::exp(-2.0 * kI * k * L);
  const Complex t = std::exp(-kI * k * L) / denom;
  const double a = barrier.x0;
  return {r_l * std::exp(2.0 * kI * a * k), r_r * std::exp(-2.0 * kI * a * k), t, t, k};
}

RefractiveIndex refractive_index(Complex z, double k) {
  if (k == 0.0 || !std::isfinite(k)) invalid("refractive index needs k != 0");
  const Complex n = principal_sqrt(1.0 - z / (k * k));
  if (n == 0.0) invalid("refractive index vanishes (z = k^2); n_- is undefined");
  return {n, 0.5 * (n + 1.0 / n), 0.5 * (n - 1.0 / n)};
}

double gain_coefficient(Complex n, double k) {
  if (!(k > 0.0)) invalid("gain coefficient needs k > 0");
  return -2.0 * k * n.imag();
}

Barrier SlabOptics::barrier_at(double k) const {
  if (eps_slab == 0.0) invalid("SlabOptics.eps_slab must be nonzero");
  return {k * k * (1.0 - eps_slab), 0.0, width};
}

std::vector<ProfileEntry> coefficient_profile(const PotentialModel& model, double k,
                                              const CoefficientPair& left) {
  if (!(k > 0.0)) invalid("coefficient profile needs k > 0");
  validate(model);
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto parts = elements(model, k);
  std::vector<ProfileEntry> out;
  out.reserve(parts.size() + 1);
  CoefficientPair current = left;
  double from = -inf;
  for (const auto& part : parts) {
    out.push_back({from, part.x_from, current});
    current = part.m.apply(current);
    from = part.x_to;
  }
  out.push_back({from, inf, current});
  return out;
}

}  // namespace scatter1d
