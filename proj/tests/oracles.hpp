#pragma once

// Reference computations that share no code with the library. They work on
// the wave function itself (psi, psi') instead of plane-wave coefficients.

#include <array>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using C = std::complex<double>;
inline constexpr C I{0.0, 1.0};

struct Amplitudes {
  C r_l, r_r, t_l, t_r;
};

// v = z delta(x): r = -iz/(2k + iz), t = 2k/(2k + iz).
inline Amplitudes delta(C z, C k) {
  const C r = -I * z / (2.0 * k + I * z);
  const C t = 2.0 * k / (2.0 * k + I * z);
  return {r, r, t, t};
}

using State = std::array<C, 2>;  // (psi, psi')

// Exact propagation of (psi, psi') across a constant potential v of length h.
inline State step_constant(const State& s, C v, C k, double h) {
  const C q = std::sqrt(k * k - v);
  const C c = std::cos(q * h);
  // sin(qh)/q, regular at q = 0
  const C sq = std::abs(q * h) < 1e-8 ? C{h} : std::sin(q * h) / q;
  return {c * s[0] + sq * s[1], -q * q * sq * s[0] + c * s[1]};
}

// Splits psi = A e^{ikx} + B e^{-ikx} at x.
inline std::pair<C, C> split(const State& s, C k, double x) {
  const C a = 0.5 * (s[0] + s[1] / (I * k)) * std::exp(-I * k * x);
  const C b = 0.5 * (s[0] - s[1] / (I * k)) * std::exp(I * k * x);
  return {a, b};
}

// Scattering data of a piecewise-constant potential: heights[j] on the j-th of
// heights.size() equal slices of [a, b]. Both incidences are integrated from
// the transmitted side.
inline Amplitudes piecewise(const std::vector<C>& heights, double a, double b, C k) {
  const int n = static_cast<int>(heights.size());
  const double h = (b - a) / n;
  // Left incidence: psi = e^{ikx} on the right (unnormalised), march right to left.
  State s{std::exp(I * k * b), I * k * std::exp(I * k * b)};
  for (int j = n - 1; j >= 0; --j) s = step_constant(s, heights[j], k, -h);
  auto [al, bl] = split(s, k, a);
  // Right incidence: psi = e^{-ikx} on the left, march left to right.
  State u{std::exp(-I * k * a), -I * k * std::exp(-I * k * a)};
  for (int j = 0; j < n; ++j) u = step_constant(u, heights[j], k, h);
  auto [ar, br] = split(u, k, b);
  return {bl / al, ar / br, 1.0 / al, 1.0 / br};
}

// v = z on [x0, x0 + L].
inline Amplitudes barrier(C z, double x0, double L, C k) {
  return piecewise({z}, x0, x0 + L, k);
}

// v = sum_j z_j delta(x - c_j): psi continuous, psi' jumps by z_j psi.
inline Amplitudes multi_delta(const std::vector<C>& z, const std::vector<double>& c, C k) {
  auto march = [&](State s, double from, int dir) {
    double x = from;
    const int n = static_cast<int>(c.size());
    for (int i = 0; i < n; ++i) {
      const int j = dir > 0 ? i : n - 1 - i;
      s = step_constant(s, 0.0, k, c[j] - x);
      s[1] += static_cast<double>(dir) * z[j] * s[0];
      x = c[j];
    }
    return std::make_pair(s, x);
  };
  const double left = c.front() - 1.0;
  const double right = c.back() + 1.0;
  auto [s, xs] = march(State{std::exp(I * k * right), I * k * std::exp(I * k * right)}, right, -1);
  s = step_constant(s, 0.0, k, left - xs);
  auto [al, bl] = split(s, k, left);
  auto [u, xu] = march(State{std::exp(-I * k * left), -I * k * std::exp(-I * k * left)}, left, +1);
  u = step_constant(u, 0.0, k, right - xu);
  auto [ar, br] = split(u, k, right);
  return {bl / al, ar / br, 1.0 / al, 1.0 / br};
}

// Classical RK4 on psi'' = (v(x) - k^2) psi with `steps` steps over [a, b].
inline Amplitudes rk4(const std::function<C(double)>& v, double a, double b, C k, int steps) {
  auto deriv = [&](double x, const State& s) { return State{s[1], (v(x) - k * k) * s[0]}; };
  auto integrate = [&](State s, double from, double to) {
    const double h = (to - from) / steps;
    double x = from;
    for (int i = 0; i < steps; ++i) {
      const State k1 = deriv(x, s);
      const State k2 = deriv(x + h / 2, {s[0] + h / 2 * k1[0], s[1] + h / 2 * k1[1]});
      const State k3 = deriv(x + h / 2, {s[0] + h / 2 * k2[0], s[1] + h / 2 * k2[1]});
      const State k4 = deriv(x + h, {s[0] + h * k3[0], s[1] + h * k3[1]});
      s[0] += h / 6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
      s[1] += h / 6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
      x = from + (i + 1) * h;
    }
    return s;
  };
  const State s = integrate({std::exp(I * k * b), I * k * std::exp(I * k * b)}, b, a);
  auto [al, bl] = split(s, k, a);
  const State u = integrate({std::exp(-I * k * a), -I * k * std::exp(-I * k * a)}, a, b);
  auto [ar, br] = split(u, k, b);
  return {bl / al, ar / br, 1.0 / al, 1.0 / br};
}

}  // namespace oracle
