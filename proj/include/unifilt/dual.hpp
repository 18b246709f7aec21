#pragma once

#include <array>
#include <cmath>

namespace unifilt {

/// Forward-mode dual number carrying N tangent lanes.
template <int N>
struct Dual {
  double value = 0.0;
  std::array<double, N> grad{};

  Dual() = default;
  Dual(double v) : value(v) {}  // NOLINT: constants promote implicitly
  Dual(double v, std::array<double, N> g) : value(v), grad(g) {}

  static Dual variable(double v, int lane) {
    Dual d(v);
    d.grad[lane] = 1.0;
    return d;
  }
};

template <int N>
Dual<N> operator+(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.value + b.value);
  for (int i = 0; i < N; ++i) r.grad[i] = a.grad[i] + b.grad[i];
  return r;
}

template <int N>
Dual<N> operator-(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.value - b.value);
  for (int i = 0; i < N; ++i) r.grad[i] = a.grad[i] - b.grad[i];
  return r;
}

template <int N>
Dual<N> operator-(const Dual<N>& a) {
  Dual<N> r(-a.value);
  for (int i = 0; i < N; ++i) r.grad[i] = -a.grad[i];
  return r;
}

template <int N>
Dual<N> operator*(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.value * b.value);
  for (int i = 0; i < N; ++i) r.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
  return r;
}

template <int N>
Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
  const double inv = 1.0 / b.value;
  Dual<N> r(a.value * inv);
  for (int i = 0; i < N; ++i) r.grad[i] = (a.grad[i] - r.value * b.grad[i]) * inv;
  return r;
}

template <int N> Dual<N> operator+(const Dual<N>& a, double b) { return a + Dual<N>(b); }
template <int N> Dual<N> operator+(double a, const Dual<N>& b) { return Dual<N>(a) + b; }
template <int N> Dual<N> operator-(const Dual<N>& a, double b) { return a - Dual<N>(b); }
template <int N> Dual<N> operator-(double a, const Dual<N>& b) { return Dual<N>(a) - b; }
template <int N> Dual<N> operator*(const Dual<N>& a, double b) { return a * Dual<N>(b); }
template <int N> Dual<N> operator*(double a, const Dual<N>& b) { return Dual<N>(a) * b; }
template <int N> Dual<N> operator/(const Dual<N>& a, double b) { return a / Dual<N>(b); }
template <int N> Dual<N> operator/(double a, const Dual<N>& b) { return Dual<N>(a) / b; }

template <int N>
Dual<N> cos(const Dual<N>& a) {
  const double s = -std::sin(a.value);
  Dual<N> r(std::cos(a.value));
  for (int i = 0; i < N; ++i) r.grad[i] = s * a.grad[i];
  return r;
}

template <int N>
Dual<N> sin(const Dual<N>& a) {
  const double c = std::cos(a.value);
  Dual<N> r(std::sin(a.value));
  for (int i = 0; i < N; ++i) r.grad[i] = c * a.grad[i];
  return r;
}

inline double value_of(double v) { return v; }
template <int N>
double value_of(const Dual<N>& d) { return d.value; }

}  // namespace unifilt
