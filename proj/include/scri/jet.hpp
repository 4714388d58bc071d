#pragma once
// Second order forward-mode jets in four variables.
// A Jet carries value, gradient and Hessian; arithmetic propagates all three exactly.

#include <array>
#include <cmath>

namespace scri {

struct Jet {
  double v = 0.0;
  std::array<double, 4> d{};                    // d[i] = df/dx^i
  std::array<std::array<double, 4>, 4> dd{};    // dd[i][j] = d2f/dx^i dx^j

  Jet() = default;
  Jet(double c) : v(c) {}  // NOLINT: constants promote implicitly

  static Jet var(double x, int i) {
    Jet j(x);
    j.d[i] = 1.0;
    return j;
  }
};

// chain rule for a scalar function with derivatives f0, f1, f2 at a.v
inline Jet apply(const Jet& a, double f0, double f1, double f2) {
  Jet r(f0);
  for (int i = 0; i < 4; ++i) r.d[i] = f1 * a.d[i];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.dd[i][j] = f1 * a.dd[i][j] + f2 * a.d[i] * a.d[j];
  return r;
}

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet r(a.v + b.v);
  for (int i = 0; i < 4; ++i) {
    r.d[i] = a.d[i] + b.d[i];
    for (int j = 0; j < 4; ++j) r.dd[i][j] = a.dd[i][j] + b.dd[i][j];
  }
  return r;
}
inline Jet operator-(const Jet& a) {
  Jet r(-a.v);
  for (int i = 0; i < 4; ++i) {
    r.d[i] = -a.d[i];
    for (int j = 0; j < 4; ++j) r.dd[i][j] = -a.dd[i][j];
  }
  return r;
}
inline Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }
inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.v * b.v);
  for (int i = 0; i < 4; ++i) {
    r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    for (int j = 0; j < 4; ++j)
      r.dd[i][j] = a.dd[i][j] * b.v + a.v * b.dd[i][j] + a.d[i] * b.d[j] + a.d[j] * b.d[i];
  }
  return r;
}
inline Jet operator*(double c, const Jet& a) {
  Jet r(c * a.v);
  for (int i = 0; i < 4; ++i) {
    r.d[i] = c * a.d[i];
    for (int j = 0; j < 4; ++j) r.dd[i][j] = c * a.dd[i][j];
  }
  return r;
}
inline Jet operator*(const Jet& a, double c) { return c * a; }
inline Jet recip(const Jet& a) {
  double iv = 1.0 / a.v;
  return apply(a, iv, -iv * iv, 2.0 * iv * iv * iv);
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }
inline Jet operator/(const Jet& a, double c) { return (1.0 / c) * a; }
inline Jet operator/(double c, const Jet& a) { return c * recip(a); }
inline Jet& operator+=(Jet& a, const Jet& b) { return a = a + b; }
inline Jet& operator-=(Jet& a, const Jet& b) { return a = a - b; }
inline Jet& operator*=(Jet& a, const Jet& b) { return a = a * b; }

inline Jet exp(const Jet& a) {
  double e = std::exp(a.v);
  return apply(a, e, e, e);
}
inline Jet log(const Jet& a) { return apply(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
inline Jet sin(const Jet& a) {
  double s = std::sin(a.v), c = std::cos(a.v);
  return apply(a, s, c, -s);
}
inline Jet cos(const Jet& a) {
  double s = std::sin(a.v), c = std::cos(a.v);
  return apply(a, c, -s, -c);
}
inline Jet sqrt(const Jet& a) {
  double s = std::sqrt(a.v);
  return apply(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline Jet pow(const Jet& a, double p) {
  double f0 = std::pow(a.v, p);
  return apply(a, f0, p * f0 / a.v, p * (p - 1.0) * f0 / (a.v * a.v));
}
inline Jet tanh(const Jet& a) {
  double t = std::tanh(a.v);
  double s = 1.0 - t * t;
  return apply(a, t, s, -2.0 * t * s);
}

// value-level helpers so templated code can run on double or Jet
inline double value(double x) { return x; }
inline double value(const Jet& x) { return x.v; }

}  // namespace scri
