#pragma once
// Charts, boundary defining functions and the tortoise coordinate near null infinity.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace scri {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kEps0 = 0.1;  // chart half-width

// smoothstep 6x^5 - 15x^4 + 10x^3 clamped to [0,1]
inline double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

// chi == 1 for x < 2, chi == 0 for x > 3
inline double cutoff_chi(double x) { return 1.0 - smoothstep(x - 2.0); }
// chi~(x) = chi(1/x): 0 for x < 1/3, 1 for x > 1/2
inline double cutoff_chi_tilde(double x) { return cutoff_chi(1.0 / x); }

inline double tortoise(double r, double m) {
  if (!(r > 2.0 * m) || !(r > 0.0)) throw DomainError("tortoise: r must exceed max(2m, 0)");
  if (m == 0.0) return r;
  return r + 2.0 * m * std::log(r - 2.0 * m);
}

// Newton on r + 2m log(r-2m) = rs, safeguarded by a bracket.
inline double inverse_tortoise(double rs, double m) {
  if (m == 0.0) {
    if (!(rs > 0.0)) throw DomainError("inverse_tortoise: r_* must be positive for m = 0");
    return rs;
  }
  const double tol = 1e-12 * (1.0 + std::fabs(rs));
  double lo = std::max(2.0 * m, 0.0);
  lo += 1e-300 + 1e-15 * std::max(1.0, std::fabs(lo));
  double hi = std::max(rs + 1.0, lo + 1.0);
  auto F = [&](double r) { return r + 2.0 * m * std::log(r - 2.0 * m) - rs; };
  // with m < 0 the lower end is r = 0, where F may still be negative
  if (F(lo) > 0.0 && m < 0.0) throw DomainError("inverse_tortoise: no root with r > 0");
  int grow = 0;
  while (F(hi) < 0.0) {
    hi = lo + 2.0 * (hi - lo);
    if (++grow > 200) throw ConvergenceError("inverse_tortoise: bracket growth failed");
  }
  double r = std::clamp(rs - 2.0 * m * std::log(std::max(std::fabs(rs), 1.0)), lo, hi);
  if (!(r > lo && r < hi)) r = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    double f = F(r);
    if (std::fabs(f) < tol) return r;
    if (f < 0.0) lo = r; else hi = r;
    double fp = 1.0 + 2.0 * m / (r - 2.0 * m);
    double rn = r - f / fp;
    if (!(rn > lo && rn < hi)) rn = 0.5 * (lo + hi);
    r = rn;
  }
  if (std::fabs(F(r)) < tol) return r;
  throw ConvergenceError("inverse_tortoise: iteration cap reached");
}

struct NullConePoint {
  double rho, v;
  std::array<double, 3> omega;
};

inline NullConePoint chart_transition_temporal_to_nullcone(double rho_plus, const std::array<double, 3>& X) {
  double n = std::sqrt(X[0] * X[0] + X[1] * X[1] + X[2] * X[2]);
  if (n == 0.0) throw DomainError("chart transition undefined at X = 0");
  return {rho_plus / n, 1.0 / n - 1.0, {X[0] / n, X[1] / n, X[2] / n}};
}

struct TemporalPoint {
  double rho_plus;
  std::array<double, 3> X;
};

inline TemporalPoint chart_transition_nullcone_to_temporal(const NullConePoint& p) {
  if (!(p.v > -1.0)) throw DomainError("chart transition needs v > -1");
  double n = 1.0 / (p.v + 1.0);
  return {p.rho * n, {p.omega[0] * n, p.omega[1] * n, p.omega[2] * n}};
}

enum class Corner { Past, Future };  // near i0 ∩ I+, near I+ ∩ i+

struct DoubleNullPoint {
  double q, s;
  double theta = 1.0, phi = 0.0;
  double t() const { return 0.5 * (q + s); }
  double rstar() const { return 0.5 * (q - s); }
};

struct BoundaryTriple {
  double rho0 = 0, rhoI = 0, rhoPlus = 0;
  Corner region = Corner::Past;
  double r = 0;
};

inline BoundaryTriple boundary_defining(const DoubleNullPoint& p, double m, Corner c) {
  double t = p.t(), rs = p.rstar();
  if (t == rs) throw DomainError("boundary_defining: point lies on the cone t = r_*");
  if ((c == Corner::Past) != (t < rs)) throw DomainError("boundary_defining: region tag disagrees with sign of t - r_*");
  double r = inverse_tortoise(rs, m);
  if (!(r > 2.0 * m)) throw DomainError("boundary_defining: r <= 2m");
  BoundaryTriple b;
  b.region = c;
  b.r = r;
  if (c == Corner::Past) {
    b.rho0 = 1.0 / (rs - t);
    b.rhoI = (rs - t) / r;
  } else {
    b.rhoI = (t - rs) / r;
    b.rhoPlus = 1.0 / (t - rs);
  }
  return b;
}

// Rows: d0, d1 expressed in (rho0 d_rho0, rhoI d_rhoI).
inline std::array<std::array<double, 2>, 2> null_frame_coefficients(double rho0, double rhoI, double m) {
  double rho = rho0 * rhoI;
  double F = 1.0 - 2.0 * m * rho;
  return {{{0.0, -0.5 * rho0 * rhoI * F}, {rho0 * rho0, -rho0 * (1.0 - 0.5 * rhoI * F)}}};
}

// ---------------------------------------------------------------------------
// f = rho t solves f = 1 + v - 2 m rho chi(f) (log rho - log(1 - 2 m rho))

struct TInverseSample {
  std::vector<double> rho, f;
  int iterations = 0;
};

inline double t_inverse_rhs(double f, double rho, double v, double m) {
  return 1.0 + v - 2.0 * m * rho * cutoff_chi(f) * (std::log(rho) - std::log(1.0 - 2.0 * m * rho));
}

inline TInverseSample t_inverse_fixed_point(double v, double m, const std::vector<double>& rho,
                                            double init_offset = 0.0) {
  if (!(v > -0.5 && v < 5.0)) throw DomainError("t_inverse: v outside (-1/2, 5)");
  TInverseSample out;
  out.rho = rho;
  out.f.assign(rho.size(), 1.0 + v + init_offset);
  double last = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= 200; ++it) {
    double change = 0.0;
    for (size_t i = 0; i < rho.size(); ++i) {
      double fn = t_inverse_rhs(out.f[i], rho[i], v, m);
      change = std::max(change, std::fabs(fn - out.f[i]));
      out.f[i] = fn;
    }
    out.iterations = it;
    if (change < 1e-13) return out;
    if (it > 3 && change > last) throw ConvergenceError("t_inverse: contraction failure");
    last = change;
  }
  throw ConvergenceError("t_inverse: iteration cap reached");
}

}  // namespace scri
