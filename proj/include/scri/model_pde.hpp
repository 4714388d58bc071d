#pragma once
// Mode-wise characteristic solvers for the model wave operator near I+,
//   2 rhoI^-1 (Y - gamma)(X - Y) u - l(l+1) u = f,   X = rho0 d_rho0, Y = rhoI d_rhoI,
// the weak-null toy system, its Newton iteration, and the model coupling matrices.
//
// Grid: x = log rho0, y = log rhoI with the same step h, so the X - Y characteristics
// x + y = const pass through grid points. w = (X - Y) u is carried alongside u.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "scri/compactification.hpp"

namespace scri {

struct GridError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CharacteristicGrid {
  double rho0_min = 1e-3;
  double rhoI_min = 1e-7;
  double eps = 0.1;
  int n = 16;  // points per decade

  double h() const { return std::log(10.0) / n; }
  int steps(double lo) const {
    double s = std::log(eps / lo) / h();
    int k = static_cast<int>(std::lround(s));
    if (std::fabs(s - k) > 1e-6) throw GridError("grid: range is not a whole number of steps");
    return k;
  }
  int nx() const { return steps(rho0_min) + 1; }
  int ny() const { return steps(rhoI_min) + 1; }
  double x(int i) const { return std::log(rho0_min) + i * h(); }
  double y(int j) const { return std::log(eps) - j * h(); }  // j = 0 is rhoI = eps
  double rho0(int i) const { return std::exp(x(i)); }
  double rhoI(int j) const { return std::exp(y(j)); }

  void validate() const {
    if (n < 16) throw GridError("grid: need at least 16 points per decade");
    if (rho0_min < 1e-8 || rhoI_min < 1e-8) throw GridError("grid: minimum below 1e-8");
    if (!(rho0_min < eps && rhoI_min < eps)) throw GridError("grid: minimum must lie below eps");
    (void)nx();
    (void)ny();
  }
  CharacteristicGrid refined(int factor) const {
    CharacteristicGrid g = *this;
    g.n *= factor;
    return g;
  }
  std::vector<double> rhoI_samples() const {
    std::vector<double> r(ny());
    for (int j = 0; j < ny(); ++j) r[j] = rhoI(j);
    return r;
  }
};

using GridFn = Eigen::MatrixXd;  // (nx, ny)
using Source = std::function<double(double rho0, double rhoI)>;

// u and w on rhoI = eps, u on rho0 = rho0_min
struct ModeData {
  std::function<double(double)> u_top = [](double) { return 0.0; };
  std::function<double(double)> w_top = [](double) { return 0.0; };
  std::function<double(double)> u_left = [](double) { return 0.0; };
};

enum class FitModel { constant, log_constant, power };

struct FitResult {
  double c_log = 0.0, c0 = 0.0, amplitude = 0.0, exponent = 0.0, residual = 0.0;
  bool ill_conditioned = false;
};

struct ModeSolution {
  CharacteristicGrid grid;
  int l = 0;
  double gamma = 0.0;
  GridFn u, w;
  FitResult fit;                 // power model on the last decade at rho0 = eps
  std::vector<double> leading;   // c0 of the same fit, column by column
  bool fit_failed = false;

  std::vector<double> column(int i) const {
    std::vector<double> c(u.cols());
    for (int j = 0; j < u.cols(); ++j) c[j] = u(i, j);
    return c;
  }
};

// smooth bump supported in |z| < 1
inline double bump(double z) { return std::fabs(z) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - z * z)) : 0.0; }

// ---------------------------------------------------------------------------
// fits

namespace detail {

// d/dlog rho on samples ordered by index, nonuniform three-point formula
inline std::vector<double> log_derivative(const std::vector<double>& t, const std::vector<double>& u) {
  size_t n = u.size();
  std::vector<double> d(n);
  for (size_t i = 0; i < n; ++i) {
    size_t a = i == 0 ? 0 : (i == n - 1 ? n - 3 : i - 1);
    double t0 = t[a], t1 = t[a + 1], t2 = t[a + 2], x = t[i];
    d[i] = u[a] * (2 * x - t1 - t2) / ((t0 - t1) * (t0 - t2)) + u[a + 1] * (2 * x - t0 - t2) / ((t1 - t0) * (t1 - t2)) +
           u[a + 2] * (2 * x - t0 - t1) / ((t2 - t0) * (t2 - t1));
  }
  return d;
}

inline double lsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, Eigen::VectorXd& coef, bool& bad) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  auto s = svd.singularValues();
  bad = s(s.size() - 1) == 0.0 || s(0) / s(s.size() - 1) > 1e12;
  coef = svd.solve(b);
  return std::sqrt((A * coef - b).squaredNorm() / b.size());
}

}  // namespace detail

// least squares on the last decade of rhoI; the residual is floored at the rounding level of u
inline FitResult fit_leading_terms(const std::vector<double>& rhoI, const std::vector<double>& u, FitModel model) {
  if (rhoI.size() != u.size() || rhoI.size() < 4) throw std::invalid_argument("fit: need matching samples");
  double rmin = *std::min_element(rhoI.begin(), rhoI.end());
  double below = 0;
  for (double r : rhoI) below = std::max(below, std::min(r, 1e-2));
  if (std::log10(below / rmin) < 2.0 - 1e-9) throw std::invalid_argument("fit: need two decades below 1e-2");

  std::vector<double> t(u.size());
  for (size_t i = 0; i < u.size(); ++i) t[i] = std::log(rhoI[i]);
  std::vector<size_t> win;
  for (size_t i = 0; i < u.size(); ++i)
    if (rhoI[i] <= 10.0 * rmin * (1 + 1e-12)) win.push_back(i);

  FitResult r;
  const int m = static_cast<int>(win.size());
  if (m < 4) {
    r.ill_conditioned = true;
    return r;
  }
  Eigen::VectorXd b(m), coef;
  double scale = 0;
  for (int i = 0; i < m; ++i) {
    b(i) = u[win[i]];
    scale = std::max(scale, std::fabs(b(i)));
  }
  Eigen::MatrixXd A(m, model == FitModel::constant ? 1 : 2);
  switch (model) {
    case FitModel::constant:
      A.setOnes();
      r.residual = detail::lsq(A, b, coef, r.ill_conditioned);
      r.c0 = coef(0);
      break;
    case FitModel::log_constant:
      for (int i = 0; i < m; ++i) A(i, 0) = t[win[i]], A(i, 1) = 1.0;
      r.residual = detail::lsq(A, b, coef, r.ill_conditioned);
      r.c_log = coef(0);
      r.c0 = coef(1);
      break;
    case FitModel::power: {
      // exponent from the log-log slope of |Y u|, then [1, rho^p] by least squares
      auto du = detail::log_derivative(t, u);
      Eigen::MatrixXd S(m, 2);
      Eigen::VectorXd ly(m), sc;
      for (int i = 0; i < m; ++i) {
        if (du[win[i]] == 0.0) {
          r.ill_conditioned = true;
          return r;
        }
        S(i, 0) = t[win[i]], S(i, 1) = 1.0;
        ly(i) = std::log(std::fabs(du[win[i]]));
      }
      bool bad = false;
      detail::lsq(S, ly, sc, bad);
      r.exponent = sc(0);
      for (int i = 0; i < m; ++i) A(i, 0) = 1.0, A(i, 1) = std::pow(rhoI[win[i]], r.exponent);
      r.residual = detail::lsq(A, b, coef, r.ill_conditioned);
      r.ill_conditioned = r.ill_conditioned || bad;
      r.c0 = coef(0);
      r.amplitude = coef(1);
      break;
    }
  }
  r.residual = std::max(r.residual, 64.0 * std::numeric_limits<double>::epsilon() * scale);
  return r;
}

// ---------------------------------------------------------------------------
// single mode

inline GridFn sample_source(const CharacteristicGrid& g, const Source& f) {
  GridFn F(g.nx(), g.ny());
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) F(i, j) = f ? f(g.rho0(i), g.rhoI(j)) : 0.0;
  return F;
}

inline void fit_mode(ModeSolution& s, double fail_threshold = 1e-3) {
  auto r = s.grid.rhoI_samples();
  int nx = s.grid.nx();
  s.leading.resize(nx);
  for (int i = 0; i < nx; ++i) s.leading[i] = fit_leading_terms(r, s.column(i), FitModel::power).c0;
  s.fit = fit_leading_terms(r, s.column(nx - 1), FitModel::power);
  double umax = s.u.cwiseAbs().maxCoeff();
  s.fit_failed = s.fit.ill_conditioned || s.fit.residual > fail_threshold * (1.0 + umax);
}

// (Y - gamma) w = S = rhoI (f + L u) / 2 by trapezoid with the exact integrating factor,
// (X - Y) u = w by trapezoid along x + y = const; the two couple through a 1x1 solve per point.
inline ModeSolution solve_damped_mode(const CharacteristicGrid& g, int l, double gamma, const GridFn& f,
                                      const ModeData& data) {
  g.validate();
  if (l < 0) throw std::invalid_argument("mode: l must be nonnegative");
  if (gamma < 0) throw std::invalid_argument("mode: gamma must be nonnegative");
  const int nx = g.nx(), ny = g.ny();
  if (f.rows() != nx || f.cols() != ny) throw GridError("mode: source does not match the grid");
  double c1 = data.u_top(g.rho0_min), c2 = data.u_left(g.eps);
  if (std::fabs(c1 - c2) > 1e-12 * (1.0 + std::fabs(c1))) throw std::invalid_argument("mode: data disagree at the corner");

  const double h = g.h(), L = l * (l + 1.0), damp = std::exp(-gamma * h);
  ModeSolution s;
  s.grid = g;
  s.l = l;
  s.gamma = gamma;
  s.u.resize(nx, ny);
  s.w.resize(nx, ny);
  auto S = [&](int i, int j) { return 0.5 * g.rhoI(j) * (f(i, j) + L * s.u(i, j)); };

  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      double rI = g.rhoI(j);
      if (j == 0) {
        s.u(i, j) = data.u_top(g.rho0(i));
        s.w(i, j) = data.w_top(g.rho0(i));
      } else if (i == 0) {
        s.u(i, j) = data.u_left(rI);
        s.w(i, j) = damp * (s.w(i, j - 1) - 0.5 * h * S(i, j - 1)) - 0.5 * h * S(i, j);
      } else {
        double A = s.u(i - 1, j - 1) + 0.5 * h * s.w(i - 1, j - 1);
        double B = damp * (s.w(i, j - 1) - 0.5 * h * S(i, j - 1));
        double w = (B - 0.25 * h * rI * (f(i, j) + L * A)) / (1.0 + 0.125 * h * h * rI * L);
        s.w(i, j) = w;
        s.u(i, j) = A + 0.5 * h * w;
      }
    }
  }
  fit_mode(s);
  return s;
}

inline ModeSolution solve_damped_mode(const CharacteristicGrid& g, int l, double gamma, const Source& f,
                                      const ModeData& data) {
  return solve_damped_mode(g, l, gamma, sample_source(g, f), data);
}

inline ModeSolution solve_friedlander_mode(const CharacteristicGrid& g, int l, const GridFn& f, const ModeData& data) {
  return solve_damped_mode(g, l, 0.0, f, data);
}
inline ModeSolution solve_friedlander_mode(const CharacteristicGrid& g, int l, const Source& f, const ModeData& data) {
  return solve_damped_mode(g, l, 0.0, f, data);
}

// max |u_n - u_2n| / |u_2n - u_4n| on the coarse points, as a base-2 log
inline double self_convergence_order(const std::function<ModeSolution(const CharacteristicGrid&)>& solve,
                                     const CharacteristicGrid& g) {
  auto a = solve(g), b = solve(g.refined(2)), c = solve(g.refined(4));
  double e1 = 0, e2 = 0;
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) {
      e1 = std::max(e1, std::fabs(a.u(i, j) - b.u(2 * i, 2 * j)));
      e2 = std::max(e2, std::fabs(b.u(2 * i, 2 * j) - c.u(4 * i, 4 * j)));
    }
  return std::log2(e1 / e2);
}

// ---------------------------------------------------------------------------
// toy system  (L_gamma u0, L u1c - rho^-1 (d1 u0)^2, L u1 - rho^-1 (d1 u1c)^2) = (f0, f1c, f1), l = 0

struct ToyConfig {
  CharacteristicGrid grid{2e-3, 2e-7, 0.2, 16};
  double gamma = 0.5;
  ModeData data0, data1c, data1;
  Source f0, f1c, f1;
  bool quadratic = true;   // both quadratic terms
  bool source_1c = true;   // the (d1 u1c)^2 source of the u1 equation
};

struct ToySolution {
  ModeSolution u0, u1c, u1;
  FitResult u1_log;   // log + const on the last decade at rho0 = eps
  FitResult u1c_fit;  // power model
};

// d1 u = rho0 (w + rhoI Y u / 2) with the m = 0 null frame; Y u by centered differences in y
inline GridFn d1_field(const ModeSolution& s) {
  const auto& g = s.grid;
  int nx = g.nx(), ny = g.ny();
  double h = g.h();
  GridFn q(nx, ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      double yu;
      if (j == 0) yu = (3 * s.u(i, 0) - 4 * s.u(i, 1) + s.u(i, 2)) / (2 * h);
      else if (j == ny - 1) yu = -(3 * s.u(i, j) - 4 * s.u(i, j - 1) + s.u(i, j - 2)) / (2 * h);
      else yu = (s.u(i, j - 1) - s.u(i, j + 1)) / (2 * h);
      q(i, j) = g.rho0(i) * (s.w(i, j) + 0.5 * g.rhoI(j) * yu);
    }
  return q;
}

// rho^-1 (2 d1a d1b - (d1a)^2) in the rhoI^-1-weighted normalization of the mode equation; a == b gives rho^-1 (d1a)^2
inline GridFn quadratic_source(const ModeSolution& a, const ModeSolution& b) {
  const auto& g = a.grid;
  GridFn qa = d1_field(a), qb = d1_field(b), out(g.nx(), g.ny());
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j)
      out(i, j) = g.rho0(i) / g.rhoI(j) * (2 * qa(i, j) * qb(i, j) - qa(i, j) * qa(i, j));
  return out;
}

inline void fit_toy(ToySolution& t) {
  auto r = t.u1.grid.rhoI_samples();
  int i = t.u1.grid.nx() - 1;
  t.u1_log = fit_leading_terms(r, t.u1.column(i), FitModel::log_constant);
  t.u1c_fit = fit_leading_terms(r, t.u1c.column(i), FitModel::power);
}

inline ToySolution solve_null_toy_system(const ToyConfig& c) {
  const auto& g = c.grid;
  ToySolution t;
  t.u0 = solve_damped_mode(g, 0, c.gamma, sample_source(g, c.f0), c.data0);
  GridFn f = sample_source(g, c.f1c);
  if (c.quadratic) f += quadratic_source(t.u0, t.u0);
  t.u1c = solve_damped_mode(g, 0, 0.0, f, c.data1c);
  f = sample_source(g, c.f1);
  if (c.quadratic && c.source_1c) f += quadratic_source(t.u1c, t.u1c);
  t.u1 = solve_damped_mode(g, 0, 0.0, f, c.data1);
  fit_toy(t);
  return t;
}

// ---------------------------------------------------------------------------
// Newton: u_{k+1} = u_k + v_k with L_{u_k} v_k = -P(u_k). The linearization is lower triangular,
// so each step is three linear solves; the quadratic terms enter as 2 q(u_k) q(u_{k+1}) - q(u_k)^2.

struct NewtonResult {
  std::vector<ToySolution> iterates;  // iterates[0] is the zero guess
  std::vector<double> errors;         // sup |u_k - u*| over the three components
  std::vector<double> ratios;         // errors[k+1] / errors[k]^2, 0 once errors[k] is at the floor
  std::vector<double> updates;        // sup |u_{k+1} - u_k|
};

inline ToySolution newton_step(const ToyConfig& c, const ToySolution& prev) {
  const auto& g = c.grid;
  ToySolution t;
  t.u0 = solve_damped_mode(g, 0, c.gamma, sample_source(g, c.f0), c.data0);
  GridFn f = sample_source(g, c.f1c);
  if (c.quadratic) f += quadratic_source(prev.u0, t.u0);
  t.u1c = solve_damped_mode(g, 0, 0.0, f, c.data1c);
  f = sample_source(g, c.f1);
  if (c.quadratic && c.source_1c) f += quadratic_source(prev.u1c, t.u1c);
  t.u1 = solve_damped_mode(g, 0, 0.0, f, c.data1);
  fit_toy(t);
  return t;
}

inline double toy_distance(const ToySolution& a, const ToySolution& b) {
  return std::max({(a.u0.u - b.u0.u).cwiseAbs().maxCoeff(), (a.u1c.u - b.u1c.u).cwiseAbs().maxCoeff(),
                   (a.u1.u - b.u1.u).cwiseAbs().maxCoeff()});
}

inline NewtonResult newton_iterate(const ToyConfig& c, int K, int reference_iterate = 8) {
  const auto& g = c.grid;
  g.validate();
  ToySolution zero;
  for (ModeSolution* s : {&zero.u0, &zero.u1c, &zero.u1}) {
    s->grid = g;
    s->u = GridFn::Zero(g.nx(), g.ny());
    s->w = GridFn::Zero(g.nx(), g.ny());
  }
  NewtonResult r;
  r.iterates.push_back(zero);
  int total = std::max(K, reference_iterate);
  int growth = 0;
  for (int k = 0; k < total; ++k) {
    r.iterates.push_back(newton_step(c, r.iterates.back()));
    r.updates.push_back(toy_distance(r.iterates[k + 1], r.iterates[k]));
    size_t n = r.updates.size();
    growth = (n > 1 && r.updates[n - 1] > r.updates[n - 2]) ? growth + 1 : 0;
    if (growth >= 3) throw ConvergenceError("newton: update norm grew for three consecutive steps");
  }
  const ToySolution& ref = r.iterates[reference_iterate];
  double scale = 1.0 + std::max({ref.u0.u.cwiseAbs().maxCoeff(), ref.u1c.u.cwiseAbs().maxCoeff(),
                                 ref.u1.u.cwiseAbs().maxCoeff()});
  for (int k = 0; k <= K; ++k) r.errors.push_back(toy_distance(r.iterates[k], ref));
  for (int k = 1; k < K; ++k) {
    double e = r.errors[k];
    r.ratios.push_back(e > 1e-8 * scale ? r.errors[k + 1] / (e * e) : 0.0);
  }
  r.iterates.resize(K + 1);
  return r;
}

// ---------------------------------------------------------------------------
// model matrices

using Mat3 = Eigen::Matrix3d;
using Mat7 = Eigen::Matrix<double, 7, 7>;

// derivatives of the background perturbation entering A_h and B_h; the sphere tensors are
// represented by one scalar each
struct HDerivatives {
  double d1h01 = 0, d1h11 = 0, d1h1b = 0, d1h_ab_up = 0, d1h_b_a = 0;
  double d11h01 = 0, d11h11 = 0, d11h1b = 0, d11hab = 0;
};

// components 1..7: h00, h01, h0b, h11, h1b, trace of hab, trace-free part of hab
inline Mat7 A_h(double g1, double g2, const HDerivatives& d) {
  Mat7 A = Mat7::Zero();
  A(0, 0) = 2 * g1;
  A(1, 0) = g1 - g2 - 2 * d.d1h01;
  A(1, 5) = 0.5 * (g1 - g2);
  A(2, 2) = g1;
  A(3, 0) = -2 * d.d1h11;
  A(3, 5) = g1;
  A(3, 6) = 0.5 * d.d1h_ab_up;
  A(4, 0) = -2 * d.d1h1b;
  A(4, 2) = g1 + d.d1h_b_a;
  A(5, 0) = 2 * g2;
  A(5, 5) = g2;
  return A;
}

inline Mat7 B_h(const HDerivatives& d) {
  Mat7 B = Mat7::Zero();
  B(1, 0) = 2 * d.d11h01;
  B(3, 0) = 2 * d.d11h11;
  B(4, 0) = 2 * d.d11h1b;
  B(6, 0) = 2 * d.d11hab;
  return B;
}

inline const std::array<int, 3> kDecaying{0, 2, 5};   // pi_0
inline const std::array<int, 3> kNonLog{1, 4, 6};     // complement of pi_11 among the non-decaying
inline constexpr int kLogComponent = 3;               // pi_11

// block of pi_0 A_h on K_0
inline Mat3 A_CD(double g1, double g2) {
  Mat7 A = A_h(g1, g2, {});
  Mat3 r;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) r(a, b) = A(kDecaying[a], kDecaying[b]);
  return r;
}

// coupling of the linearized toy system; d1u1c0 is the leading term of d1 u1c at I+
inline Mat3 A_u(double gamma, double d1u1c0) {
  Mat3 A = Mat3::Zero();
  A(0, 0) = gamma;
  A(2, 1) = d1u1c0;
  return A;
}

}  // namespace scri
