#pragma once
// Radial null geodesics near I+, area radius and null second fundamental forms of spheres,
// Hawking and Bondi mass, the mass loss law, and the static scattering ODE on i+.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <boost/numeric/odeint.hpp>
#include <Eigen/Dense>

#include "scri/compactification.hpp"
#include "scri/jet.hpp"
#include "scri/tensor_algebra.hpp"

namespace scri {

struct DegenerateSphere : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// geodesics

struct GeodesicConfig {
  double s0 = 20.0;
  int nodes = 2000;       // grid in sigma = s^-1/2 on [0, s0^-1/2]
  int max_iterations = 80;
  double tol = 1e-14;
};

struct GeodesicTrajectory {
  std::vector<double> s;         // increasing, s[0] = s0
  std::vector<Vec4> x, v;
  std::vector<double> null_norm;
  Vec4 target{};                 // (x1, x2, x3) of the endpoint on I+ in slots 1..3
  int iterations = 0;
  std::vector<double> picard_diffs;
  double alpha0 = 0, alpha1 = 0, alpha_slash = 0;  // NaN when the component vanishes identically

  double max_null_norm() const {
    double r = 0;
    for (double n : null_norm) r = std::max(r, std::fabs(n));
    return r;
  }
};

namespace detail {

// slope of log|f| against log s for s in [lo, hi]
inline double tail_rate(const std::vector<double>& s, const std::vector<double>& f, double lo, double hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] < lo || s[i] > hi || std::fabs(f[i]) < 1e-300) continue;
    double X = std::log(s[i]), Y = std::log(std::fabs(f[i]));
    sx += X, sy += Y, sxx += X * X, sxy += X * Y, ++n;
  }
  if (n < 3) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double quadratic_form(const Mat4& g, const Vec4& a, const Vec4& b) {
  double r = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r += g[i][j] * a[i] * b[j];
  return r;
}

}  // namespace detail

// Picard iteration v_{k+1}(s) = v_k(inf) + int_s^inf Gamma(x_k) v_k v_k, with x^0 ~ s + 4m log s.
// Tail integrals use u = sigma^-2, which maps [s, inf) onto [0, s^-1/2] with a continuous integrand.
// Perturbations violating the gauge condition can leave v^0 - 1 non-integrable; the iteration then
// stops contracting and a ConvergenceError is raised.
inline GeodesicTrajectory integrate_radial_null_geodesic(const MetricFn& g, double m, const Vec4& target,
                                                         const GeodesicConfig& cfg = {}) {
  if (!(cfg.s0 > 0) || cfg.nodes < 16) throw std::invalid_argument("geodesic: bad configuration");
  const int N = cfg.nodes;
  const double S = 1.0 / std::sqrt(cfg.s0), hs = S / N;
  std::vector<double> sig(N + 1), s(N + 1);
  for (int j = 0; j <= N; ++j) {
    sig[j] = j * hs;
    s[j] = j == 0 ? std::numeric_limits<double>::infinity() : 1.0 / (sig[j] * sig[j]);
  }
  auto jac = [&](int j) { return j == 0 ? 0.0 : 2.0 / (sig[j] * sig[j] * sig[j]); };

  // vt = (v0 - 1 - 4m/s, v1, v2, v3)
  std::vector<Vec4> vt(N + 1, Vec4{}), x(N + 1);
  std::vector<Mat4> gval(N + 1);
  // x^i = xbar^i - int_s^inf v^i, while x^0 is normalized at s0 and integrated outwards
  // (v^0 - 1 may decay too slowly for an integral from infinity)
  auto integrate_x = [&]() {
    Vec4 C{};
    for (int j = 1; j <= N; ++j) {
      for (int i = 1; i < 4; ++i) {
        C[i] += 0.5 * hs * (vt[j - 1][i] * jac(j - 1) + vt[j][i] * jac(j));
        x[j][i] = target[i] - C[i];
      }
    }
    x[N][0] = s[N] + 4 * m * std::log(s[N]);
    for (int j = N - 1; j >= 1; --j) {
      // vt^0 linear in sigma on each cell, integrated exactly against 2 sigma^-3
      double b = (vt[j + 1][0] - vt[j][0]) / hs, a = vt[j][0] - b * sig[j];
      x[j][0] = x[j + 1][0] + (s[j] - s[j + 1]) + 4 * m * std::log(s[j] / s[j + 1]) + a * (s[j] - s[j + 1]) +
                2 * b * (1 / sig[j] - 1 / sig[j + 1]);
    }
  };
  auto full_v = [&](int j) {
    Vec4 v = vt[j];
    v[0] += 1.0 + (j == 0 ? 0.0 : 4 * m / s[j]);
    return v;
  };

  GeodesicTrajectory out;
  out.target = target;
  integrate_x();
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= cfg.max_iterations; ++k) {
    std::vector<Vec4> G(N + 1, Vec4{});
    for (int j = 1; j <= N; ++j) {
      Geometry geo = geometry(g, x[j]);
      gval[j] = geo.g;
      Vec4 v = full_v(j);
      for (int mu = 0; mu < 4; ++mu) {
        double a = 0;
        for (int kk = 0; kk < 4; ++kk)
          for (int l = 0; l < 4; ++l) a += geo.G[mu][kk][l] * v[kk] * v[l];
        G[j][mu] = a * jac(j);
      }
    }
    std::vector<Vec4> vn(N + 1, Vec4{});
    Vec4 C{};
    double diff = 0;
    for (int j = 1; j <= N; ++j) {
      for (int mu = 0; mu < 4; ++mu) C[mu] += 0.5 * hs * (G[j - 1][mu] + G[j][mu]);
      vn[j] = C;
      vn[j][0] += 1.0 - (1.0 + 4 * m / s[j]);  // back to vt
      for (int mu = 0; mu < 4; ++mu) diff = std::max(diff, std::fabs(vn[j][mu] - vt[j][mu]));
    }
    vt = vn;
    integrate_x();
    out.picard_diffs.push_back(diff);
    out.iterations = k;
    if (k > 2 && diff > last && diff > 100 * cfg.tol) throw ConvergenceError("geodesic: Picard differences stopped contracting");
    last = diff;
    if (diff < cfg.tol) break;
    if (k == cfg.max_iterations) throw ConvergenceError("geodesic: Picard iteration cap reached");
  }

  std::vector<double> f0, f1, fa;
  for (int j = N; j >= 1; --j) {
    Vec4 v = full_v(j);
    gval[j] = values(g(seed(x[j])));
    out.s.push_back(s[j]);
    out.x.push_back(x[j]);
    out.v.push_back(v);
    out.null_norm.push_back(detail::quadratic_form(gval[j], v, v));
    f0.push_back(vt[j][0]);
    f1.push_back(vt[j][1]);
    fa.push_back(std::hypot(vt[j][2], vt[j][3]));
  }
  // v in s^{-1-alpha}
  double lo = 10 * cfg.s0, hi = 1e3 * cfg.s0;
  out.alpha0 = -detail::tail_rate(out.s, f0, lo, hi) - 1.0;
  out.alpha1 = -detail::tail_rate(out.s, f1, lo, hi) - 1.0;
  out.alpha_slash = -detail::tail_rate(out.s, fa, lo, hi) - 1.0;
  return out;
}

// x at coordinate x0 along the trajectory, linear interpolation
inline Vec4 trajectory_at_x0(const GeodesicTrajectory& t, double x0) {
  for (size_t i = 1; i < t.x.size(); ++i) {
    if (t.x[i][0] >= x0) {
      double a = (x0 - t.x[i - 1][0]) / (t.x[i][0] - t.x[i - 1][0]);
      Vec4 r;
      for (int mu = 0; mu < 4; ++mu) r[mu] = (1 - a) * t.x[i - 1][mu] + a * t.x[i][mu];
      return r;
    }
  }
  throw DomainError("trajectory does not reach the requested x0");
}

// u at a point p: the x1 at I+ of the radial null geodesic through p (secant on the endpoint)
inline double retarded_time(const MetricFn& g, double m, const Vec4& p, GeodesicConfig cfg = {}) {
  // start the trajectory below p
  double s0 = 0.5 * p[0];
  if (!(s0 > 4.0)) throw DomainError("retarded_time: point too far from I+");
  cfg.s0 = s0;
  auto miss = [&](double u) {
    Vec4 t{0.0, u, p[2], p[3]};
    return trajectory_at_x0(integrate_radial_null_geodesic(g, m, t, cfg), p[0])[1] - p[1];
  };
  double a = p[1], fa = miss(a);
  if (fa == 0.0) return a;
  double b = a - fa, fb = miss(b);
  for (int it = 0; it < 30; ++it) {
    if (std::fabs(fb) < 1e-12 * (1.0 + std::fabs(b))) return b;
    if (fb == fa) break;
    double c = b - fb * (b - a) / (fb - fa);
    a = b, fa = fb;
    b = c, fb = miss(b);
  }
  if (std::fabs(fb) < 1e-10 * (1.0 + std::fabs(b))) return b;
  throw ConvergenceError("retarded_time: shooting did not converge");
}

// ---------------------------------------------------------------------------
// spheres

// r^4 = det([round metric]^-1 [g(V_a, V_b)]), V_a = f_a d1 + d_a orthogonal to the geodesic tangent
inline double area_radius(const MetricFn& g, const Vec4& x, const Vec4& tangent) {
  Mat4 G = values(g(seed(x)));
  double gt1 = 0;
  for (int mu = 0; mu < 4; ++mu) gt1 += G[mu][1] * tangent[mu];
  if (gt1 == 0.0) throw DegenerateSphere("area_radius: tangent orthogonal to d1");
  Vec4 V[2];
  for (int a = 0; a < 2; ++a) {
    double gta = 0;
    for (int mu = 0; mu < 4; ++mu) gta += G[mu][a + 2] * tangent[mu];
    V[a] = Vec4{};
    V[a][1] = -gta / gt1;
    V[a][a + 2] = 1.0;
  }
  Eigen::Matrix2d M, ghat;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) M(a, b) = detail::quadratic_form(G, V[a], V[b]);
  double sn = std::sin(x[2]);
  ghat << 1.0, 0.0, 0.0, sn * sn;
  double d = (ghat.inverse() * M).determinant();
  if (!(d > 0)) throw DegenerateSphere("area_radius: determinant not positive");
  return std::pow(d, 0.25);
}

struct NullForms {
  double trchi = 0, trchibar = 0;
  Eigen::Matrix2d chi_hat, chibar_hat;
  Vec4 L{}, Lbar{};
};

// coordinate sphere through x; L outgoing with g(L, d1) = 1, Lbar null normal with g(L, Lbar) = 2.
// chi(X, Y) = -g(nabla_X Y, L) holds for normals, so only pointwise normals are needed.
inline NullForms null_second_fundamental_forms(const MetricFn& g, const Vec4& x) {
  Geometry geo = geometry(g, x);
  const Mat4& G = geo.g;
  Eigen::Matrix2d gam;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) gam(a, b) = G[a + 2][b + 2];
  Eigen::Matrix2d gi = gam.inverse();
  // normal basis n_i = d_i + c^a d_a, i = 0, 1
  Vec4 n[2];
  for (int i = 0; i < 2; ++i) {
    Eigen::Vector2d gi_a(G[i][2], G[i][3]);
    Eigen::Vector2d c = -gi * gi_a;
    n[i] = Vec4{};
    n[i][i] = 1.0;
    n[i][2] = c(0);
    n[i][3] = c(1);
  }
  double N00 = detail::quadratic_form(G, n[0], n[0]), N01 = detail::quadratic_form(G, n[0], n[1]),
         N11 = detail::quadratic_form(G, n[1], n[1]);
  auto small_root = [](double A, double B, double C) {  // A z^2 + 2 B z + C = 0, root nearest 0
    if (A == 0.0) return -C / (2 * B);
    double disc = B * B - A * C;
    if (disc < 0) throw DegenerateSphere("null forms: normal plane is not Lorentzian");
    double q = -(B + std::copysign(std::sqrt(disc), B));
    return C / q;
  };
  double beta = small_root(N11, N01, N00);   // L ~ n0 + beta n1
  double alpha = small_root(N00, N01, N11);  // Lbar ~ alpha n0 + n1
  Vec4 L, Lb;
  for (int mu = 0; mu < 4; ++mu) {
    L[mu] = n[0][mu] + beta * n[1][mu];
    Lb[mu] = alpha * n[0][mu] + n[1][mu];
  }
  Vec4 e1{0, 1, 0, 0};
  double sL = detail::quadratic_form(G, L, e1);
  if (sL == 0.0) throw DegenerateSphere("null forms: L orthogonal to d1");
  for (auto& c : L) c /= sL;
  double gLLb = detail::quadratic_form(G, L, Lb);
  if (gLLb == 0.0) throw DegenerateSphere("null forms: g(L, Lbar) vanishes");
  for (auto& c : Lb) c *= 2.0 / gLLb;

  NullForms o;
  o.L = L;
  o.Lbar = Lb;
  Eigen::Matrix2d chi, chib;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double c1 = 0, c2 = 0;
      for (int d = 0; d < 4; ++d) {
        c1 -= geo.G1[d][a + 2][b + 2] * L[d];
        c2 -= geo.G1[d][a + 2][b + 2] * Lb[d];
      }
      chi(a, b) = c1;
      chib(a, b) = c2;
    }
  o.trchi = (gi * chi).trace();
  o.trchibar = (gi * chib).trace();
  o.chi_hat = chi - 0.5 * o.trchi * gam;
  o.chibar_hat = chib - 0.5 * o.trchibar * gam;
  return o;
}

// ---------------------------------------------------------------------------
// sphere quadrature: Gauss-Legendre in cos(theta) times the trapezoid rule in phi

struct SphereQuadrature {
  struct Node {
    double theta, phi, w;  // w includes d(cos theta) d(phi)
  };
  std::vector<Node> nodes;
  int n_theta = 0, n_phi = 0;

  explicit SphereQuadrature(int nt = 24, int np = 48) : n_theta(nt), n_phi(np) {
    if (nt < 2 || np < 4) throw std::invalid_argument("quadrature: too few nodes");
    auto z = boost::math::legendre_p_zeros<double>(nt);  // nonnegative zeros
    std::vector<double> xs;
    for (double x : z) {
      xs.push_back(x);
      if (x != 0.0) xs.push_back(-x);
    }
    for (double x : xs) {
      double dp = boost::math::legendre_p_prime(nt, x);
      double wt = 2.0 / ((1 - x * x) * dp * dp);
      for (int j = 0; j < np; ++j) nodes.push_back({std::acos(x), 2 * std::numbers::pi * j / np, wt * 2 * std::numbers::pi / np});
    }
  }

  // integral against the round measure
  double integrate(const std::function<double(double, double)>& f) const {
    double s = 0;
    for (auto& n : nodes) s += n.w * f(n.theta, n.phi);
    return s;
  }
};

// M_H = (r/2)(1 + (1/16 pi) int trchi trchibar dS) over the coordinate sphere {x1 = u, r = rr}
inline double hawking_mass(const MetricFn& g, double m, double u, double rr, const SphereQuadrature& q = SphereQuadrature()) {
  double I = q.integrate([&](double th, double ph) {
    Vec4 x = point_at(rr, u, th, ph, m);
    NullForms nf = null_second_fundamental_forms(g, x);
    Mat4 G = values(g(seed(x)));
    double detg = G[2][2] * G[3][3] - G[2][3] * G[3][2];
    return nf.trchi * nf.trchibar * std::sqrt(detg) / std::sin(th);  // dS = sqrt(det) dtheta dphi
  });
  return 0.5 * rr * (1.0 + I / (16 * std::numbers::pi));
}

// ---------------------------------------------------------------------------
// Bondi mass from data at I+

// symmetric contravariant tensor on the unit sphere, components (tt, tp, pp), as jets in (theta, phi)
using SphereTensorUp = std::function<std::array<Jet, 3>(const Jet& th, const Jet& ph)>;

// nabla_a nabla_b h^{ab} on the unit sphere
inline double double_divergence(const SphereTensorUp& h, double th, double ph) {
  Jet T = Jet::var(th, 0), P = Jet::var(ph, 1);
  auto c = h(T, P);
  const Jet &a = c[0], &b = c[1], &d = c[2];  // h^tt, h^tp, h^pp
  double s = std::sin(th), co = std::cos(th), ct = co / s;
  // V^t = a_t + b_p + cot a - sin cos d,   V^p = b_t + d_p + 3 cot b
  double Vt = a.d[0] + b.d[1] + ct * a.v - s * co * d.v;
  double dVt = a.dd[0][0] + b.dd[1][0] - std::cos(2 * th) * d.v - s * co * d.d[0] - a.v / (s * s) + ct * a.d[0];
  double dVp = b.dd[0][1] + d.dd[1][1] + 3 * ct * b.d[1];
  return dVt + ct * Vt + dVp;
}

struct BondiData {
  std::function<double(double, double)> h11_log;  // h11 = c log rhoI + ..., c(theta, phi)
  SphereTensorUp hab_up;                          // barred h^{ab} at I+, may be empty
};

struct BondiMass {
  double M_B = 0;
  double divergence_integral = 0;
  std::vector<double> M_A;  // at the quadrature nodes
};

// r d0 h11 at I+ picks out -c/2 of the log coefficient
inline double r_d0_h11_from_log(double c) { return -0.5 * c; }

inline BondiMass bondi_mass(const BondiData& d, double m, const SphereQuadrature& q = SphereQuadrature()) {
  BondiMass o;
  double ma = 0, dv = 0;
  for (auto& n : q.nodes) {
    double mu = d.h11_log ? r_d0_h11_from_log(d.h11_log(n.theta, n.phi)) : 0.0;
    double div = d.hab_up ? double_divergence(d.hab_up, n.theta, n.phi) : 0.0;
    double MA = m + mu - 0.25 * div;
    o.M_A.push_back(MA);
    ma += n.w * MA;
    dv += n.w * div;
  }
  o.M_B = ma / (4 * std::numbers::pi);
  o.divergence_integral = dv;
  return o;
}

// ---------------------------------------------------------------------------
// news and mass loss

// N_ab(u) = f(u) T_ab with T the trace-free Hessian of a potential Phi on the unit sphere
struct NewsProfile {
  std::function<double(double)> f;
  std::function<Jet(const Jet&, const Jet&)> Phi;
};

inline Eigen::Matrix2d tracefree_hessian(const std::function<Jet(const Jet&, const Jet&)>& Phi, double th, double ph) {
  Jet p = Phi(Jet::var(th, 0), Jet::var(ph, 1));
  double s = std::sin(th), co = std::cos(th);
  Eigen::Matrix2d H;
  H(0, 0) = p.dd[0][0];
  H(0, 1) = H(1, 0) = p.dd[0][1] - co / s * p.d[1];
  H(1, 1) = p.dd[1][1] + s * co * p.d[0];
  double lap = H(0, 0) + H(1, 1) / (s * s);
  H(0, 0) -= 0.5 * lap;
  H(1, 1) -= 0.5 * s * s * lap;
  return H;
}

inline double round_norm2(const Eigen::Matrix2d& T, double th) {
  double s2 = std::sin(th) * std::sin(th);
  return T(0, 0) * T(0, 0) + 2 * T(0, 1) * T(0, 1) / s2 + T(1, 1) * T(1, 1) / (s2 * s2);
}
inline double round_trace(const Eigen::Matrix2d& T, double th) {
  double s2 = std::sin(th) * std::sin(th);
  return T(0, 0) + T(1, 1) / s2;
}

// du (r d0 h11) = -kappa |N|^2 at leading order; kappa is the ratio of the two residual coefficients
inline constexpr double kResidualFirst = 2.0, kResidualSecond = 0.25;
inline constexpr double transport_constant() { return kResidualSecond / kResidualFirst; }

struct BondiReport {
  std::vector<double> u, M_B, E, budget_residual;
  std::vector<std::vector<double>> mass_aspect;  // [u index][node], without the divergence term
};

inline double news_norm_integral(const NewsProfile& N, const SphereQuadrature& q) {
  return q.integrate([&](double th, double ph) { return round_norm2(tracefree_hessian(N.Phi, th, ph), th); });
}

// E(u) = (1/32 pi) int |N|^2
inline double radiated_power(const NewsProfile& N, double u, const SphereQuadrature& q) {
  double f = N.f(u);
  return f * f * news_norm_integral(N, q) / (32 * std::numbers::pi);
}

inline BondiReport evolve_mass_aspect(const NewsProfile& N, double m, const std::vector<double>& ugrid,
                                      double kappa = transport_constant(), const SphereQuadrature& q = SphereQuadrature()) {
  if (ugrid.size() < 3) throw std::invalid_argument("mass aspect: u grid too short");
  double fe = std::max(std::fabs(N.f(ugrid.front())), std::fabs(N.f(ugrid.back())));
  if (fe > 1e-12) throw std::invalid_argument("mass aspect: news not supported inside the u grid");

  const size_t n = q.nodes.size();
  std::vector<double> T2(n);
  double I = 0;
  for (size_t i = 0; i < n; ++i) {
    T2[i] = round_norm2(tracefree_hessian(N.Phi, q.nodes[i].theta, q.nodes[i].phi), q.nodes[i].theta);
    I += q.nodes[i].w * T2[i];
  }

  // every node carries the same u profile, so one scalar ODE for F = int f^2 suffices
  using State = std::array<double, 1>;
  State F{0.0};
  auto rhs = [&](const State&, State& d, double u) { d[0] = N.f(u) * N.f(u); };
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_dense_output(1e-14, 1e-14, ode::runge_kutta_dopri5<State>());

  BondiReport rep;
  double cumE = 0;
  auto f2 = [&](double u) { return N.f(u) * N.f(u); };
  for (size_t k = 0; k < ugrid.size(); ++k) {
    if (k > 0) {
      ode::integrate_adaptive(stepper, rhs, F, ugrid[k - 1], ugrid[k], (ugrid[k] - ugrid[k - 1]) / 4);
      cumE += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f2, ugrid[k - 1], ugrid[k], 10, 1e-15) * I /
              (32 * std::numbers::pi);
    }
    std::vector<double> mu(n);
    double mb = 0;
    for (size_t i = 0; i < n; ++i) {
      mu[i] = -kappa * F[0] * T2[i];
      mb += q.nodes[i].w * mu[i];
    }
    mb = m + mb / (4 * std::numbers::pi);
    rep.u.push_back(ugrid[k]);
    rep.M_B.push_back(mb);
    rep.E.push_back(f2(ugrid[k]) * I / (32 * std::numbers::pi));
    rep.budget_residual.push_back(mb - rep.M_B.front() + cumE);
    rep.mass_aspect.push_back(std::move(mu));
  }
  return rep;
}

// One Gaussian mode with the Phi = cos^2 theta potential, kappa = 1 run against the hand integral
//   int E du = A^2 sigma sqrt(pi) / (32 pi) * int |T|^2,  int |T|^2 = int sin^4(1 + 1) = 2 * 32 pi / 15
inline double calibrate_transport_constant() {
  const double A = 0.3, sig = 0.7;
  NewsProfile N{[=](double u) { return A * std::exp(-u * u / (2 * sig * sig)); },
                [](const Jet& th, const Jet&) { return cos(th) * cos(th); }};
  std::vector<double> ug;
  for (int k = 0; k <= 400; ++k) ug.push_back(-12.0 + 24.0 * k / 400);
  auto rep = evolve_mass_aspect(N, 0.0, ug, 1.0);
  double hand = A * A * sig * std::sqrt(std::numbers::pi) / (32 * std::numbers::pi) * (64 * std::numbers::pi / 15);
  return hand / (rep.M_B.front() - rep.M_B.back());
}

// ---------------------------------------------------------------------------
// static solutions on i+

template <class T>
T scattering_u(int l, const T& R) {
  double Rv = value(R);
  if (!(Rv > 0 && Rv < 1)) throw DomainError("scattering_u: R must lie in (0, 1)");
  using std::log;
  T Lg = log((1.0 - R) / (1.0 + R));
  switch (l) {
    case 0: return Lg / R;
    case 1: return Lg / (R * R) + 2.0 / R;
    case 2: return (3.0 - R * R) / (2.0 * R * R * R) * Lg + 3.0 / (R * R);
    default: throw std::invalid_argument("scattering_u: l must be 0, 1 or 2");
  }
}
inline double scattering_u(int l, double R) { return scattering_u<double>(l, R); }

inline bool pole_proximity(double R) { return R > 1 - 1e-6; }

// -2 L(0) per mode with D_R = -i d_R and the nonnegative sphere Laplacian:
//   -R^-2 d_R R^2 (1 - R^2) d_R + l(l+1) R^-2 + 2, derivatives from jets
inline double scattering_residual(int l, double R) {
  Jet u = scattering_u(l, Jet::var(R, 0));
  double du = u.d[0], d2u = u.dd[0][0];
  double flux_d = (2 * R - 4 * R * R * R) * du + R * R * (1 - R * R) * d2u;
  return -flux_d / (R * R) + l * (l + 1.0) / (R * R) * u.v + 2 * u.v;
}

inline double scattering_combination(double R) {
  return 0.25 * scattering_u(0, R) - 0.5 * scattering_u(1, R) + 0.25 * scattering_u(2, R);
}

// limit at R = 1: fit c0 + c1 d log d + c2 d + c3 d^2 log d + c4 d^2 on d = 1 - R
inline double scattering_limit(double d0 = 1e-3) {
  Eigen::Matrix<double, 5, 5> A;
  Eigen::Matrix<double, 5, 1> b;
  for (int i = 0; i < 5; ++i) {
    double d = d0 / std::pow(2.0, i), ld = std::log(d);
    A.row(i) << 1.0, d * ld, d, d * d * ld, d * d;
    b(i) = scattering_combination(1 - d);
  }
  return A.fullPivLu().solve(b)(0);
}

}  // namespace scri
