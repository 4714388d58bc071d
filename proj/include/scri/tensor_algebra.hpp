#pragma once
// Metric, connection and curvature in the double null frame (q, s, theta, phi),
// plus the gauge 1-form, K-currents and the de Sitter conjugation.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scri/compactification.hpp"
#include "scri/jet.hpp"

namespace scri {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<Vec4, 4>;
using JetVec4 = std::array<Jet, 4>;
using JetMat4 = std::array<JetVec4, 4>;
using T3 = std::array<std::array<std::array<double, 4>, 4>, 4>;
using T4 = std::array<T3, 4>;

using MetricFn = std::function<JetMat4(const JetVec4&)>;
using MetricValueFn = std::function<Mat4(const Vec4&)>;

struct SingularMetric : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline JetVec4 seed(const Vec4& x) {
  return {Jet::var(x[0], 0), Jet::var(x[1], 1), Jet::var(x[2], 2), Jet::var(x[3], 3)};
}

inline Mat4 values(const JetMat4& g) {
  Mat4 m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = g[i][j].v;
  return m;
}

inline Mat4 inverse(const Mat4& g) {
  // symmetric equilibration first, the sphere block is r^2 larger than the rest far out
  Eigen::Matrix4d M;
  Eigen::Vector4d S;
  for (int i = 0; i < 4; ++i) {
    double mx = 0.0;
    for (int j = 0; j < 4; ++j) mx = std::max(mx, std::fabs(g[i][j]));
    if (mx == 0.0) throw SingularMetric("metric is singular at this point");
    S(i) = 1.0 / std::sqrt(mx);
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) M(i, j) = S(i) * g[i][j] * S(j);
  Eigen::FullPivLU<Eigen::Matrix4d> lu(M);
  if (!lu.isInvertible()) throw SingularMetric("metric is singular at this point");
  Eigen::Matrix4d I = S.asDiagonal() * lu.inverse() * S.asDiagonal();
  Mat4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = I(i, j);
  return out;
}

inline double det(const Mat4& g) {
  Eigen::Matrix4d M;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) M(i, j) = g[i][j];
  return M.determinant();
}

// Everything needed downstream, evaluated at one point.
struct Geometry {
  Mat4 g{}, gi{};
  T3 dg{};     // dg[a][m][n] = d_a g_mn
  T4 ddg{};    // ddg[a][b][m][n]
  T3 dgi{};    // dgi[a][k][l] = d_a g^kl
  T3 G1{};     // first kind, G1[l][m][n] = Gamma_{l m n}
  T3 G{};      // second kind, G[k][m][n] = Gamma^k_{m n}
  T4 dG{};     // dG[a][k][m][n] = d_a Gamma^k_{mn}
  T4 R{};      // R[r][s][m][n] = R^r_{s m n}
  Mat4 Ric{};
};

// R^r_{smn} = d_m G^r_{ns} - d_n G^r_{ms} + G^r_{ml} G^l_{ns} - G^r_{nl} G^l_{ms}
inline void finish_geometry(Geometry& o) {
  for (int a = 0; a < 4; ++a)
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) {
        double s = 0;
        for (int m = 0; m < 4; ++m)
          for (int n = 0; n < 4; ++n) s -= o.gi[k][m] * o.dg[a][m][n] * o.gi[n][l];
        o.dgi[a][k][l] = s;
      }
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) o.G1[l][m][n] = 0.5 * (o.dg[m][l][n] + o.dg[n][l][m] - o.dg[l][m][n]);
  for (int k = 0; k < 4; ++k)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) {
        double s = 0;
        for (int l = 0; l < 4; ++l) s += o.gi[k][l] * o.G1[l][m][n];
        o.G[k][m][n] = s;
      }
  for (int a = 0; a < 4; ++a)
    for (int k = 0; k < 4; ++k)
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
          double s = 0;
          for (int l = 0; l < 4; ++l) {
            double d1 = 0.5 * (o.ddg[a][m][l][n] + o.ddg[a][n][l][m] - o.ddg[a][l][m][n]);
            s += o.dgi[a][k][l] * o.G1[l][m][n] + o.gi[k][l] * d1;
          }
          o.dG[a][k][m][n] = s;
        }
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s)
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
          double v = o.dG[m][r][n][s] - o.dG[n][r][m][s];
          for (int l = 0; l < 4; ++l) v += o.G[r][m][l] * o.G[l][n][s] - o.G[r][n][l] * o.G[l][m][s];
          o.R[r][s][m][n] = v;
        }
  for (int s = 0; s < 4; ++s)
    for (int n = 0; n < 4; ++n) {
      double v = 0;
      for (int r = 0; r < 4; ++r) v += o.R[r][s][r][n];
      o.Ric[s][n] = v;
    }
}

inline Geometry geometry(const JetMat4& gj) {
  Geometry o;
  o.g = values(gj);
  o.gi = inverse(o.g);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      for (int a = 0; a < 4; ++a) {
        o.dg[a][m][n] = gj[m][n].d[a];
        for (int b = 0; b < 4; ++b) o.ddg[a][b][m][n] = gj[m][n].dd[a][b];
      }
  finish_geometry(o);
  return o;
}

inline Geometry geometry(const MetricFn& f, const Vec4& x) { return geometry(f(seed(x))); }

// 4th order central differences for sampled metrics
inline Geometry geometry_fd(const MetricValueFn& f, const Vec4& x, double h) {
  Geometry o;
  o.g = f(x);
  o.gi = inverse(o.g);
  auto at = [&](int a, double ha, int b, double hb) {
    Vec4 y = x;
    y[a] += ha;
    y[b] += hb;
    return f(y);
  };
  const double w[4] = {1.0, -8.0, 8.0, -1.0};
  const double off[4] = {-2.0, -1.0, 1.0, 2.0};
  for (int a = 0; a < 4; ++a) {
    Mat4 fp[4];
    for (int i = 0; i < 4; ++i) fp[i] = at(a, off[i] * h, a, 0.0);
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) {
        double s = 0;
        for (int i = 0; i < 4; ++i) s += w[i] * fp[i][m][n];
        o.dg[a][m][n] = s / (12.0 * h);
        o.ddg[a][a][m][n] = (-fp[0][m][n] + 16.0 * fp[1][m][n] - 30.0 * o.g[m][n] + 16.0 * fp[2][m][n] - fp[3][m][n]) /
                            (12.0 * h * h);
      }
  }
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      Mat4 acc{};
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          Mat4 v = at(a, off[i] * h, b, off[j] * h);
          for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) acc[m][n] += w[i] * w[j] * v[m][n];
        }
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) o.ddg[a][b][m][n] = o.ddg[b][a][m][n] = acc[m][n] / (144.0 * h * h);
    }
  finish_geometry(o);
  return o;
}

// ---------------------------------------------------------------------------
// Schwarzschild in (q, s, theta, phi)

// r as a jet through r_* = (q - s)/2, using dr/dr_* = 1 - 2m/r
inline Jet radius_jet(const Jet& q, const Jet& s, double m) {
  Jet rs = 0.5 * (q - s);
  double r = inverse_tortoise(rs.v, m);
  double F = 1.0 - 2.0 * m / r;
  return apply(rs, r, F, 2.0 * m / (r * r) * F);
}

inline Vec4 point_at(double r, double s, double theta, double phi, double m) {
  double rs = tortoise(r, m);
  return {s + 2.0 * rs, s, theta, phi};
}

inline MetricFn schwarzschild_metric(double m) {
  return [m](const JetVec4& x) {
    Jet r = radius_jet(x[0], x[1], m);
    Jet sn = sin(x[2]);
    JetMat4 g{};
    g[0][1] = g[1][0] = 0.5 - m / r;
    g[2][2] = -(r * r);
    g[3][3] = -(r * r) * sn * sn;
    return g;
  };
}

inline MetricValueFn schwarzschild_metric_values(double m) {
  return [m](const Vec4& x) {
    double r = inverse_tortoise(0.5 * (x[0] - x[1]), m);
    double sn = std::sin(x[2]);
    Mat4 g{};
    g[0][1] = g[1][0] = 0.5 - m / r;
    g[2][2] = -r * r;
    g[3][3] = -r * r * sn * sn;
    return g;
  };
}

// closed forms from the Schwarzschild tables
struct SchwarzschildExact {
  T3 G{}, G1{};
  T4 R{};
  Mat4 Ric{};
};

inline SchwarzschildExact schwarzschild_exact(double r, double theta, double m) {
  if (!(r > 2.0 * m)) throw DomainError("schwarzschild_exact: r <= 2m");
  SchwarzschildExact e;
  double F = 1.0 - 2.0 * m / r;
  double sn = std::sin(theta), cs = std::cos(theta);
  double gs[4][4] = {};
  gs[2][2] = 1.0;
  gs[3][3] = sn * sn;
  // sphere Christoffels
  double Gs[4][4][4] = {};
  Gs[2][3][3] = -sn * cs;
  Gs[3][2][3] = Gs[3][3][2] = cs / sn;
  double Gs1[4][4][4] = {};  // Gamma-slash_{c a b}
  Gs1[2][3][3] = -sn * cs;
  Gs1[3][2][3] = Gs1[3][3][2] = sn * cs;

  e.G[0][0][0] = m / (r * r);
  e.G[1][1][1] = -m / (r * r);
  e.G1[1][0][0] = 0.5 * m * (r - 2.0 * m) / (r * r * r);
  e.G1[0][1][1] = -0.5 * m * (r - 2.0 * m) / (r * r * r);
  for (int a = 2; a < 4; ++a)
    for (int b = 2; b < 4; ++b) {
      e.G[0][a][b] = -r * gs[a][b];
      e.G[1][a][b] = r * gs[a][b];
      e.G1[0][a][b] = 0.5 * (r - 2.0 * m) * gs[a][b];
      e.G1[1][a][b] = -0.5 * (r - 2.0 * m) * gs[a][b];
      for (int c = 2; c < 4; ++c) {
        e.G[c][a][b] = Gs[c][a][b];
        e.G1[c][a][b] = -r * r * Gs1[c][a][b];
      }
    }
  for (int b = 2; b < 4; ++b)
    for (int c = 2; c < 4; ++c) {
      double dl = (b == c) ? 1.0 : 0.0;
      e.G[c][0][b] = e.G[c][b][0] = 0.5 / r * F * dl;
      e.G[c][1][b] = e.G[c][b][1] = -0.5 / r * F * dl;
      e.G1[c][0][b] = e.G1[c][b][0] = -0.5 * (r - 2.0 * m) * gs[b][c];
      e.G1[c][1][b] = e.G1[c][b][1] = 0.5 * (r - 2.0 * m) * gs[b][c];
    }

  auto set = [&](int a, int b, int c, int d, double v) {
    e.R[a][b][c][d] = v;
    e.R[a][b][d][c] = -v;
  };
  double k3 = m / (r * r * r) * F;
  set(0, 0, 0, 1, -k3);
  set(1, 1, 0, 1, k3);
  for (int b = 2; b < 4; ++b)
    for (int d = 2; d < 4; ++d) {
      set(0, b, 0, d, -m / r * gs[b][d]);
      set(1, b, 1, d, -m / r * gs[b][d]);
      double dl = (b == d) ? 1.0 : 0.0;
      set(b, 0, 1, d, -0.5 * k3 * dl);
      set(b, 1, 0, d, -0.5 * k3 * dl);
    }
  for (int a = 2; a < 4; ++a)
    for (int b = 2; b < 4; ++b)
      for (int c = 2; c < 4; ++c)
        for (int d = 2; d < 4; ++d) {
          double dac = (a == c) ? 1.0 : 0.0, dad = (a == d) ? 1.0 : 0.0;
          e.R[a][b][c][d] = 2.0 * m / r * (dac * gs[b][d] - dad * gs[b][c]);
        }
  return e;
}

// ---------------------------------------------------------------------------
// Perturbations g = g_m + r^{-1} h in barred components.

using ScalarField = std::function<Jet(const Jet& rhoI, const Jet& s, const Jet& th, const Jet& ph)>;

struct PerturbationField {
  // h00, h01, h11, h0b (theta, phi), h1b (theta, phi), hab (thth, thph, phph), all barred
  ScalarField h00, h01, h11, h0b[2], h1b[2], hab[3];
  double b0 = 0.6, bI = 0.3, bIp = 0.4, bplus = -0.1;
  std::string name;

  bool weights_admissible() const { return -0.5 < bplus && bplus < 0.0 && 0.0 < bI && bI < bIp && bIp < std::min(0.5, b0); }
};

inline Jet eval_or_zero(const ScalarField& f, const Jet& rI, const Jet& s, const Jet& th, const Jet& ph) {
  return f ? f(rI, s, th, ph) : Jet(0.0);
}

// all ten barred components as jets in (q, s, theta, phi)
struct BarredH {
  Jet h00, h01, h11, h0b[2], h1b[2], hab[2][2];
  Jet r;
};

inline BarredH barred_components(const PerturbationField& h, const JetVec4& x, double m) {
  BarredH o;
  o.r = radius_jet(x[0], x[1], m);
  Jet rI = recip(o.r);
  o.h00 = eval_or_zero(h.h00, rI, x[1], x[2], x[3]);
  o.h01 = eval_or_zero(h.h01, rI, x[1], x[2], x[3]);
  o.h11 = eval_or_zero(h.h11, rI, x[1], x[2], x[3]);
  for (int b = 0; b < 2; ++b) {
    o.h0b[b] = eval_or_zero(h.h0b[b], rI, x[1], x[2], x[3]);
    o.h1b[b] = eval_or_zero(h.h1b[b], rI, x[1], x[2], x[3]);
  }
  o.hab[0][0] = eval_or_zero(h.hab[0], rI, x[1], x[2], x[3]);
  o.hab[0][1] = o.hab[1][0] = eval_or_zero(h.hab[1], rI, x[1], x[2], x[3]);
  o.hab[1][1] = eval_or_zero(h.hab[2], rI, x[1], x[2], x[3]);
  return o;
}

inline MetricFn perturbed_metric(double m, PerturbationField h, double scale = 1.0) {
  return [m, h, scale](const JetVec4& x) {
    BarredH b = barred_components(h, x, m);
    Jet ir = recip(b.r);
    Jet sn = sin(x[2]);
    Jet gs[2][2] = {{Jet(1.0), Jet(0.0)}, {Jet(0.0), sn * sn}};
    JetMat4 g{};
    g[0][0] = scale * ir * b.h00;
    g[0][1] = g[1][0] = 0.5 - m * ir + scale * ir * b.h01;
    g[1][1] = scale * ir * b.h11;
    for (int a = 0; a < 2; ++a) {
      g[0][a + 2] = g[a + 2][0] = scale * b.h0b[a];
      g[1][a + 2] = g[a + 2][1] = scale * b.h1b[a];
      for (int c = 0; c < 2; ++c) g[a + 2][c + 2] = -(b.r * b.r) * gs[a][c] + scale * b.r * b.hab[a][c];
    }
    return g;
  };
}

// ---------------------------------------------------------------------------

// Gamma^k_{mn}, all 40 independent values live in G
// leading terms of the (1,1) component of the gauged Einstein operator near I+, rho = 1/r:
//   -2 rho^-2 d1 d0 h11  and  -1/4 rho^-1 d1 h^{de} d1 h_{de}, sphere indices raised with the round metric
struct Residual11 {
  double first = 0.0, second = 0.0;
  double value() const { return first + second; }
};

inline Residual11 gauged_residual_11(const PerturbationField& h, const Vec4& p, double m) {
  BarredH b = barred_components(h, seed(p), m);
  double r = b.r.v, s2 = std::sin(p[2]) * std::sin(p[2]);
  double gi[2] = {1.0, 1.0 / s2};
  Residual11 o;
  o.first = -2.0 * r * r * b.h11.dd[1][0];
  double q = 0.0;
  for (int d = 0; d < 2; ++d)
    for (int e = 0; e < 2; ++e) q += gi[d] * gi[e] * b.hab[d][e].d[1] * b.hab[d][e].d[1];
  o.second = -0.25 * r * q;
  return o;
}

inline T3 christoffel(const MetricFn& g, const Vec4& p) { return geometry(g, p).G; }

struct Curvature {
  T4 R;
  Mat4 Ric;
};
inline Curvature riemann_ricci(const MetricFn& g, const Vec4& p) {
  Geometry o = geometry(g, p);
  return {o.R, o.Ric};
}

// Upsilon(g; gm)_mu = g_{mu nu} g^{kl} (Gamma(g)^nu_kl - Gamma(gm)^nu_kl), coordinate components
inline Vec4 gauge_oneform(const Geometry& g, const Geometry& gm) {
  Vec4 up{};
  for (int n = 0; n < 4; ++n) {
    double s = 0;
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) s += g.gi[k][l] * (g.G[n][k][l] - gm.G[n][k][l]);
    up[n] = s;
  }
  Vec4 low{};
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) low[m] += g.g[m][n] * up[n];
  return low;
}

inline Vec4 gauge_oneform(const MetricFn& g, const MetricFn& gm, const Vec4& p) {
  return gauge_oneform(geometry(g, p), geometry(gm, p));
}

// barred components: spherical slots scaled by 1/r
inline Vec4 to_barred(Vec4 w, double r) {
  w[2] /= r;
  w[3] /= r;
  return w;
}

inline double trace(const Mat4& gi, const Mat4& T) {
  double s = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s += gi[i][j] * T[i][j];
  return s;
}

// G_g T = T - (1/2) g tr_g T
inline Mat4 trace_reversal(const Mat4& g, const Mat4& T) {
  Mat4 gi = inverse(g);
  double tr = trace(gi, T);
  Mat4 o = T;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) o[i][j] -= 0.5 * g[i][j] * tr;
  return o;
}

// (delta^* w)_{mn} = (1/2)(d_m w_n + d_n w_m) - Gamma^l_{mn} w_l
inline Mat4 symmetric_gradient(const Geometry& gm, const JetVec4& w) {
  Mat4 o{};
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      double v = 0.5 * (w[n].d[m] + w[m].d[n]);
      for (int l = 0; l < 4; ++l) v -= gm.G[l][m][n] * w[l].v;
      o[m][n] = v;
    }
  return o;
}

// -2 g1 (d rho_t / rho_t) (x)_s w + g2 (iota_{rho_t^{-1} grad rho_t} w) gm, given rho_t as a jet
inline Mat4 modified_gradient_difference(const Geometry& gm, double g1, double g2, const Jet& rho_t, const Vec4& w) {
  Vec4 dl{};
  for (int a = 0; a < 4; ++a) dl[a] = rho_t.d[a] / rho_t.v;
  Vec4 grad{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) grad[a] += gm.gi[a][b] * dl[b];
  double iota = 0;
  for (int a = 0; a < 4; ++a) iota += grad[a] * w[a];
  Mat4 o{};
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) o[m][n] = -g1 * (dl[m] * w[n] + dl[n] * w[m]) + g2 * iota * gm.g[m][n];
  return o;
}

inline Mat4 modified_gradient(const Geometry& gm, double g1, double g2, const Jet& rho_t, const JetVec4& w) {
  Mat4 a = symmetric_gradient(gm, w);
  Vec4 wv{w[0].v, w[1].v, w[2].v, w[3].v};
  Mat4 b = modified_gradient_difference(gm, g1, g2, rho_t, wv);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a[i][j] += b[i][j];
  return a;
}

// rescaled splitting of a symmetric 2-tensor: (00, 01, 0a, 11, 1a, ab) with r^{-s} weights
inline Mat4 to_barred(Mat4 T, double r) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      int s = (i >= 2) + (j >= 2);
      T[i][j] /= std::pow(r, s);
    }
  return T;
}

// ---------------------------------------------------------------------------
// K-current K_W = -1/2 (L_W G + (div W) G), G the inverse metric.

struct KCurrent {
  Mat4 K{};
  double div = 0;
};

inline KCurrent k_current(const Geometry& g, const JetVec4& W) {
  KCurrent o;
  double div = 0;
  for (int i = 0; i < 4; ++i) {
    div += W[i].d[i];
    double dlog = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) dlog += 0.5 * g.gi[a][b] * g.dg[i][a][b];
    div += W[i].v * dlog;
  }
  o.div = div;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double L = 0;
      for (int k = 0; k < 4; ++k) L += W[k].v * g.dgi[k][i][j] - g.gi[k][j] * W[i].d[k] - g.gi[i][k] * W[j].d[k];
      o.K[i][j] = -0.5 * (L + div * g.gi[i][j]);
    }
  return o;
}

// T(X, Y) = X (x)_s Y - 1/2 g(X, Y) G for vectors X, Y
inline Mat4 energy_momentum(const Geometry& g, const Vec4& X, const Vec4& Y) {
  double gxy = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) gxy += g.g[a][b] * X[a] * Y[b];
  Mat4 o{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) o[i][j] = 0.5 * (X[i] * Y[j] + X[j] * Y[i]) - 0.5 * gxy * g.gi[i][j];
  return o;
}

// static de Sitter in (T = log rho_+, R, theta, phi)
inline MetricFn static_de_sitter() {
  return [](const JetVec4& x) {
    const Jet& R = x[1];
    Jet sn = sin(x[2]);
    JetMat4 g{};
    g[0][0] = 1.0 - R * R;
    g[0][1] = g[1][0] = -1.0 * R;
    g[1][1] = Jet(-1.0);
    g[2][2] = -(R * R);
    g[3][3] = -(R * R) * sn * sn;
    return g;
  };
}

// W = rho_I^{-2 aI} rho_+^{-2 a+} V0 with a+ = -3/2, V0 = -(1+R^2) rho_+ d_rho_+ - (1-cV)(1-R^2) R d_R
inline JetVec4 desitter_multiplier(const JetVec4& x, double aI, double cV) {
  const Jet& T = x[0];
  const Jet& R = x[1];
  Jet rhoI = 1.0 - R * R;
  Jet w = pow(rhoI, -2.0 * aI) * exp(3.0 * T);
  return {w * (-(1.0 + R * R)), w * (-(1.0 - cV) * rhoI * R), Jet(0.0), Jet(0.0)};
}

// normalised pieces of rho_I^{2aI+1} rho_+^{2a+} K_W = K1 + Kslash Gslash
struct DeSitterKSummary {
  double trK1, detK1, Kslash, neg_div;
};

inline DeSitterKSummary desitter_k_summary(double T, double R, double theta, double aI, double cV) {
  Vec4 p{T, R, theta, 0.3};
  Geometry g = geometry(static_de_sitter(), p);
  KCurrent kc = k_current(g, desitter_multiplier(seed(p), aI, cV));
  double rhoI = 1.0 - R * R;
  double w = std::pow(rhoI, 2.0 * aI + 1.0) * std::exp(-3.0 * T);
  // frame (rho_+ d_rho_+, rho_I d_R)
  double k00 = w * kc.K[0][0], k01 = w * kc.K[0][1] / rhoI, k11 = w * kc.K[1][1] / (rhoI * rhoI);
  DeSitterKSummary s;
  s.trK1 = k00 + k11;
  s.detK1 = k00 * k11 - k01 * k01;
  // Gslash read as rho_I |Z|^{-2} times the inverse round metric
  s.Kslash = w * kc.K[2][2] * R * R / rhoI;
  s.neg_div = -std::pow(rhoI, 2.0 * aI) * std::exp(-3.0 * T) * kc.div;
  return s;
}

// ---------------------------------------------------------------------------
// scalar wave operator  box_g u = -|g|^{-1/2} d_m (|g|^{1/2} g^{mn} d_n u)

inline double box(const Geometry& g, const Jet& u) {
  double s = 0;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      double hess = u.dd[m][n];
      for (int l = 0; l < 4; ++l) hess -= g.G[l][m][n] * u.d[l];
      s += g.gi[m][n] * hess;
    }
  return -s;
}

// Minkowski eta in (t, x, y, z) and g_dS = t^{-2} eta
inline MetricFn minkowski_cartesian() {
  return [](const JetVec4&) {
    JetMat4 g{};
    g[0][0] = Jet(1.0);
    for (int i = 1; i < 4; ++i) g[i][i] = Jet(-1.0);
    return g;
  };
}
inline MetricFn de_sitter_cartesian() {
  return [](const JetVec4& x) {
    Jet it2 = recip(x[0] * x[0]);
    JetMat4 g{};
    g[0][0] = it2;
    for (int i = 1; i < 4; ++i) g[i][i] = -1.0 * it2;
    return g;
  };
}

// |t^3 box_eta(t^{-1} phi) - (box_dS - 2) phi| at p
template <class Phi>
double desitter_conjugation_residual(const Phi& phi, const Vec4& p) {
  JetVec4 x = seed(p);
  Jet u = phi(x);
  Jet v = u / x[0];
  // flat box via the Hessian directly
  double flat = -(v.dd[0][0] - v.dd[1][1] - v.dd[2][2] - v.dd[3][3]);
  double lhs = p[0] * p[0] * p[0] * flat;
  Geometry gds = geometry(de_sitter_cartesian(), p);
  double rhs = box(gds, u) - 2.0 * u.v;
  return std::fabs(lhs - rhs);
}

// roots of -(s - 3/2)^2 + 1/4
inline std::array<double, 2> indicial_roots_dS() {
  double a = -1.0, b = 3.0, c = -2.0;
  double disc = std::sqrt(b * b - 4 * a * c);
  double r1 = (-b + disc) / (2 * a), r2 = (-b - disc) / (2 * a);
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}
inline double indicial_polynomial(double s) { return -(s - 1.5) * (s - 1.5) + 0.25; }

}  // namespace scri
