#pragma once
// Leading-term lines for perturbed Schwarzschild near null infinity.
// Each line compares a computed component with its stated leading expression and
// fits the decay of the difference in rho_I = 1/r at fixed s and angles.

#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "scri/tensor_algebra.hpp"

namespace scri {

struct Sphere {
  double g[2][2]{}, gi[2][2]{}, G[2][2][2]{};  // G[c][a][b] = Gamma-slash^c_ab
  explicit Sphere(double th) {
    double s = std::sin(th), c = std::cos(th);
    g[0][0] = 1.0;
    g[1][1] = s * s;
    gi[0][0] = 1.0;
    gi[1][1] = 1.0 / (s * s);
    G[0][1][1] = -s * c;
    G[1][0][1] = G[1][1][0] = c / s;
  }
};

// inputs for one evaluation
struct LineContext {
  Geometry g, gm;
  BarredH h;
  Sphere sp{1.0};
  double m = 0, r = 0;

  // derivative slots: 0 = d_q, 1 = d_s, 2 + a = d_a
  // covariant derivative on S^2 of h_{1 b}, optionally differentiated once more in direction e
  double nab_h1(int a, int b, int e = -1) const {
    auto D = [&](const Jet& j, int i) { return e < 0 ? j.d[i] : j.dd[e][i]; };
    auto V = [&](const Jet& j) { return e < 0 ? j.v : j.d[e]; };
    double v = D(h.h1b[b], 2 + a);
    for (int c = 0; c < 2; ++c) v -= sp.G[c][a][b] * V(h.h1b[c]);
    return v;
  }
  // nabla-slash_a h_{bc}
  double nab_hab(int a, int b, int c, int e = -1) const {
    auto D = [&](const Jet& j, int i) { return e < 0 ? j.d[i] : j.dd[e][i]; };
    auto V = [&](const Jet& j) { return e < 0 ? j.v : j.d[e]; };
    double v = D(h.hab[b][c], 2 + a);
    for (int f = 0; f < 2; ++f) v -= sp.G[f][a][b] * V(h.hab[f][c]) + sp.G[f][a][c] * V(h.hab[b][f]);
    return v;
  }
  double hup(int c, int d) const {  // h^{cd}
    double v = 0;
    for (int e = 0; e < 2; ++e)
      for (int f = 0; f < 2; ++f) v += sp.gi[c][e] * sp.gi[d][f] * h.hab[e][f].v;
    return v;
  }
  double tr_d1(int k = 1) const {  // d_1^k tr-slash h
    double v = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) v += sp.gi[a][b] * (k == 1 ? h.hab[a][b].d[1] : h.hab[a][b].dd[1][1]);
    return v;
  }
};

struct AppendixLine {
  std::string id;
  double base;          // stated weight at scri = base + cI*bI + cIp*bI'
  double cI, cIp;
  bool minus0;          // weight carries an arbitrarily small loss
  std::function<std::vector<double>(const LineContext&)> numeric, leading;
  double weight(const PerturbationField& h) const { return base + cI * h.bI + cIp * h.bIp; }
};

namespace detail {
inline std::vector<double> sph1(const std::function<double(int)>& f) { return {f(0), f(1)}; }
inline std::vector<double> sph2(const std::function<double(int, int)>& f) {
  return {f(0, 0), f(0, 1), f(1, 0), f(1, 1)};
}
inline std::vector<double> zeros(size_t n) { return std::vector<double>(n, 0.0); }
}  // namespace detail

inline std::vector<AppendixLine> appendix_lines() {
  using detail::sph1;
  using detail::sph2;
  using C = LineContext;
  std::vector<AppendixLine> L;
  auto G = [](int k, int a, int b) { return [=](const C& c) { return std::vector<double>{c.g.G[k][a][b]}; }; };
  auto zero1 = [](const C&) { return detail::zeros(1); };
  auto zero2 = [](const C&) { return detail::zeros(2); };

  L.push_back({"Gamma^0_00", 2, 1, 0, false, G(0, 0, 0), [](const C& c) {
                 double ir = 1 / c.r;
                 return std::vector<double>{ir * ir * (c.m - c.h.h01.v) - ir * c.h.h00.d[1]};
               }});
  L.push_back({"Gamma^1_00", 2, 0, 1, false, G(1, 0, 0), zero1});
  L.push_back({"Gamma^c_00", 3, 0, 1, false, [](const C& c) { return sph1([&](int a) { return c.g.G[2 + a][0][0]; }); },
               zero2});
  L.push_back({"Gamma^0_01", 2, 0, 1, true, G(0, 0, 1), [](const C& c) {
                 double ir = 1 / c.r;
                 return std::vector<double>{ir * c.h.h11.d[0] - 0.5 * ir * ir * c.h.h11.v};
               }});
  L.push_back({"Gamma^1_01", 2, 0, 1, false, G(1, 0, 1),
               [](const C& c) { return std::vector<double>{c.h.h00.d[1] / c.r}; }});
  L.push_back({"Gamma^c_01", 3, 1, 0, false,
               [](const C& c) { return sph1([&](int a) { return c.g.G[2 + a][0][1]; }); },
               [](const C& c) {
                 double ir = 1 / c.r;
                 return sph1([&](int a) {
                   double v = 0;
                   for (int d = 0; d < 2; ++d)
                     v += c.sp.gi[a][d] * (-0.5 * ir * ir * c.h.h0b[d].d[1] + 0.5 * ir * ir * ir * c.h.h01.d[2 + d]);
                   return v;
                 });
               }});
  L.push_back({"Gamma^0_0b", 1, 1, 0, false,
               [](const C& c) { return sph1([&](int b) { return c.g.G[0][0][2 + b]; }); },
               [](const C& c) {
                 double ir = 1 / c.r;
                 return sph1([&](int b) { return -c.h.h0b[b].d[1] + ir * c.h.h01.d[2 + b] - ir * c.h.h1b[b].v; });
               }});
  L.push_back({"Gamma^1_0b", 1, 0, 1, false,
               [](const C& c) { return sph1([&](int b) { return c.g.G[1][0][2 + b]; }); }, zero2});
  L.push_back({"Gamma^c_0b", 2, 1, 0, false,
               [](const C& c) { return sph2([&](int k, int b) { return c.g.G[2 + k][0][2 + b]; }); },
               [](const C& c) {
                 double ir = 1 / c.r;
                 return sph2([&](int k, int b) {
                   double v = (k == b) ? 0.5 * ir * (1 - 2 * c.m * ir) : 0.0;
                   for (int d = 0; d < 2; ++d) v += 0.25 * ir * ir * c.sp.gi[k][d] * c.h.hab[b][d].v;
                   return v;
                 });
               }});
  L.push_back({"Gamma^0_11", 3, 0, 0, true, G(0, 1, 1), [](const C& c) {
                 double ir = 1 / c.r;
                 const auto& h = c.h;
                 double v = ir * h.h11.d[1] + 0.5 * ir * ir * h.h11.v + 2 * ir * ir * (c.m - h.h01.v) * h.h11.d[1] -
                            4 * ir * ir * h.h11.v * h.h01.d[1];
                 for (int d = 0; d < 2; ++d)
                   for (int e = 0; e < 2; ++e) v += 2 * ir * ir * c.sp.gi[d][e] * h.h1b[e].v * h.h1b[d].d[1];
                 return std::vector<double>{v};
               }});
  L.push_back({"Gamma^1_11", 2, 0, 1, true, G(1, 1, 1), [](const C& c) {
                 double ir = 1 / c.r;
                 const auto& h = c.h;
                 double v = ir * ir * (h.h01.v - c.m) + 2 * ir * h.h01.d[1] - ir * h.h11.d[0] + 0.5 * ir * ir * h.h11.v +
                            4 * ir * ir * (c.m - h.h01.v) * h.h01.d[1];
                 return std::vector<double>{v};
               }});
  L.push_back({"Gamma^c_11", 3, 0, 1, true,
               [](const C& c) { return sph1([&](int a) { return c.g.G[2 + a][1][1]; }); },
               [](const C& c) {
                 double ir = 1 / c.r, ir2 = ir * ir, ir3 = ir2 * ir;
                 const auto& h = c.h;
                 return sph1([&](int k) {
                   double v = 0;
                   for (int d = 0; d < 2; ++d) {
                     v += c.sp.gi[k][d] * (-ir2 * h.h1b[d].d[1] + 0.5 * ir3 * h.h11.d[2 + d] +
                                           2 * ir3 * h.h1b[d].v * h.h01.d[1]);
                     v -= ir3 * c.hup(k, d) * h.h1b[d].d[1];
                   }
                   return v;
                 });
               }});
  L.push_back({"Gamma^0_1b", 1, 0, 1, true,
               [](const C& c) { return sph1([&](int b) { return c.g.G[0][1][2 + b]; }); },
               [](const C& c) {
                 double ir = 1 / c.r;
                 const auto& h = c.h;
                 return sph1([&](int b) {
                   double v = ir * h.h11.d[2 + b] + ir * h.h1b[b].v;
                   for (int d = 0; d < 2; ++d)
                     for (int e = 0; e < 2; ++e) v += ir * c.sp.gi[d][e] * h.h1b[e].v * h.hab[b][d].d[1];
                   return v;
                 });
               }});
  L.push_back({"Gamma^1_1b", 1, 1, 0, false,
               [](const C& c) { return sph1([&](int b) { return c.g.G[1][1][2 + b]; }); },
               [](const C& c) {
                 return sph1([&](int b) { return c.h.h0b[b].d[1] + c.h.h01.d[2 + b] / c.r; });
               }});
  L.push_back({"Gamma^c_1b", 2, 0, 1, false,
               [](const C& c) { return sph2([&](int k, int b) { return c.g.G[2 + k][1][2 + b]; }); },
               [](const C& c) {
                 double ir = 1 / c.r, ir2 = ir * ir;
                 const auto& h = c.h;
                 return sph2([&](int k, int b) {
                   double v = (k == b) ? -0.5 * ir * (1 - 2 * c.m * ir) : 0.0;
                   for (int d = 0; d < 2; ++d) {
                     v += c.sp.gi[k][d] * (-0.5 * ir * h.hab[b][d].d[1] - 0.25 * ir2 * h.hab[b][d].v +
                                           0.5 * ir2 * (h.h1b[b].d[2 + d] - h.h1b[d].d[2 + b]));
                     v -= 0.5 * ir2 * c.hup(k, d) * h.hab[b][d].d[1];
                   }
                   return v;
                 });
               }});
  L.push_back({"Gamma^0_ab", 1, 0, 0, true,
               [](const C& c) { return sph2([&](int a, int b) { return c.g.G[0][2 + a][2 + b]; }); },
               [](const C& c) {
                 const auto& h = c.h;
                 return sph2([&](int a, int b) {
                   return (-c.r + 2 * h.h01.v - 2 * h.h11.v) * c.sp.g[a][b] -
                          (c.r + 2 * c.m - 2 * h.h01.v) * h.hab[a][b].d[1] + c.nab_h1(a, b) + c.nab_h1(b, a) +
                          0.5 * h.hab[a][b].v;
                 });
               }});
  L.push_back({"Gamma^1_ab", 0, 1, 0, false,
               [](const C& c) { return sph2([&](int a, int b) { return c.g.G[1][2 + a][2 + b]; }); },
               [](const C& c) {
                 return sph2([&](int a, int b) { return (c.r - 2 * c.h.h01.v) * c.sp.g[a][b] - 0.5 * c.h.hab[a][b].v; });
               }});
  L.push_back({"Gamma^c_ab", 1, 0, 1, false,
               [](const C& c) {
                 std::vector<double> o;
                 for (int k = 0; k < 2; ++k)
                   for (int a = 0; a < 2; ++a)
                     for (int b = 0; b < 2; ++b) o.push_back(c.g.G[2 + k][2 + a][2 + b]);
                 return o;
               },
               [](const C& c) {
                 double ir = 1 / c.r;
                 std::vector<double> o;
                 for (int k = 0; k < 2; ++k)
                   for (int a = 0; a < 2; ++a)
                     for (int b = 0; b < 2; ++b) {
                       double v = c.sp.G[k][a][b];
                       for (int d = 0; d < 2; ++d)
                         v += c.sp.gi[k][d] * (ir * c.h.h1b[d].v * c.sp.g[a][b] -
                                               0.5 * ir * (c.nab_hab(a, b, d) + c.nab_hab(b, a, d) - c.nab_hab(d, a, b)));
                       o.push_back(v);
                     }
                 return o;
               }});

  // gauge 1-form, lower coordinate components
  auto ups = [](const C& c) { return gauge_oneform(c.g, c.gm); };
  L.push_back({"Upsilon_0", 2, 1, 0, false, [ups](const C& c) { return std::vector<double>{ups(c)[0]}; },
               [](const C& c) {
                 double ir = 1 / c.r;
                 return std::vector<double>{2 * ir * c.h.h00.d[1] + 2 * ir * ir * c.h.h01.v};
               }});
  L.push_back({"Upsilon_1", 2, 0, 1, true, [ups](const C& c) { return std::vector<double>{ups(c)[1]}; },
               [](const C& c) {
                 double ir = 1 / c.r, ir2 = ir * ir;
                 const auto& h = c.h;
                 double div = 0, q = 0;
                 for (int a = 0; a < 2; ++a)
                   for (int b = 0; b < 2; ++b) {
                     div += c.sp.gi[a][b] * c.nab_h1(a, b);
                     q += c.hup(a, b) * h.hab[a][b].d[1];
                   }
                 double v = 0.5 * ir * c.tr_d1() + ir2 * (h.h11.v - 2 * h.h01.v) - ir2 * div + 2 * ir * h.h11.d[0] +
                            0.5 * ir2 * q;
                 return std::vector<double>{v};
               }});
  L.push_back({"Upsilon_c", 1, 1, 0, false, [ups](const C& c) { return std::vector<double>{ups(c)[2], ups(c)[3]}; },
               [](const C& c) {
                 double ir = 1 / c.r;
                 const auto& h = c.h;
                 return sph1([&](int k) {
                   double div = 0;
                   for (int a = 0; a < 2; ++a)
                     for (int d = 0; d < 2; ++d) div += c.sp.gi[a][d] * c.nab_hab(a, k, d);
                   return 2 * h.h0b[k].d[1] - 2 * ir * h.h01.d[2 + k] - ir * div + 2 * ir * h.h1b[k].v;
                 });
               }});

  // curvature
  L.push_back({"R^0_001", 2, 1, 0, false, [](const C& c) { return std::vector<double>{c.g.R[0][0][0][1]}; },
               [](const C& c) {
                 double ir = 1 / c.r;
                 return std::vector<double>{-c.m * ir * ir * ir + ir * c.h.h00.dd[1][1] + ir * ir * c.h.h01.d[1]};
               }});
  L.push_back({"R^1_101", 2, 0, 1, false, [](const C& c) { return std::vector<double>{c.g.R[1][1][0][1]}; },
               [](const C& c) {
                 double ir = 1 / c.r;
                 return std::vector<double>{c.m * ir * ir * ir - ir * c.h.h00.dd[1][1] - ir * ir * c.h.h01.d[1]};
               }});

  // Ricci, barred
  L.push_back({"Ric_00", 2, 0, 1, false, [](const C& c) { return std::vector<double>{c.g.Ric[0][0]}; }, zero1});
  L.push_back({"Ric_01", 2, 1, 0, false, [](const C& c) { return std::vector<double>{c.g.Ric[0][1]}; },
               [](const C& c) {
                 double ir = 1 / c.r;
                 return std::vector<double>{ir * c.h.h00.dd[1][1] + ir * ir * c.h.h01.d[1]};
               }});
  L.push_back({"Ric_0b", 2, 0, 1, false,
               [](const C& c) { return sph1([&](int b) { return c.g.Ric[0][2 + b] / c.r; }); }, zero2});
  L.push_back({"Ric_11", 2, 1, 0, false, [](const C& c) { return std::vector<double>{c.g.Ric[1][1]}; },
               [](const C& c) {
                 double ir = 1 / c.r, ir2 = ir * ir;
                 const auto& h = c.h;
                 double div = 0, q2 = 0, qq = 0;
                 for (int a = 0; a < 2; ++a)
                   for (int b = 0; b < 2; ++b) {
                     div += c.sp.gi[a][b] * c.nab_h1(a, b, 1);
                     q2 += c.hup(a, b) * h.hab[a][b].dd[1][1];
                     for (int e = 0; e < 2; ++e)
                       for (int f = 0; f < 2; ++f)
                         qq += c.sp.gi[a][e] * c.sp.gi[b][f] * h.hab[e][f].d[1] * h.hab[a][b].d[1];
                   }
                 double v = 0.5 * ir * c.tr_d1(2) - ir2 * div + 0.5 * ir2 * q2 + ir2 * (h.h11.d[1] - 2 * h.h01.d[1]) +
                            0.25 * ir2 * qq;
                 return std::vector<double>{v};
               }});
  L.push_back({"Ric_1b", 2, 1, 0, false,
               [](const C& c) { return sph1([&](int b) { return c.g.Ric[1][2 + b] / c.r; }); },
               [](const C& c) {
                 double ir = 1 / c.r, ir2 = ir * ir;
                 const auto& h = c.h;
                 return sph1([&](int b) {
                   double div = 0;
                   for (int d = 0; d < 2; ++d)
                     for (int e = 0; e < 2; ++e) div += c.sp.gi[d][e] * c.nab_hab(d, b, e, 1);
                   return ir * h.h0b[b].dd[1][1] - ir2 * h.h01.dd[1][2 + b] - 0.5 * ir2 * div + ir2 * h.h1b[b].d[1];
                 });
               }});
  L.push_back({"Ric_ab", 2, 0, 1, false,
               [](const C& c) { return sph2([&](int a, int b) { return c.g.Ric[2 + a][2 + b] / (c.r * c.r); }); },
               [](const C&) { return detail::zeros(4); }});
  return L;
}

// ---------------------------------------------------------------------------
// manufactured perturbations

inline std::vector<PerturbationField> manufactured_perturbations() {
  using J = Jet;
  auto A = [](const J& s, const J& th, const J& ph) { return 0.7 + 0.3 * sin(s) * cos(th) + 0.2 * sin(ph); };
  auto B = [](const J& s, const J& th, const J& ph) { return 0.5 * cos(0.7 * s) + 0.25 * sin(th) * cos(ph); };
  auto Cf = [](const J& s, const J& th, const J& ph) { return 0.4 + 0.2 * cos(s + th) + 0.1 * cos(2.0 * ph); };
  auto decay = [](const J& rI) { return sqrt(rI); };

  ScalarField h11_log = [=](const J& rI, const J& s, const J& th, const J& ph) {
    return A(s, th, ph) * log(rI) + B(s, th, ph) + decay(rI) * Cf(s, th, ph);
  };
  ScalarField h11_plain = [=](const J& rI, const J& s, const J& th, const J& ph) {
    return B(s, th, ph) + decay(rI) * Cf(s, th, ph);
  };
  ScalarField h00 = [=](const J& rI, const J& s, const J& th, const J& ph) { return decay(rI) * A(s, th, ph); };
  ScalarField h01 = [=](const J& rI, const J& s, const J& th, const J& ph) {
    return Cf(s, th, ph) + decay(rI) * B(s, th, ph);
  };
  ScalarField h0b0 = [=](const J& rI, const J& s, const J& th, const J& ph) { return decay(rI) * B(s, th, ph); };
  ScalarField h0b1 = [=](const J& rI, const J& s, const J& th, const J& ph) {
    return decay(rI) * Cf(s, th, ph) * sin(th);
  };
  ScalarField h1b0 = [=](const J& rI, const J& s, const J& th, const J& ph) {
    return 0.3 * cos(s) * sin(th) + decay(rI) * A(s, th, ph);
  };
  ScalarField h1b1 = [=](const J& rI, const J& s, const J& th, const J& ph) {
    return 0.2 * sin(s + ph) * sin(th) + decay(rI) * B(s, th, ph) * sin(th);
  };
  // trace-free leading part: (P, Q sin, -P sin^2) plus a decaying trace
  auto P = [](const J& s, const J& th, const J& ph) { return 0.4 * cos(s) * sin(th) + 0.1 * cos(ph); };
  auto Q = [](const J& s, const J&, const J& ph) { return 0.3 * sin(0.5 * s + ph); };
  ScalarField tf0 = [=](const J& rI, const J& s, const J& th, const J& ph) {
    return P(s, th, ph) + decay(rI) * A(s, th, ph);
  };
  ScalarField tf1 = [=](const J& rI, const J& s, const J& th, const J& ph) {
    return Q(s, th, ph) * sin(th) + decay(rI) * B(s, th, ph) * sin(th);
  };
  ScalarField tf2 = [=](const J& rI, const J& s, const J& th, const J& ph) {
    return -1.0 * P(s, th, ph) * sin(th) * sin(th) + decay(rI) * Cf(s, th, ph) * sin(th) * sin(th);
  };
  ScalarField tr0 = [=](const J& rI, const J& s, const J& th, const J& ph) { return decay(rI) * A(s, th, ph); };
  ScalarField tr2 = [=](const J& rI, const J& s, const J& th, const J& ph) {
    return decay(rI) * A(s, th, ph) * sin(th) * sin(th);
  };

  std::vector<PerturbationField> out;
  auto make = [&](const std::string& name) {
    PerturbationField f;
    f.name = name;
    return f;
  };
  {
    auto f = make("h11_log");
    f.h11 = h11_log;
    out.push_back(f);
  }
  {
    auto f = make("good_components");
    f.h00 = h00;
    f.h0b[0] = h0b0;
    f.h0b[1] = h0b1;
    f.hab[0] = tr0;
    f.hab[2] = tr2;
    out.push_back(f);
  }
  {
    auto f = make("h01_h1b");
    f.h01 = h01;
    f.h1b[0] = h1b0;
    f.h1b[1] = h1b1;
    out.push_back(f);
  }
  {
    auto f = make("tracefree_hab");
    f.hab[0] = tf0;
    f.hab[1] = tf1;
    f.hab[2] = tf2;
    out.push_back(f);
  }
  {
    auto f = make("all_plain");
    f.h00 = h00;
    f.h01 = h01;
    f.h11 = h11_plain;
    f.h0b[0] = h0b0;
    f.h0b[1] = h0b1;
    f.h1b[0] = h1b0;
    f.h1b[1] = h1b1;
    f.hab[0] = tf0;
    f.hab[1] = tf1;
    f.hab[2] = tf2;
    out.push_back(f);
  }
  {
    auto f = out.back();
    f.name = "all_log";
    f.h11 = h11_log;
    out.push_back(f);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct LineResult {
  std::string line_id, family;
  double numeric = 0, leading = 0;  // worst component at the innermost sample
  double fitted_exponent = 0, stated_weight = 0;
  bool exact = false;  // excess at roundoff throughout
  bool pass = false;
  double fitted_excess() const { return fitted_exponent - stated_weight; }
};

struct AppendixConfig {
  double m = 0.5;
  double s = 0.3, theta = 1.1, phi = 0.4;
  // one decade further out than the first guess [1e-4, 1e-2]: some remainders change sign near r ~ 100
  double rhoI_min = 1e-5, rhoI_max = 1e-3;
  int samples = 9;
  double slack = 0.1;
};

inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = double(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// "-0" weights admit log factors: fit y = e x + k log|x| + c with k in {0, 1, 2},
// keeping the k with the smallest residual
inline double fit_slope_with_log(const std::vector<double>& x, const std::vector<double>& y) {
  double best_res = std::numeric_limits<double>::infinity(), best = 0;
  for (int k = 0; k <= 2; ++k) {
    std::vector<double> z(y.size());
    for (size_t i = 0; i < y.size(); ++i) z[i] = y[i] - k * std::log(std::fabs(x[i]));
    double e = fit_slope(x, z);
    double mx = 0, mz = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      mx += x[i];
      mz += z[i];
    }
    mx /= x.size();
    mz /= x.size();
    double res = 0;
    for (size_t i = 0; i < x.size(); ++i) res += std::pow(z[i] - mz - e * (x[i] - mx), 2);
    if (res < best_res) {
      best_res = res;
      best = e;
    }
  }
  return best;
}

inline std::vector<LineResult> verify_appendix(const PerturbationField& h, const AppendixConfig& cfg,
                                               const std::vector<AppendixLine>& lines = appendix_lines()) {
  std::vector<std::vector<std::vector<double>>> excess(lines.size());
  std::vector<std::vector<double>> scale(lines.size());
  std::vector<double> logrho;
  std::vector<LineResult> res(lines.size());
  MetricFn g = perturbed_metric(cfg.m, h), gm = schwarzschild_metric(cfg.m);
  for (int k = 0; k < cfg.samples; ++k) {
    double lr = std::log(cfg.rhoI_max) + (std::log(cfg.rhoI_min) - std::log(cfg.rhoI_max)) * k / (cfg.samples - 1);
    double r = std::exp(-lr);
    Vec4 p = point_at(r, cfg.s, cfg.theta, cfg.phi, cfg.m);
    LineContext c;
    c.g = geometry(g, p);
    c.gm = geometry(gm, p);
    c.h = barred_components(h, seed(p), cfg.m);
    c.sp = Sphere(cfg.theta);
    c.m = cfg.m;
    c.r = c.h.r.v;
    logrho.push_back(-std::log(c.r));
    for (size_t i = 0; i < lines.size(); ++i) {
      auto N = lines[i].numeric(c), Ld = lines[i].leading(c);
      std::vector<double> e(N.size());
      double sc = 0;
      for (size_t j = 0; j < N.size(); ++j) {
        e[j] = N[j] - Ld[j];
        sc = std::max({sc, std::fabs(N[j]), std::fabs(Ld[j])});
      }
      excess[i].push_back(e);
      scale[i].push_back(sc);
      if (k == cfg.samples - 1) {
        size_t w = 0;
        for (size_t j = 0; j < e.size(); ++j)
          if (std::fabs(e[j]) > std::fabs(e[w])) w = j;
        res[i].numeric = N[w];
        res[i].leading = Ld[w];
      }
    }
  }
  for (size_t i = 0; i < lines.size(); ++i) {
    LineResult& R = res[i];
    R.line_id = lines[i].id;
    R.family = h.name;
    R.stated_weight = lines[i].weight(h);
    size_t ncomp = excess[i][0].size();
    double worst = std::numeric_limits<double>::infinity();
    bool all_exact = true;
    for (size_t j = 0; j < ncomp; ++j) {
      bool exact = true;
      std::vector<double> y;
      for (int k = 0; k < cfg.samples; ++k) {
        double e = std::fabs(excess[i][k][j]);
        // far below the allowed remainder size, or roundoff relative to the compared terms
        double floor = std::max(1e-9 * std::exp(logrho[k] * R.stated_weight), 1e-11 * scale[i][k]);
        if (e > floor) exact = false;
        y.push_back(std::log(std::max(e, 1e-300)));
      }
      if (exact) continue;
      all_exact = false;
      worst = std::min(worst, lines[i].minus0 ? fit_slope_with_log(logrho, y) : fit_slope(logrho, y));
    }
    R.exact = all_exact;
    R.fitted_exponent = all_exact ? std::numeric_limits<double>::infinity() : worst;
    R.pass = all_exact || R.fitted_excess() >= -cfg.slack;
  }
  return res;
}

}  // namespace scri
