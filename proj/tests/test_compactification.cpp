#include <gtest/gtest.h>

#include <random>

#include "scri/compactification.hpp"

using namespace scri;

TEST(Tortoise, InverseRoundTrip) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> um(0.0, 2.0), ux(1e-6, 1e4);
  for (int k = 0; k < 500; ++k) {
    double m = um(rng), r = 2 * m + ux(rng);
    double rs = tortoise(r, m);
    EXPECT_NEAR(inverse_tortoise(rs, m), r, 1e-11 * (1 + std::fabs(rs))) << "m=" << m << " r=" << r;
  }
}

TEST(Tortoise, NegativeMassAndZeroMass) {
  EXPECT_DOUBLE_EQ(inverse_tortoise(3.5, 0.0), 3.5);
  double m = -0.3, r = 2.0;
  EXPECT_NEAR(inverse_tortoise(tortoise(r, m), m), r, 1e-11);
  EXPECT_THROW(inverse_tortoise(-1.0, 0.0), DomainError);
  EXPECT_THROW(tortoise(1.0, 0.5), DomainError);
}

TEST(Tortoise, DerivativeMatchesLapse) {
  double m = 0.7, r = 5.0, h = 1e-5;
  double d = (tortoise(r + h, m) - tortoise(r - h, m)) / (2 * h);
  EXPECT_NEAR(d, 1.0 / (1.0 - 2 * m / r), 1e-8);
}

TEST(Cutoffs, Plateaus) {
  EXPECT_EQ(cutoff_chi(1.0), 1.0);
  EXPECT_EQ(cutoff_chi(3.5), 0.0);
  EXPECT_NEAR(cutoff_chi(2.5), 0.5, 1e-15);
  EXPECT_EQ(cutoff_chi_tilde(0.25), 0.0);
  EXPECT_EQ(cutoff_chi_tilde(0.6), 1.0);
  for (double x = 2.0; x < 3.0; x += 0.01) EXPECT_LE(cutoff_chi(x + 0.01), cutoff_chi(x));
}

TEST(Charts, TemporalNullconeRoundTrip) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    std::array<double, 3> X{u(rng), u(rng), u(rng)};
    double rp = 0.1 + std::fabs(u(rng));
    auto nc = chart_transition_temporal_to_nullcone(rp, X);
    EXPECT_NEAR(nc.omega[0] * nc.omega[0] + nc.omega[1] * nc.omega[1] + nc.omega[2] * nc.omega[2], 1.0, 1e-14);
    auto back = chart_transition_nullcone_to_temporal(nc);
    EXPECT_NEAR(back.rho_plus, rp, 1e-13);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(back.X[i], X[i], 1e-13);
  }
  EXPECT_THROW(chart_transition_temporal_to_nullcone(1.0, {0, 0, 0}), DomainError);
  EXPECT_THROW(chart_transition_nullcone_to_temporal({1.0, -1.0, {1, 0, 0}}), DomainError);
}

TEST(BoundaryDefining, ProductsGiveInverseRadius) {
  double m = 0.4;
  for (double q : {50.0, 200.0, 1000.0})
    for (double s : {-30.0, -5.0}) {
      DoubleNullPoint p{q, s};
      auto b = boundary_defining(p, m, Corner::Past);
      EXPECT_NEAR(b.rho0 * b.rhoI, 1.0 / b.r, 1e-15);
      EXPECT_GT(b.rho0, 0);
      EXPECT_GT(b.rhoI, 0);
    }
  DoubleNullPoint f{400.0, 3.0};
  auto b = boundary_defining(f, m, Corner::Future);
  EXPECT_NEAR(b.rhoI * b.rhoPlus, 1.0 / b.r, 1e-15);
  EXPECT_THROW(boundary_defining(f, m, Corner::Past), DomainError);
  EXPECT_THROW(boundary_defining({2.0, 2.0}, m, Corner::Past), DomainError);
}

TEST(TInverse, FixedPointSolvesEquation) {
  std::vector<double> rho{1e-1, 1e-2, 1e-3, 1e-4};
  for (double v : {-0.3, 0.0, 1.5})
    for (double m : {0.0, 0.2}) {
      auto r = t_inverse_fixed_point(v, m, rho);
      for (size_t i = 0; i < rho.size(); ++i) EXPECT_NEAR(r.f[i], t_inverse_rhs(r.f[i], rho[i], v, m), 1e-12);
      if (m == 0.0) {
        EXPECT_LE(r.iterations, 2);
      }
    }
  EXPECT_THROW(t_inverse_fixed_point(-0.7, 0.1, rho), DomainError);
  // a different starting guess lands on the same fixed point
  auto a = t_inverse_fixed_point(0.2, 0.2, rho), b = t_inverse_fixed_point(0.2, 0.2, rho, 0.3);
  for (size_t i = 0; i < rho.size(); ++i) EXPECT_NEAR(a.f[i], b.f[i], 1e-12);
}
