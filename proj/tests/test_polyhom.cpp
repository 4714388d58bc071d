#include <gtest/gtest.h>

#include <random>

#include "scri/polyhom.hpp"

using namespace scri;

namespace {

PolyhomExpansion<Exact> random_expansion(std::mt19937& rng) {
  PolyhomExpansion<Exact> f;
  int n = 1 + rng() % 4;
  for (int i = 0; i < n; ++i)
    f.add(Rat(int(rng() % 9), 1 + int(rng() % 3)), rng() % 3, Exact(int(rng() % 11) - 5, 1 + int(rng() % 4)));
  f.normalize();
  return f;
}

PolyhomExpansion2 random_expansion2(std::mt19937& rng) {
  PolyhomExpansion2 g;
  int n = 1 + rng() % 4;
  for (int i = 0; i < n; ++i)
    g.add(Rat(int(rng() % 5), 1 + int(rng() % 2)), rng() % 3, Rat(int(rng() % 5), 1 + int(rng() % 2)), rng() % 3,
          Exact(int(rng() % 11) - 5, 1 + int(rng() % 4)));
  g.normalize();
  return g;
}

}  // namespace

TEST(Transport, RhoOperatorInvertsExactly) {
  std::mt19937 rng(3);
  for (int it = 0; it < 100; ++it) {
    auto f = random_expansion(rng);
    auto r = transport_phg(f);
    EXPECT_TRUE(rho_d_rho(r.u) == f);
    EXPECT_EQ(r.index_set, transport_index_rho(f.index_set()));
    EXPECT_TRUE(subset_of(r.u.index_set(), r.index_set));
  }
}

TEST(Transport, TwoFaceOperatorInvertsExactly) {
  std::mt19937 rng(4);
  for (int it = 0; it < 100; ++it) {
    auto g = random_expansion2(rng);
    auto r = transport_phg(g);
    EXPECT_TRUE(two_face_operator(r.u) == g);
    EXPECT_EQ(r.index_set, transport_index_two_face(g.index_set_face1(), g.index_set_face2()));
    EXPECT_TRUE(subset_of(r.u.index_set_face1(), r.index_set));
    EXPECT_TRUE(subset_of(r.u.index_set_face2(), r.index_set_face2));
  }
}

// the exact answer evaluated numerically: rho u'(rho) = f(rho)
TEST(Transport, NumericDerivativeOracle) {
  std::mt19937 rng(8);
  for (int it = 0; it < 20; ++it) {
    auto f = random_expansion(rng);
    auto u = transport_phg(f).u;
    for (double rho : {0.3, 0.7}) {
      double h = 1e-5 * rho;
      double d = rho * (u(rho + h) - u(rho - h)) / (2 * h);
      EXPECT_NEAR(d, f(rho), 1e-6 * (1 + std::fabs(f(rho))));
    }
  }
}

TEST(Transport, ResonantPowerGainsLog) {
  PolyhomExpansion<Exact> f;
  f.add(Rat(0), 1, Exact(3));
  auto r = transport_phg(f);
  ASSERT_EQ(r.u.terms.size(), 1u);
  EXPECT_EQ(r.u.terms[0].k, 2);
  EXPECT_EQ(r.u.terms[0].c, Exact(3, 2));
}

TEST(TInverse, ExpansionMatchesFixedPoint) {
  std::vector<double> rho{1e-3, 1e-4, 1e-5};
  auto e = t_inverse_expansion(0.3, 0.2, 2, rho);
  EXPECT_EQ(e.index_set.k_at(Rat(0)).value(), 0);
  EXPECT_EQ(e.index_set.k_at(Rat(1)).value(), 1);
  std::vector<double> lx, ly;
  for (size_t i = 0; i < rho.size(); ++i) {
    double lr = std::log(rho[i]), err = std::fabs(e.sample.f[i] - e.expansion(rho[i]));
    EXPECT_LT(err, 10 * rho[i] * rho[i] * lr * lr);
    lx.push_back(lr);
    ly.push_back(std::log(err));
  }
  // remainder slope at least 2 - delta
  EXPECT_GE((ly.back() - ly.front()) / (lx.back() - lx.front()), 1.9);
  // m = 0 degenerates to 1 + v
  auto z = t_inverse_expansion(0.3, 0.0, 2, rho);
  for (double f : z.sample.f) EXPECT_EQ(f, 1.3);
  EXPECT_THROW(t_inverse_expansion(0.3, 0.2, 3, rho), std::invalid_argument);
}
