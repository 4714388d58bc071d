#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "scri/model_pde.hpp"

using namespace scri;

namespace {

ModeData bump_top(const CharacteristicGrid& g) {
  ModeData d;
  double c = std::log(std::sqrt(g.rho0_min * g.eps)), w = 0.35 * std::log(g.eps / g.rho0_min);
  d.w_top = [=](double r0) { return bump((std::log(r0) - c) / w); };
  return d;
}

ToyConfig generic_toy() {
  ToyConfig tc;
  auto bmp = [](double a) { return [a](double r0) { return a * bump((std::log(r0) - std::log(0.045)) / 1.2); }; };
  tc.data0.w_top = bmp(0.08);
  tc.data1c.w_top = bmp(0.08);
  tc.data1.w_top = bmp(0.05);
  return tc;
}

}  // namespace

TEST(Grid, Validation) {
  CharacteristicGrid g;
  EXPECT_NO_THROW(g.validate());
  g.n = 8;
  EXPECT_THROW(g.validate(), GridError);
  g = CharacteristicGrid{};
  g.rho0_min = 2e-3;
  EXPECT_THROW(g.validate(), GridError);
  g = CharacteristicGrid{};
  EXPECT_EQ(g.refined(2).nx() - 1, 2 * (g.nx() - 1));
}

TEST(Fit, RecoversSyntheticExpansions) {
  std::vector<double> r, lin, pw;
  for (int j = 0; j <= 96; ++j) {
    double x = std::pow(10.0, -1.0 - j / 16.0);
    r.push_back(x);
    lin.push_back(0.7 * std::log(x) - 1.3);
    pw.push_back(2.0 + 0.5 * std::pow(x, 0.4));
  }
  auto a = fit_leading_terms(r, lin, FitModel::log_constant);
  EXPECT_NEAR(a.c_log, 0.7, 1e-12);
  EXPECT_NEAR(a.c0, -1.3, 1e-10);
  auto b = fit_leading_terms(r, pw, FitModel::power);
  // three-point log derivative, one-sided at the window ends
  EXPECT_NEAR(b.exponent, 0.4, 1e-3);
  EXPECT_NEAR(b.c0, 2.0, 1e-5);
  EXPECT_NEAR(b.amplitude, 0.5, 5e-3);
  std::vector<double> shortr(r.begin(), r.begin() + 20), shortu(lin.begin(), lin.begin() + 20);
  EXPECT_THROW(fit_leading_terms(shortr, shortu, FitModel::constant), std::invalid_argument);
}

class Damped : public ::testing::TestWithParam<double> {};

TEST_P(Damped, DecayExponentAndConvergence) {
  double gam = GetParam();
  CharacteristicGrid g;
  ModeData d = bump_top(g);
  auto solve = [&](const CharacteristicGrid& gg) { return solve_damped_mode(gg, 1, gam, Source{}, d); };
  ModeSolution s = solve(g);
  EXPECT_FALSE(s.fit_failed);
  EXPECT_NEAR(s.fit.exponent, gam, 0.1 * gam);
  EXPECT_GE(self_convergence_order(solve, g), 2.0);
}

INSTANTIATE_TEST_SUITE_P(Gammas, Damped, ::testing::Values(0.25, 0.5));

TEST(Undamped, FiniteNonzeroLeadingTerm) {
  CharacteristicGrid g;
  ModeSolution s = solve_damped_mode(g, 1, 0.0, Source{}, bump_top(g));
  EXPECT_TRUE(std::isfinite(s.fit.c0));
  EXPECT_GT(std::fabs(s.fit.c0), 1e-6);
}

TEST(Undamped, ZeroDataGivesZero) {
  CharacteristicGrid g;
  ModeSolution s = solve_damped_mode(g, 2, 0.0, Source{}, ModeData{});
  EXPECT_EQ(s.u.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Toy, LogCoefficientFollowsSource) {
  ToyConfig tc = generic_toy();
  ToySolution t = solve_null_toy_system(tc);
  EXPECT_GT(std::fabs(t.u1_log.c_log), 10 * t.u1_log.residual);
  tc.source_1c = false;
  ToySolution off = solve_null_toy_system(tc);
  EXPECT_LT(std::fabs(off.u1_log.c_log), off.u1_log.residual);
}

TEST(Toy, NewtonRatiosBounded) {
  NewtonResult nr = newton_iterate(generic_toy(), 5);
  ASSERT_EQ(nr.ratios.size(), 4u);
  for (double q : nr.ratios) EXPECT_LT(q, 1e3);
  for (size_t k = 1; k < nr.errors.size(); ++k) EXPECT_LE(nr.errors[k], nr.errors[k - 1] + 1e-15);
}

TEST(Matrices, DampingBlockSpectrum) {
  for (auto [g1, g2] : {std::pair{0.3, 0.7}, std::pair{1.0, 0.5}}) {
    Eigen::EigenSolver<Mat3> es(A_CD(g1, g2));
    std::vector<double> ev;
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(es.eigenvalues()(i).imag(), 0.0, 1e-14);
      ev.push_back(es.eigenvalues()(i).real());
    }
    std::sort(ev.begin(), ev.end());
    std::vector<double> want{2 * g1, g1, g2};
    std::sort(want.begin(), want.end());
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(ev[i], want[i], 1e-13);
  }
}

TEST(Matrices, ToyCouplingNilpotent) {
  Mat3 A = A_u(0.0, 0.8);
  EXPECT_EQ((A * A).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NE(A.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Matrices, NoFeedIntoDecayingComponents) {
  HDerivatives d{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  Mat7 A = A_h(0.3, 0.6, d), B = B_h(d);
  for (int a : kDecaying) {
    for (int b : kNonLog) EXPECT_EQ(A(a, b), 0.0);
    EXPECT_EQ(A(a, kLogComponent), 0.0);
    EXPECT_EQ(B.row(a).cwiseAbs().maxCoeff(), 0.0);
  }
  EXPECT_EQ(A.col(kLogComponent).cwiseAbs().maxCoeff(), 0.0);
}
