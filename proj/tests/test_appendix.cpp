#include <gtest/gtest.h>

#include "scri/appendix.hpp"

using namespace scri;

TEST(Appendix, SixPerturbationFamiliesPassSlopeTest) {
  auto fams = manufactured_perturbations();
  ASSERT_GE(fams.size(), 6u);
  AppendixConfig cfg;
  for (auto& h : fams) {
    EXPECT_TRUE(h.weights_admissible()) << h.name;
    auto res = verify_appendix(h, cfg);
    ASSERT_EQ(res.size(), appendix_lines().size());
    for (auto& r : res) EXPECT_TRUE(r.pass) << h.name << " " << r.line_id << " exponent " << r.fitted_exponent
                                           << " weight " << r.stated_weight;
  }
}

TEST(Appendix, UnperturbedSchwarzschildPasses) {
  PerturbationField zero;
  zero.name = "zero";
  for (auto& r : verify_appendix(zero, AppendixConfig{})) EXPECT_TRUE(r.pass) << r.line_id;
}

// a line that drops a leading term must fail the slope test
TEST(Appendix, BrokenLeadingTermIsDetected) {
  auto lines = appendix_lines();
  auto h = manufactured_perturbations().front();
  bool any = false;
  for (auto& L : lines) {
    auto base = verify_appendix(h, AppendixConfig{}, {L});
    if (base[0].exact) continue;
    AppendixLine broken = L;
    auto lead = L.leading;
    broken.leading = [lead](const LineContext& c) {
      auto v = lead(c);
      for (double& x : v) x *= 0.5;
      return v;
    };
    auto r = verify_appendix(h, AppendixConfig{}, {broken});
    if (!r[0].pass) any = true;
  }
  EXPECT_TRUE(any);
}

TEST(Appendix, SlopeFitRecoversPowerAndLog) {
  std::vector<double> x, y, z;
  for (int k = 0; k < 9; ++k) {
    double lr = -3 - 0.25 * k;
    x.push_back(lr);
    y.push_back(1.7 * lr + 0.3);
    z.push_back(1.2 * lr + std::log(std::fabs(lr)) - 2.0);
  }
  EXPECT_NEAR(fit_slope(x, y), 1.7, 1e-12);
  EXPECT_NEAR(fit_slope_with_log(x, z), 1.2, 1e-9);
}
