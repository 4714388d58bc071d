#pragma once
// Subcommand pipelines behind the command line tool: each reads a Config, writes its CSVs into
// an output directory and returns the checks it ran.

#include <filesystem>
#include <future>
#include <map>
#include <string>
#include <vector>

#include "scri/appendix.hpp"
#include "scri/bondi.hpp"
#include "scri/index_sets.hpp"
#include "scri/io.hpp"
#include "scri/model_pde.hpp"

namespace scri {

inline const std::vector<std::string> kSubcommands{"index-sets", "model-pde", "geodesics", "bondi", "verify-appendix"};

inline std::map<std::string, std::string> default_config() {
  return {
      {"mass", "0.1"},
      {"seed", "20240611"},
      // index sets: generators "p:k" separated by ';', empty for the empty set
      {"index_N", "4"},
      {"index_E00", ""},
      {"index_elog_prime", "1"},
      // model equations
      {"gammas", "0.25,0.5"},
      {"grid_n", "16"},
      {"grid_rho0_min", "1e-3"},
      {"grid_rhoI_min", "1e-7"},
      {"grid_eps", "0.1"},
      {"mode_l", "1"},
      {"tol_gamma_rel", "0.1"},
      {"min_order", "2"},
      // geodesics
      {"geodesic_s0", "20"},
      {"geodesic_nodes", "2000"},
      {"target_u", "0.7"},
      {"target_theta", "1.1"},
      {"target_phi", "0.3"},
      {"tol_null", "1e-8"},
      {"tol_constant", "1e-10"},
      // bondi
      {"hawking_radii", "10,50,200"},
      {"tol_hawking", "1e-8"},
      {"news_amplitude", "0.2"},
      {"news_width", "0.5"},
      {"u_min", "-6"},
      {"u_max", "6"},
      {"u_steps", "200"},
      {"quad_theta", "24"},
      {"quad_phi", "48"},
      {"tol_budget", "1e-6"},
      {"tol_scattering", "1e-6"},
      // appendix
      // fits bend near remainder sign changes for small masses, so this is separate from mass
      {"appendix_mass", "0.5"},
      {"appendix_samples", "9"},
      {"appendix_slack", "0.1"},
      {"appendix_rhoI_min", "1e-5"},
      {"appendix_rhoI_max", "1e-3"},
  };
}

// keys that have no usable default for a given subcommand
inline std::set<std::string> required_keys(const std::string& sub) {
  if (sub == "geodesics" || sub == "bondi" || sub == "all") return {"mass"};
  return {};
}

inline Config make_config(const std::string& sub) { return Config(default_config(), required_keys(sub)); }

namespace detail {

inline IndexSet parse_generators(const std::string& text, int N) {
  IndexSet e({}, Rat(N));
  std::stringstream ss(text);
  std::string g;
  while (std::getline(ss, g, ';')) {
    if (g.find_first_not_of(" ") == std::string::npos) continue;
    auto c = g.find(':');
    if (c == std::string::npos) throw ConfigError("index_E00: expected p:k, got '" + g + "'");
    try {
      e.gens.emplace_back(parse_rat(g.substr(0, c)), std::stoi(g.substr(c + 1)));
    } catch (const std::exception&) {
      throw ConfigError("index_E00: bad generator '" + g + "'");
    }
  }
  e.normalize();
  return e;
}

inline std::string out_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

inline double physical_mass(const Config& c) {
  double m = c.num("mass");
  if (!(m >= 0.0 && m < 1.0)) throw ConfigError("mass must lie in [0, 1)");
  return m;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline RunReport run_index_sets(const Config& c, const std::string& out) {
  int N = c.integer("index_N");
  if (N < 1 || N > 12) throw ConfigError("index_N must lie in 1..12");
  IndexSet e00 = detail::parse_generators(c.str("index_E00"), N);
  auto r = solve_index_recursion(e00, N, c.integer("index_elog_prime") != 0);

  Table t({"set", "power", "log_order"});
  std::vector<std::pair<std::string, const IndexSet*>> sets{
      {"E0", &r.E0}, {"EI", &r.EI}, {"EIprime", &r.EIprime}, {"EIbar", &r.EIbar}, {"Eplus", &r.Eplus}};
  for (auto& [name, s] : sets)
    for (auto& [p, k] : s->gens) t.add({name, boost::rational_cast<double>(p), double(k)});
  emit_csv(t, detail::out_path(out, "index_sets.csv"));

  RunReport rep;
  rep.truth("index_sets.denominators", r.EI.denominators_ok() && r.Eplus.denominators_ok());
  rep.truth("index_sets.EIbar_contains_0", r.EIbar.contains(Rat(0), 0));
  rep.truth("index_sets.EIprime_subset_EIbar", subset_of(r.EIprime, r.EIbar));
  // the empty-data example has closed forms 3j+1, 3j-1 and 3j(j+3)/2
  if (e00.empty()) {
    for (int j = 0; j < N; ++j) {
      auto k = r.EI.k_at(Rat(j));
      rep.near(fmt::format("index_sets.EI.k({})", j), 3 * j + 1, k ? *k : -1, 0);
      auto kp = r.Eplus.k_at(Rat(j));
      rep.near(fmt::format("index_sets.Eplus.k({})", j), 1.5 * j * (j + 3), kp ? *kp : -1, 0);
      if (j > 0) {
        auto k1 = r.EIprime.k_at(Rat(j));
        rep.near(fmt::format("index_sets.EIprime.k({})", j), 3 * j - 1, k1 ? *k1 : -1, 0);
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

inline CharacteristicGrid grid_from(const Config& c) {
  CharacteristicGrid g;
  g.n = c.integer("grid_n");
  g.rho0_min = c.num("grid_rho0_min");
  g.rhoI_min = c.num("grid_rhoI_min");
  g.eps = c.num("grid_eps");
  try {
    g.validate();
  } catch (const GridError& e) {
    throw ConfigError(e.what());
  }
  return g;
}

inline ModeData bump_data(const CharacteristicGrid& g) {
  ModeData d;
  double centre = std::log(std::sqrt(g.rho0_min * g.eps)), width = 0.35 * std::log(g.eps / g.rho0_min);
  d.w_top = [=](double r0) { return bump((std::log(r0) - centre) / width); };
  return d;
}

inline RunReport run_model_pde(const Config& c, const std::string& out) {
  CharacteristicGrid g = grid_from(c);
  int l = c.integer("mode_l");
  if (l < 0 || l > 8) throw ConfigError("mode_l must lie in 0..8");
  auto gammas = c.list("gammas");
  double rel = c.num("tol_gamma_rel"), min_order = c.num("min_order");
  ModeData d = bump_data(g);

  RunReport rep;
  Table sol({"rho0", "rhoI", "l", "component", "value"});
  Table sum({"component", "c_log", "c0", "exponent", "residual"});
  auto record = [&](const std::string& name, const ModeSolution& s) {
    const auto& sg = s.grid;
    for (int i = 0; i < sg.nx(); i += std::max(1, sg.n / 4))
      for (int j = 0; j < sg.ny(); j += std::max(1, sg.n / 4)) {
        sol.add({sg.rho0(i), sg.rhoI(j), double(s.l), name + ".u", s.u(i, j)});
        sol.add({sg.rho0(i), sg.rhoI(j), double(s.l), name + ".w", s.w(i, j)});
      }
    auto lf = fit_leading_terms(sg.rhoI_samples(), s.column(sg.nx() - 1), FitModel::log_constant);
    sum.add({name, lf.c_log, s.fit.c0, s.fit.exponent, s.fit.residual});
  };

  for (double gam : gammas) {
    if (!(gam > 0 && gam < 1)) throw ConfigError("gammas must lie in (0, 1)");
    auto solve = [&](const CharacteristicGrid& gg) { return solve_damped_mode(gg, l, gam, Source{}, d); };
    ModeSolution s = solve(g);
    record(fmt::format("damped_gamma_{}", gam), s);
    rep.near(fmt::format("model_pde.exponent(gamma={})", gam), gam, s.fit.exponent, rel * gam);
    double order = self_convergence_order(solve, g);
    rep.at_least(fmt::format("model_pde.order(gamma={})", gam), order, min_order);
  }
  ModeSolution s0 = solve_damped_mode(g, l, 0.0, Source{}, d);
  record("undamped", s0);
  rep.truth("model_pde.undamped_leading_nonzero", std::isfinite(s0.fit.c0) && std::fabs(s0.fit.c0) > 1e-6);

  ToyConfig tc;
  auto bmp = [](double a) { return [a](double r0) { return a * bump((std::log(r0) - std::log(0.045)) / 1.2); }; };
  tc.data0.w_top = bmp(0.08);
  tc.data1c.w_top = bmp(0.08);
  tc.data1.w_top = bmp(0.05);
  ToySolution t = solve_null_toy_system(tc);
  record("toy_u1", t.u1);
  record("toy_u1c", t.u1c);
  rep.truth("model_pde.toy_log_coefficient_resolved", std::fabs(t.u1_log.c_log) > 10 * t.u1_log.residual);
  tc.source_1c = false;
  ToySolution off = solve_null_toy_system(tc);
  rep.truth("model_pde.toy_log_coefficient_off", std::fabs(off.u1_log.c_log) < off.u1_log.residual);
  tc.source_1c = true;
  NewtonResult nr = newton_iterate(tc, 5);
  double worst = 0;
  for (double q : nr.ratios) worst = std::max(worst, q);
  rep.below("model_pde.newton_ratio_bounded", worst, 1e3);

  emit_csv(sol, detail::out_path(out, "model_pde_solution.csv"));
  emit_csv(sum, detail::out_path(out, "model_pde_summary.csv"));
  return rep;
}

// ---------------------------------------------------------------------------

inline RunReport run_geodesics(const Config& c, const std::string& out) {
  double m = detail::physical_mass(c);
  GeodesicConfig gc;
  gc.s0 = c.num("geodesic_s0");
  gc.nodes = c.integer("geodesic_nodes");
  if (gc.s0 < 4 || gc.nodes < 16) throw ConfigError("geodesic_s0 >= 4 and geodesic_nodes >= 16 required");
  Vec4 target{0.0, c.num("target_u"), c.num("target_theta"), c.num("target_phi")};
  if (!(target[2] > 0 && target[2] < std::numbers::pi)) throw ConfigError("target_theta must lie in (0, pi)");
  auto tr = integrate_radial_null_geodesic(schwarzschild_metric(m), m, target, gc);

  Table t({"s", "x0", "x1", "x2", "x3", "v0", "v1", "v2", "v3", "nullnorm"});
  double drift = 0;
  for (size_t i = 0; i < tr.s.size(); ++i) {
    const auto &x = tr.x[i], &v = tr.v[i];
    t.add({tr.s[i], x[0], x[1], x[2], x[3], v[0], v[1], v[2], v[3], tr.null_norm[i]});
    for (int a = 1; a < 4; ++a) drift = std::max(drift, std::fabs(x[a] - target[a]));
  }
  emit_csv(t, detail::out_path(out, "trajectory.csv"));

  RunReport rep;
  rep.below("geodesics.null_norm", tr.max_null_norm(), c.num("tol_null"));
  rep.below("geodesics.x1_xa_constant", drift, c.num("tol_constant"));
  rep.near("geodesics.v0_at_far_end", 1.0, tr.v.back()[0], 1e-6);
  Vec4 p = point_at(40.0, target[1], target[2], target[3], m);
  rep.near("geodesics.retarded_time", target[1], retarded_time(schwarzschild_metric(m), m, p, gc), c.num("tol_constant"));
  return rep;
}

// ---------------------------------------------------------------------------

inline std::vector<NewsProfile> news_profiles(double amp, double width) {
  NewsProfile gauss{[=](double u) { return amp * std::exp(-u * u / (2 * width * width)); },
                    [](const Jet& th, const Jet&) { return cos(th) * cos(th); }};
  // compactly supported bump squared times an m = 2 potential
  NewsProfile bumped{[=](double u) {
                       double z = u / (4 * width);
                       double b = bump(z);
                       return 0.5 * amp * b * b;
                     },
                     [](const Jet& th, const Jet& ph) { return sin(th) * sin(th) * cos(2.0 * ph); }};
  return {gauss, bumped};
}

inline RunReport run_bondi(const Config& c, const std::string& out) {
  double m = detail::physical_mass(c);
  SphereQuadrature q(c.integer("quad_theta"), c.integer("quad_phi"));
  RunReport rep;

  auto g = schwarzschild_metric(m);
  Table hk({"r", "M_H"});
  for (double r : c.list("hawking_radii")) {
    if (!(r > 2 * m + 1)) throw ConfigError("hawking_radii must lie well outside r = 2m");
    double mh = hawking_mass(g, m, 0.5, r, q);
    hk.add({r, mh});
    rep.near(fmt::format("bondi.hawking_mass(r={})", r), m, mh, c.num("tol_hawking"));
  }
  emit_csv(hk, detail::out_path(out, "hawking.csv"));

  double umin = c.num("u_min"), umax = c.num("u_max");
  int steps = c.integer("u_steps");
  if (!(umax > umin) || steps < 2) throw ConfigError("u grid: need u_max > u_min and u_steps >= 2");
  std::vector<double> ug;
  for (int k = 0; k <= steps; ++k) ug.push_back(umin + (umax - umin) * k / steps);
  auto profiles = news_profiles(c.num("news_amplitude"), c.num("news_width"));
  for (size_t p = 0; p < profiles.size(); ++p) {
    BondiReport br;
    try {
      br = evolve_mass_aspect(profiles[p], m, ug, transport_constant(), q);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    Table t({"u", "M_B", "E", "budget_residual"});
    bool mono = true;
    for (size_t k = 0; k < br.u.size(); ++k) {
      t.add({br.u[k], br.M_B[k], br.E[k], br.budget_residual[k]});
      if (k > 0 && br.M_B[k] > br.M_B[k - 1] + 1e-14) mono = false;
    }
    emit_csv(t, detail::out_path(out, p == 0 ? "bondi_report.csv" : fmt::format("bondi_report_{}.csv", p + 1)));
    rep.near(fmt::format("bondi.M_B_start(profile={})", p + 1), m, br.M_B.front(), 1e-14);
    rep.below(fmt::format("bondi.budget(profile={})", p + 1), std::fabs(br.budget_residual.back()), c.num("tol_budget"));
    rep.truth(fmt::format("bondi.M_B_nonincreasing(profile={})", p + 1), mono);
  }
  rep.near("bondi.scattering_limit", -0.25, scattering_limit(), c.num("tol_scattering"));
  return rep;
}

// ---------------------------------------------------------------------------

inline RunReport run_verify_appendix(const Config& c, const std::string& out) {
  AppendixConfig ac;
  ac.m = c.num("appendix_mass");
  if (!(ac.m > 0.0 && ac.m < 1.0)) throw ConfigError("appendix_mass must lie in (0, 1)");
  ac.samples = c.integer("appendix_samples");
  ac.slack = c.num("appendix_slack");
  ac.rhoI_min = c.num("appendix_rhoI_min");
  ac.rhoI_max = c.num("appendix_rhoI_max");
  if (ac.samples < 3 || !(ac.rhoI_min < ac.rhoI_max)) throw ConfigError("appendix sampling window is empty");
  RunReport rep;
  Table t({"perturbation", "line", "fitted_exponent", "stated_weight", "exact", "pass"});
  for (auto& h : manufactured_perturbations()) {
    bool all = true;
    for (auto& r : verify_appendix(h, ac)) {
      t.add({h.name, r.line_id, r.fitted_exponent, r.stated_weight, r.exact ? 1.0 : 0.0, r.pass ? 1.0 : 0.0});
      all = all && r.pass;
    }
    rep.truth("appendix." + h.name, all);
  }
  emit_csv(t, detail::out_path(out, "appendix.csv"));
  return rep;
}

// ---------------------------------------------------------------------------

inline RunReport run_subcommand(const std::string& sub, const Config& c, const std::string& out) {
  if (sub == "index-sets") return run_index_sets(c, out);
  if (sub == "model-pde") return run_model_pde(c, out);
  if (sub == "geodesics") return run_geodesics(c, out);
  if (sub == "bondi") return run_bondi(c, out);
  if (sub == "verify-appendix") return run_verify_appendix(c, out);
  throw ConfigError("unknown subcommand " + sub);
}

// independent pipelines, at most `jobs` at a time; reports merge in subcommand order
inline RunReport run_all(const Config& c, const std::string& out, int jobs) {
  std::vector<RunReport> parts(kSubcommands.size());
  size_t next = 0;
  while (next < kSubcommands.size()) {
    std::vector<std::future<RunReport>> batch;
    size_t first = next;
    for (int j = 0; j < std::max(1, jobs) && next < kSubcommands.size(); ++j, ++next)
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                 [&, k = next] { return run_subcommand(kSubcommands[k], c, out); }));
    for (size_t j = 0; j < batch.size(); ++j) parts[first + j] = batch[j].get();
  }
  RunReport all;
  for (auto& p : parts) all.merge(p);
  return all;
}

}  // namespace scri
