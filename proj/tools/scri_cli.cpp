// scri: run the experiment pipelines from a key = value config.
// exit 0 all checks pass, 1 some check failed, 2 config or IO problem

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "scri/pipelines.hpp"

namespace {

const std::map<std::string, std::vector<std::string>> kCheckCatalog{
    {"index-sets", {"index_sets.denominators", "index_sets.EIbar_contains_0", "index_sets.EIprime_subset_EIbar",
                    "index_sets.EI.k(j)", "index_sets.EIprime.k(j)", "index_sets.Eplus.k(j)"}},
    {"model-pde", {"model_pde.exponent(gamma)", "model_pde.order(gamma)", "model_pde.undamped_leading_nonzero",
                   "model_pde.toy_log_coefficient_resolved", "model_pde.toy_log_coefficient_off",
                   "model_pde.newton_ratio_bounded"}},
    {"geodesics", {"geodesics.null_norm", "geodesics.x1_xa_constant", "geodesics.v0_at_far_end",
                   "geodesics.retarded_time"}},
    {"bondi", {"bondi.hawking_mass(r)", "bondi.M_B_start(profile)", "bondi.budget(profile)",
               "bondi.M_B_nonincreasing(profile)", "bondi.scattering_limit"}},
    {"verify-appendix", {"appendix.<perturbation>"}},
};

int run(const std::string& sub, const std::string& config, const std::string& out, int jobs, bool list) {
  if (list) {
    for (auto& s : scri::kSubcommands)
      if (sub == "all" || sub == s)
        for (auto& c : kCheckCatalog.at(s)) std::cout << s << '\t' << c << '\n';
    return 0;
  }
  scri::RunReport rep;
  try {
    scri::Config cfg = scri::make_config(sub);
    if (!config.empty()) cfg.parse_file(config);
    else if (!scri::required_keys(sub).empty()) throw scri::ConfigError("--config is required for " + sub);
    std::filesystem::create_directories(out);
    rep = sub == "all" ? scri::run_all(cfg, out, jobs) : scri::run_subcommand(sub, cfg, out);
    std::string name = sub == "all" ? "report.csv" : "report_" + sub + ".csv";
    scri::emit_csv(rep.table(), (std::filesystem::path(out) / name).string());
  } catch (const scri::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const scri::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return 1;
  }
  for (auto& c : rep.checks)
    std::cout << (c.pass ? "pass " : "FAIL ") << c.name << "  got " << fmt::format("{:.6g}", c.got) << '\n';
  std::cout << (rep.pass() ? "all checks passed" : "some checks failed") << '\n';
  return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"experiments near null infinity"};
  app.require_subcommand(1);
  std::string config, out = "out";
  int jobs = 1;
  bool list = false;
  app.add_option("--config", config, "key = value config file");
  app.add_option("--out", out, "output directory");
  app.add_option("--jobs", jobs, "concurrent pipelines for 'all'")->check(CLI::Range(1, 64));
  app.add_flag("--list-checks", list, "print the checks a subcommand runs and exit");
  std::vector<std::string> subs = scri::kSubcommands;
  subs.push_back("all");
  for (auto& s : subs) app.add_subcommand(s, "run the " + s + " pipeline")->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  return run(app.get_subcommands().front()->get_name(), config, out, jobs, list);
}
