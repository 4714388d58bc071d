#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

#include "scri/pipelines.hpp"

using namespace scri;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("scri_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

int run_cli(const std::string& args) {
  int rc = std::system((std::string(SCRI_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Csv, EmptyTableWritesHeaderOnly) {
  auto d = scratch("empty");
  Table t({"a", "b"});
  emit_csv(t, (d / "t.csv").string());
  EXPECT_EQ(slurp(d / "t.csv"), "a,b\n");
  auto back = read_csv((d / "t.csv").string());
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_TRUE(back.rows.empty());
}

TEST(Csv, RoundTripIsExact) {
  auto d = scratch("round");
  Table t({"name", "x"});
  t.add({std::string("alpha"), 0.1});
  t.add({std::string("beta"), 1.0 / 3.0});
  t.add({std::string("gamma"), -2.5e-300});
  emit_csv(t, (d / "t.csv").string());
  auto back = read_csv((d / "t.csv").string());
  ASSERT_EQ(back.rows.size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(std::get<std::string>(back.rows[i][0]), std::get<std::string>(t.rows[i][0]));
    EXPECT_EQ(std::get<double>(back.rows[i][1]), std::get<double>(t.rows[i][1]));
  }
  emit_csv(back, (d / "u.csv").string());
  EXPECT_EQ(slurp(d / "t.csv"), slurp(d / "u.csv"));
  EXPECT_THROW(t.add({0.0}), std::invalid_argument);
  EXPECT_THROW(read_csv((d / "missing.csv").string()), IoError);
}

TEST(Config, DefaultsAndOverrides) {
  Config c = make_config("bondi");
  c.parse_string("mass = 0.25  # comment\n\nu_steps = 50\nhawking_radii = 10, 20\n");
  EXPECT_EQ(c.num("mass"), 0.25);
  EXPECT_EQ(c.integer("u_steps"), 50);
  EXPECT_EQ(c.list("hawking_radii"), (std::vector<double>{10, 20}));
  EXPECT_EQ(c.num("news_width"), 0.5);
}

TEST(Config, Errors) {
  {
    Config c = make_config("bondi");
    try {
      c.parse_string("mass = 0.1\nmas = 0.2\n");
      FAIL();
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find("unknown key 'mas'"), std::string::npos);
    }
  }
  {
    Config c = make_config("geodesics");
    try {
      c.parse_string("target_u = 0.5\n");
      FAIL();
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find("missing required key 'mass'"), std::string::npos);
    }
  }
  Config c = make_config("index-sets");
  EXPECT_NO_THROW(c.parse_string(""));
  EXPECT_THROW(c.parse_string("index_N\n"), ConfigError);
  c.parse_string("index_N = 2.5\n");
  EXPECT_THROW(c.integer("index_N"), ConfigError);
  c.parse_string("index_N = x\n");
  EXPECT_THROW(c.num("index_N"), ConfigError);
}

TEST(Pipelines, IndexSetsDeterministicBytes) {
  auto a = scratch("idx_a"), b = scratch("idx_b");
  Config c = make_config("index-sets");
  auto ra = run_index_sets(c, a.string());
  run_index_sets(c, b.string());
  EXPECT_TRUE(ra.pass());
  EXPECT_EQ(slurp(a / "index_sets.csv"), slurp(b / "index_sets.csv"));
  auto t = read_csv((a / "index_sets.csv").string());
  EXPECT_EQ(t.columns, (std::vector<std::string>{"set", "power", "log_order"}));
}

TEST(Pipelines, BadValuesAreConfigErrors) {
  auto d = scratch("bad");
  Config c = make_config("index-sets");
  c.parse_string("index_E00 = 1/2;oops\n");
  EXPECT_THROW(run_index_sets(c, d.string()), ConfigError);
  Config g = make_config("geodesics");
  g.parse_string("mass = 1.5\n");
  EXPECT_THROW(run_geodesics(g, d.string()), ConfigError);
  Config a = make_config("verify-appendix");
  a.parse_string("appendix_mass = 0\n");
  EXPECT_THROW(run_verify_appendix(a, d.string()), ConfigError);
}

TEST(Pipelines, AppendixDefaultsPassWithoutMass) {
  auto d = scratch("app");
  Config c = make_config("verify-appendix");
  c.parse_string("");
  EXPECT_TRUE(run_verify_appendix(c, d.string()).pass());
}

TEST(Cli, ExitCodes) {
  auto d = scratch("cli");
  EXPECT_EQ(run_cli("index-sets --out " + d.string()), 0);
  EXPECT_TRUE(fs::exists(d / "index_sets.csv"));
  EXPECT_TRUE(fs::exists(d / "report_index-sets.csv"));
  EXPECT_EQ(run_cli("geodesics --config " + std::string(SCRI_DATA_DIR) + "/missing_mass.cfg --out " + d.string()), 2);
  EXPECT_EQ(run_cli("geodesics --out " + d.string()), 2);
  EXPECT_EQ(run_cli("no-such-subcommand"), 2);
  EXPECT_EQ(run_cli("index-sets --list-checks"), 0);
}
