#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "modlie/cli.hpp"
#include "support.hpp"

using namespace modlie;
namespace fs = std::filesystem;
using modlie::testing::ExprGen;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "modlie");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path kGolden = fs::path(MODLIE_SOURCE_DIR) / "tests" / "golden" / "struct-table";

}  // namespace

TEST(Cli, NormalFormOnSl2) {
  CliResult r = run_cli({"normalform", "x(+e1) x(-e1)", "--family", "A", "--rank", "1", "--p", "7"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "x(-e1) x(+e1) + h(e1)\n");
}

TEST(Cli, CentralExitCodes) {
  CliResult yes = run_cli({"central", "(h(e1)+1)^2 + 4 x(-e1) x(+e1)", "--family", "A", "--rank", "1", "--p", "7"});
  EXPECT_EQ(yes.code, 0);
  EXPECT_EQ(yes.out, "true\n");
  CliResult no = run_cli({"central", "x(+e1)", "--family", "A", "--rank", "1", "--p", "7"});
  EXPECT_EQ(no.code, 1);
  EXPECT_NE(no.out.find("false"), std::string::npos);
}

TEST(Cli, ParserErrors) {
  try {
    parse("x(+e1");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SyntaxError);
    EXPECT_NE(std::string(e.what()).find("column 2"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("unclosed"), std::string::npos);
  }
  try {
    parse("2 +\n  (x(e1) ", nullptr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2, column 3"), std::string::npos) << e.what();
  }
  RootSystem rs = build_root_system(Family::B, 2);
  try {
    parse("x(+e3)", &rs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownRoot);
  }
  EXPECT_THROW(parse("x(+e1) +"), Error);
  EXPECT_THROW(parse("x(+e1)^"), Error);
  EXPECT_THROW(parse("x(e1-e1)"), Error);
  EXPECT_EQ(run_cli({"normalform", "x(+e1", "--family", "A", "--rank", "1"}).code, 2);
}

TEST(Cli, GrammarForms) {
  RootSystem rs = build_root_system(Family::B, 2);
  EXPECT_EQ(*parse("x(e1)*x(-e1)", &rs), *parse("x(+e1) x(-e1)", &rs));
  EXPECT_EQ(to_string(*parse("-x(e1) + 2 h(1)^2")), "-x(+e1) + 2 h(1)^2");
  EXPECT_EQ(to_string(*parse("[x(e1), x(e2)] (h(e1-e2))")), "[x(+e1), x(+e2)] h(e1-e2)");
  EXPECT_EQ(to_string(*parse("(x(e1) + 1)^2")), "(x(+e1) + 1)^2");
  LieAlgebra L(rs, 7);
  Enveloping E(L);
  EXPECT_EQ(eval(*parse("[x(e2), x(e1-e2)]", &rs), E), scaled(E.root_vector(Root({1, 0})), -1));
  EXPECT_EQ(eval(*parse("h(2)", &rs), E), eval(*parse("h(e2)", &rs), E));
}

TEST(Cli, RoundTripCorpus) {
  ExprGen g(2024);
  RootSystem rs = build_root_system(Family::B, 2);
  LieAlgebra L(rs, 7);
  Enveloping E(L);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    ExprPtr e = g.gen(4);
    std::string s1 = to_string(*e);
    ExprPtr p1 = parse(s1, &rs);
    ExprPtr p2 = parse(to_string(*p1), &rs);
    ASSERT_EQ(*p1, *e) << s1;
    ASSERT_EQ(*p2, *p1) << s1;
    EXPECT_EQ(to_string(*p2), s1);
    if (i < 120) EXPECT_EQ(eval(*p1, E), eval(*e, E));
    ++checked;
  }
  EXPECT_GE(checked, 100);
}

TEST(Cli, StructTableGoldens) {
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(kGolden)) {
    std::string stem = entry.path().stem().string();  // e.g. B2-p7
    auto dash = stem.find("-p");
    std::string fam = stem.substr(0, 1), rank = stem.substr(1, dash - 1), p = stem.substr(dash + 2);
    CliResult r = run_cli({"struct-table", "--family", fam, "--rank", rank, "--p", p});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, slurp(entry.path())) << stem;
    ++compared;
  }
  EXPECT_GE(compared, 5);
}

TEST(Cli, ConfigFile) {
  cli::RunConfig cfg;
  std::istringstream in("# comment\nfamily = B\nrank = 3  # trailing\n\np=11\ncase = II\n");
  cli::load_config(cfg, in);
  EXPECT_EQ(cfg.rank, 3);
  EXPECT_EQ(cfg.p, 11);
  EXPECT_EQ(cfg.lee_case, "II");
  std::istringstream bad("rank = 2\ncolour = blue\n");
  try {
    cli::load_config(cfg, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Config);
  }
  std::istringstream junk("rank two\n");
  EXPECT_THROW(cli::load_config(cfg, junk), Error);
  std::istringstream notint("rank = two\n");
  EXPECT_THROW(cli::load_config(cfg, notint), Error);

  fs::path path = fs::current_path() / "cli_test_config.txt";
  {
    std::ofstream f(path);
    f << "family = A\nrank = 1\np = 7\n";
  }
  CliResult a = run_cli({"normalform", "x(+e1) x(-e1)", "--config", path.string()});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, "x(-e1) x(+e1) + h(e1)\n");
  CliResult b = run_cli({"roots", "--config", path.string(), "--family", "B", "--rank", "2"});
  EXPECT_EQ(b.code, 0);
  EXPECT_EQ(b.out.substr(0, 2), "B2");
  {
    std::ofstream f(path);
    f << "family = A\nbogus = 1\n";
  }
  EXPECT_EQ(run_cli({"roots", "--config", path.string()}).code, 2);
  fs::remove(path);
  EXPECT_EQ(run_cli({"roots", "--config", "/nonexistent/modlie.cfg"}).code, 2);
}

TEST(Cli, ExitCodeFixtures) {
  EXPECT_EQ(run_cli({"roots", "--family", "B", "--rank", "3"}).code, 0);
  EXPECT_EQ(run_cli({"irreducible", "--family", "A", "--rank", "1", "--p", "7"}).code, 0);
  EXPECT_EQ(run_cli({"irreducible", "--family", "A", "--rank", "1", "--p", "7", "--chi", "zero"}).code, 1);
  CliResult inc = run_cli({"irreducible", "--family", "B", "--rank", "2", "--p", "7", "--budget", "0"});
  EXPECT_EQ(inc.code, 3) << inc.out << inc.err;
  EXPECT_EQ(run_cli({"baby-verma", "--family", "A", "--rank", "1", "--p", "7", "--lambda", "3"}).code, 0);
  EXPECT_EQ(run_cli({"check-subalgebra", "--family", "B", "--rank", "2", "--p", "7", "x(e1)", "x(e2)"}).code, 1);
  EXPECT_EQ(run_cli({"check-subalgebra", "--family", "B", "--rank", "3", "--p", "7"}).code, 0);
  EXPECT_EQ(run_cli({"verify-lee", "--family", "B", "--rank", "3", "--p", "7", "--case", "II"}).code, 0);
  EXPECT_EQ(run_cli({"verify-lee", "--family", "B", "--rank", "2", "--p", "11", "--case", "I"}).code, 1);
  // usage and configuration errors
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"roots", "--rank", "x"}).code, 2);
  EXPECT_EQ(run_cli({"roots", "--frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"roots", "--family", "Q"}).code, 2);
  EXPECT_EQ(run_cli({"struct-table", "--p", "4"}).code, 2);
  EXPECT_EQ(run_cli({"verify-lee", "--case", "III"}).code, 2);
  EXPECT_EQ(run_cli({"baby-verma", "--family", "A", "--rank", "1", "--chi", "h(1)=1"}).code, 2);
  EXPECT_EQ(run_cli({"help-me"}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, CharacterAndWeightFlags) {
  CliResult r = run_cli({"baby-verma", "--family", "B", "--rank", "2", "--p", "7", "--chi", "x(-e2)=1", "--lambda",
                   "h(1)=2,h(2)=4", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["dim"], 2401);
  EXPECT_EQ(j["lambda"], nlohmann::json::array({2, 4}));
  EXPECT_EQ(j["chi"]["x(-e2)"], 1);
  EXPECT_EQ(j["chi"].size(), 1u);
}

TEST(Cli, VerifyLeeReportsAreDeterministic) {
  fs::path a = fs::current_path() / "verify_lee_a.json", b = fs::current_path() / "verify_lee_b.json";
  std::vector<std::string> args{"verify-lee", "--family", "B", "--rank", "2", "--p", "11", "--case", "I", "--seed", "7"};
  auto with = [&](const fs::path& out) {
    auto v = args;
    v.push_back("--out");
    v.push_back(out.string());
    return run_cli(v);
  };
  CliResult ra = with(a), rb = with(b);
  EXPECT_EQ(ra.code, rb.code);
  EXPECT_EQ(ra.out, rb.out);
  std::string ja = slurp(a), jb = slurp(b);
  EXPECT_FALSE(ja.empty());
  EXPECT_EQ(ja, jb);
  auto j = nlohmann::json::parse(ja);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["command"], "verify-lee");
  EXPECT_EQ(j["summary"]["counts"]["oracle_inconsistent"], 0);
  EXPECT_EQ(j["B_i"]["vectors"].size(), 8u);
  for (const auto& s : j["specs"]) {
    EXPECT_TRUE(s.contains("template"));
    if (s["verdict"] != "NotApplicable") {
      EXPECT_TRUE(s.contains("machine_form"));
      EXPECT_TRUE(s["rep_cross_check"]["consistent"].get<bool>());
    }
  }
  fs::remove(a);
  fs::remove(b);
}

TEST(Cli, IndependenceCommand) {
  CliResult r = run_cli({"independence", "--family", "B", "--rank", "2", "--p", "11", "--case", "II", "--bound", "1",
                   "--rep", "adjoint", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["independence"]["count"], 9);
  EXPECT_EQ(j["independence"]["rank"], 9);
  CliResult ex = run_cli({"independence", "--family", "B", "--rank", "2", "--p", "7", "--case", "II", "--bound", "1"});
  EXPECT_EQ(ex.code, 1);
  EXPECT_NE(ex.out.find("ExhaustedField"), std::string::npos);
}
