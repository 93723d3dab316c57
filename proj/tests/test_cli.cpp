#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dslpn/cli.hpp"
#include "dslpn/params.hpp"

using namespace dslpn;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "dslpn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = runCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// "name   value" rows of the printed table.
std::map<std::string, std::string> rows(const std::string& text) {
  std::map<std::string, std::string> m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("[table ", 0) == 0) break;
    const auto sp = line.find(' ');
    if (sp == std::string::npos) {
      m[line] = "";
      continue;
    }
    const auto val = line.find_first_not_of(' ', sp);
    m[line.substr(0, sp)] = val == std::string::npos ? "" : line.substr(val);
  }
  return m;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "dslpn_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, UnknownSubcommandPrintsUsage) {
  const CliRun r = run({"frobnicate"});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("Usage:"), std::string::npos);
  EXPECT_EQ(run({}).code, kExitInvalid);
  EXPECT_EQ(run({"params"}).code, kExitInvalid);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, InvalidInputExitsOne) {
  EXPECT_EQ(run({"params", "derive", "--scheme", "rsa"}).code, kExitInvalid);
  EXPECT_EQ(run({"params", "derive", "--k", "x"}).code, kExitInvalid);
  EXPECT_EQ(run({"bias", "estimate", "--seed", "nothex"}).code, kExitInvalid);
  EXPECT_EQ(run({"bias", "estimate", "--w", "0"}).code, kExitInvalid);
  EXPECT_EQ(run({"crhf", "hash"}).code, kExitInvalid);  // no --key
  EXPECT_EQ(run({"ltdf", "eval", "--key", scratch("missing.key").string()}).code, kExitInvalid);
}

TEST(Cli, ParamsDeriveLtdfRowsSatisfyInvariants) {
  const CliRun r = run({"params", "derive", "--scheme", "ltdf", "--k", "6", "--gamma", "1.5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto v = rows(r.out);
  using namespace params;
  // Rebuild the parameter set from the printed rows only and re-check it.
  LtdfParams p;
  p.regime.k = std::stoul(v.at("k"));
  p.regime.D = parseRational(v.at("D"));
  p.regime.n = std::stoull(v.at("n"));
  p.regime.m = std::stoull(v.at("m"));
  p.regime.t = std::stoull(v.at("t"));
  p.mode = RegimeMode::kAsymptotic;
  p.s = std::stoul(v.at("s"));
  p.L = std::stoull(v.at("L"));
  p.Gamma = parseRational(v.at("Gamma"));
  p.Dprime = parseRational(v.at("Dprime"));
  p.rhoC = parseRational(v.at("rhoC"));
  p.deltaC = parseRational(v.at("deltaC"));
  p.gamma = std::strtod(v.at("gamma").c_str(), nullptr);
  p.alpha = std::strtod(v.at("alpha").c_str(), nullptr);
  p.ell = std::stoull(v.at("ell"));
  p.eps = std::strtod(v.at("eps").c_str(), nullptr);
  EXPECT_TRUE(checkLtdf(p).empty());
  EXPECT_EQ(p.Gamma, Rational(3, 2));
  EXPECT_EQ(p.regime.k, 6u);
  EXPECT_EQ(p.L, p.regime.t * p.s);
  EXPECT_EQ(p.regime.m, p.regime.t << p.s);
  EXPECT_LE(p.gamma, toDouble(p.deltaC));
  EXPECT_GT(p.eps, 0);
  EXPECT_LT(p.eps, 0.5);
  EXPECT_EQ(v.at("compression.pass"), "true");
  EXPECT_EQ(v.at("invariants_ok"), "true");
}

TEST(Cli, ParamsDeriveCrhfCompresses) {
  const CliRun r = run({"params", "derive", "--scheme", "crhf", "--k", "3", "--mode", "exact", "--max-n", "2048"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto v = rows(r.out);
  EXPECT_LT(std::stoull(v.at("out_len")) + 2 * std::stoull(v.at("lambda")), std::stoull(v.at("ttilde")));
}

TEST(Cli, ConfigFileThenOverridesAndReportEcho) {
  const auto cfg = scratch("bias.cfg"), out = scratch("bias.txt");
  std::ofstream(cfg) << "# planted test\nn = 12\nm = 24\nw = 5\neps = 1/10\ntrials = 2000\n";
  const CliRun r = run({"--config", cfg.string(), "bias", "estimate", "--w", "3", "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string report = slurp(out);
  EXPECT_NE(report.find("config.w=3\n"), std::string::npos);
  EXPECT_NE(report.find("config.n=12\n"), std::string::npos);
  EXPECT_NE(report.find("registry_version="), std::string::npos);
  EXPECT_EQ(rows(r.out).at("trials"), "2000");

  std::ofstream(cfg) << "unknown-key = 1\n";
  EXPECT_EQ(run({"--config", cfg.string(), "bias", "estimate"}).code, kExitInvalid);
}

TEST(Cli, ReportsIndependentOfWorkersAndSeedFromEnvironment) {
  const auto a = scratch("dd1.txt"), b = scratch("dd2.txt"), c = scratch("dd3.txt");
  const std::vector<std::string> base = {"dualdist", "--n", "32", "--m", "128", "--k", "3", "--trials", "40"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  ASSERT_EQ(run(with({"--seed", "abc", "--workers", "1", "--out", a.string()})).code, kExitOk);
  ASSERT_EQ(run(with({"--seed", "abc", "--workers", "3", "--out", b.string()})).code, kExitOk);
  EXPECT_EQ(slurp(a), slurp(b));
  ::setenv("DSLPN_SEED", "abc", 1);
  ASSERT_EQ(run(with({"--out", c.string()})).code, kExitOk);
  ::unsetenv("DSLPN_SEED");
  EXPECT_EQ(slurp(a), slurp(c));
}

TEST(Cli, LtdfFilesRoundTrip) {
  const auto key = scratch("micro.key").string(), td = scratch("micro.td").string();
  ASSERT_EQ(run({"ltdf", "keygen", "--preset", "micro", "--branch", "3", "--key", key, "--trapdoor", td}).code,
            kExitOk);
  const CliRun e = run({"ltdf", "eval", "--key", key, "--branch", "0x2a", "--x", "1f"});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  const std::string y = rows(e.out).at("y");
  const CliRun i = run({"ltdf", "invert", "--key", key, "--trapdoor", td, "--branch", "2a", "--y", y});
  ASSERT_EQ(i.code, kExitOk) << i.err;
  EXPECT_EQ(rows(i.out).at("x"), "01f");
  // The lossy branch is rejected as invalid input.
  EXPECT_EQ(run({"ltdf", "invert", "--key", key, "--trapdoor", td, "--branch", "3", "--y", y}).code, kExitInvalid);
  // A string that is not an image under the branch is a failed check.
  std::string bad = y;
  for (char& ch : bad) ch = ch == '0' ? '1' : '0';
  bad[0] = '0';
  EXPECT_EQ(run({"ltdf", "invert", "--key", key, "--trapdoor", td, "--branch", "2a", "--y", bad}).code,
            kExitCheckFailed);
}

TEST(Cli, CrhfCollideNeedsExhaustive) {
  const auto key = scratch("crhf.key").string();
  ASSERT_EQ(run({"crhf", "keygen", "--n", "12", "--k", "3", "--t", "4", "--s", "2", "--D", "4", "--lambda", "1",
                 "--debug", "--key", key})
                .code,
            kExitOk);
  EXPECT_EQ(run({"crhf", "collide", "--key", key}).code, kExitInvalid);
  const CliRun r = run({"crhf", "collide", "--key", key, "--exhaustive"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(rows(r.out).at("inputs"), "256");
}
