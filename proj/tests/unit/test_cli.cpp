/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path fixtures = COMPASS_FIXTURE_DIR;

struct Run {
  int status;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string &name) {
  auto d = fs::temp_directory_path() / ("compass_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

Run compass(const std::string &args, const fs::path &dir) {
  const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string("'") + COMPASS_CLI + "' " + args + " >'" + out.string() +
                          "' 2>'" + err.string() + "'";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

std::string fixture(const std::string &name) { return (fixtures / name).string(); }

} // namespace

TEST(Cli, UsageErrors) {
  const auto d = scratch_dir("usage");
  EXPECT_EQ(compass("", d).status, 64);
  EXPECT_EQ(compass("frobnicate", d).status, 64);
  EXPECT_EQ(compass("scan --bogus", d).status, 64);
  EXPECT_EQ(compass("--config /nonexistent.json scan", d).status, 64);
  EXPECT_EQ(compass("--help", d).status, 0);
}

TEST(Cli, MissingFixtureIsTwo) {
  const auto d = scratch_dir("missing");
  EXPECT_EQ(compass("scan --fixture /nonexistent/x.fcidump --output-dir " + d.string(), d).status, 2);
  EXPECT_EQ(compass("scan --fixture '" + (fixtures / "zz_*.fcidump").string() + "' --output-dir " +
                        d.string(),
                    d)
                .status,
            2);
  EXPECT_EQ(compass("scan --output-dir " + d.string(), d).status, 2);
}

TEST(Cli, BadArgumentsAreThree) {
  const auto d = scratch_dir("bad");
  EXPECT_EQ(compass("--method adapt scan --fixture " + fixture("h2_sto3g_74.fcidump"), d).status, 3);
  EXPECT_EQ(compass("--sector XX screen --fixture " + fixture("h2_sto3g_74.fcidump"), d).status, 3);
}

TEST(Cli, ScanWritesOutputs) {
  const auto d = scratch_dir("scan");
  const auto r = compass("scan --fixture " + fixture("h2_sto3g_74.fcidump") + " --output-dir " +
                             (d / "out").string(),
                         d);
  ASSERT_EQ(r.status, 0) << r.err;
  const auto csv = slurp(d / "out" / "scan.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "geometry,R_angstrom,method,energy_hartree,error_hartree,error_kcal_mol,parameters,"
            "iterations,converged,wall_seconds");
  EXPECT_NE(csv.find("COMPASS(5,7)-OP"), std::string::npos);
  const auto summary = json::parse(slurp(d / "out" / "summary.json"));
  EXPECT_TRUE(summary["methods"].contains("UCCSD"));
}

TEST(Cli, AnsatzThenScanFromAnsatzReproducesEnergy) {
  const auto d = scratch_dir("roundtrip");
  const auto fx = fixture("bh_sto3g_150.fcidump");
  ASSERT_EQ(compass("ansatz --method compass --fixture " + fx + " --output-dir " + (d / "a").string(), d)
                .status,
            0);
  const auto file = d / "a" / "bh_sto3g_150__compass_5_7_op__ansatz.json";
  ASSERT_TRUE(fs::exists(file));

  ASSERT_EQ(compass("scan --method compass --method fci --fixture " + fx + " --output-dir " +
                        (d / "direct").string(),
                    d)
                .status,
            0);
  ASSERT_EQ(compass("scan --method fci --from-ansatz " + file.string() + " --output-dir " +
                        (d / "stored").string(),
                    d)
                .status,
            0);
  auto energy_of = [](const fs::path &p) {
    return json::parse(slurp(p))["energy"].get<double>();
  };
  const double direct = energy_of(d / "direct" / "results" / "bh_sto3g_150__compass_5_7_op.json");
  const double stored = energy_of(d / "stored" / "results" / "bh_sto3g_150__compass_5_7_op.json");
  EXPECT_NEAR(direct, stored, 1e-12);
}

TEST(Cli, ScreenReportIsEnergyOrdered) {
  const auto d = scratch_dir("screen");
  const auto r = compass("screen --fixture " + fixture("bh_sto3g_200.fcidump") + " --output-dir " +
                             d.string(),
                         d);
  ASSERT_EQ(r.status, 0) << r.err;
  const auto doc = json::parse(slurp(d / "bh_sto3g_200__screen.json"));
  const auto &blocks = doc["blocks"];
  ASSERT_FALSE(blocks.empty());
  for (std::size_t k = 1; k < blocks.size(); ++k)
    EXPECT_GE(blocks[k - 1]["delta_e"].get<double>(), blocks[k]["delta_e"].get<double>());
  EXPECT_NE(r.out.find("tau["), std::string::npos);
}

TEST(Cli, FciAndNoise) {
  const auto d = scratch_dir("noise");
  const auto fx = fixture("h2_sto3g_74.fcidump");
  ASSERT_EQ(compass("fci --fixture " + fx + " --output-dir " + (d / "f").string(), d).status, 0);
  ASSERT_EQ(compass("scan --method uccsd --method fci --fixture " + fx + " --output-dir " +
                        (d / "s").string(),
                    d)
                .status,
            0);
  const auto result = d / "s" / "results" / "h2_sto3g_74__uccsd.json";
  const auto r = compass("--seed 4 --output-dir " + (d / "n").string() + " noise --result " +
                             result.string() + " --sd 0.001 --samples 10",
                         d);
  ASSERT_EQ(r.status, 0) << r.err;
  const auto csv = slurp(d / "n" / "noise.csv");
  EXPECT_NE(csv.find(",0.001,"), std::string::npos);
  EXPECT_NE(csv.find(",10,4,"), std::string::npos);
  EXPECT_EQ(compass("noise --result /nonexistent.json", d).status, 2);
}

TEST(Cli, FcidumpCheck) {
  const auto d = scratch_dir("check");
  const auto ok = compass("fcidump-check " + fixture("h2o_sto3g_100.fcidump"), d);
  EXPECT_EQ(ok.status, 0);
  EXPECT_NE(ok.out.find("NELEC=8"), std::string::npos);

  auto text = slurp(fixtures / "h2_sto3g_74.fcidump");
  const auto pos = text.find("&END");
  ASSERT_NE(pos, std::string::npos);
  const auto line_end = text.find('\n', pos);
  text.insert(line_end + 1, " not-a-number 1 1 1 1\n");
  std::ofstream(d / "broken.fcidump") << text;
  const auto bad = compass("fcidump-check " + (d / "broken.fcidump").string(), d);
  EXPECT_EQ(bad.status, 3);
  EXPECT_NE(bad.err.find("line "), std::string::npos);

  EXPECT_EQ(compass("fcidump-check /nonexistent.fcidump", d).status, 2);
}
