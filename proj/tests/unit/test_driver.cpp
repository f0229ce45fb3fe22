/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "compass/driver.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace compass;
using namespace compass::driver;
namespace fs = std::filesystem;

namespace {

const fs::path fixtures = COMPASS_FIXTURE_DIR;

fs::path scratch_dir(const std::string &name) {
  auto d = fs::temp_directory_path() / ("compass_driver_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::vector<std::string> lines_of(const fs::path &p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);)
    out.push_back(l);
  return out;
}

} // namespace

TEST(Config, Defaults) {
  const auto c = config_from_json(json::object());
  EXPECT_TRUE(c.has(Method::compass));
  EXPECT_TRUE(c.has(Method::uccsd));
  EXPECT_TRUE(c.has(Method::fci));
  EXPECT_EQ(c.compass.label(), "COMPASS(5,7)-OP");
  EXPECT_FALSE(c.noise);
  EXPECT_FALSE(c.frozen);
  EXPECT_EQ(c.vqe.gradient, vqe::GradientMode::adjoint);
}

TEST(Config, ParsesEverySection) {
  const auto j = json::parse(R"({
    "fixtures": ["h2_*.fcidump"],
    "methods": ["compass", "fci"],
    "compass": {"eps1": 1e-4, "eps2": 1e-6, "sector": "PP", "cso": {"holes": [0], "particles": [1]}},
    "frozen": [0],
    "vqe": {"gradient": "finite_difference", "max_evaluations": 50, "gtol": 1e-6},
    "noise": {"sd": [0.01], "samples": 7, "methods": ["uccsd"]},
    "output_dir": "out", "seed": 12, "threads": 3
  })");
  const auto c = config_from_json(j, "/tmp");
  EXPECT_EQ(c.fixtures, std::vector<std::string>{"h2_*.fcidump"});
  EXPECT_FALSE(c.has(Method::uccsd));
  EXPECT_EQ(c.compass.label(), "COMPASS(4,6)-PP");
  ASSERT_TRUE(c.compass.cso);
  EXPECT_EQ(c.compass.cso->holes, std::vector<std::size_t>{0});
  EXPECT_EQ(*c.frozen, std::vector<std::size_t>{0});
  EXPECT_EQ(c.vqe.gradient, vqe::GradientMode::finite_difference);
  EXPECT_EQ(c.vqe.optimizer.max_evaluations, 50u);
  ASSERT_TRUE(c.noise);
  EXPECT_EQ(c.noise->samples, 7u);
  EXPECT_EQ(c.noise->methods, std::vector<Method>{Method::uccsd});
  EXPECT_EQ(c.seed, 12u);
  EXPECT_EQ(c.threads, 3u);
  EXPECT_EQ(c.base_dir, fs::path("/tmp"));
}

TEST(Config, Errors) {
  EXPECT_THROW(config_from_json(json::parse(R"({"methods": ["adapt"]})")), DomainError);
  EXPECT_THROW(config_from_json(json::parse(R"({"compass": {"eps1": -1}})")), DomainError);
  EXPECT_THROW(config_from_json(json::parse(R"({"seed": "x"})")), DomainError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), FixtureError);
  const auto d = scratch_dir("badjson");
  std::ofstream(d / "c.json") << "{ not json";
  EXPECT_THROW(load_config(d / "c.json"), DomainError);
}

TEST(Config, RelativeFixturesResolveAgainstConfigDirectory) {
  const auto d = scratch_dir("relative");
  fs::copy_file(fixtures / "h2_sto3g_74.fcidump", d / "a_74.fcidump");
  std::ofstream(d / "c.json") << R"({"fixtures": ["a_*.fcidump"]})";
  const auto c = load_config(d / "c.json");
  const auto paths = resolve_fixtures(c.fixtures, c.base_dir);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].filename(), "a_74.fcidump");
}

TEST(Fixtures, WildcardsAndErrors) {
  const auto h2 = resolve_fixtures({"h2_sto3g_*.fcidump"}, fixtures);
  EXPECT_EQ(h2.size(), 5u);
  EXPECT_TRUE(std::is_sorted(h2.begin(), h2.end()));
  EXPECT_THROW(resolve_fixtures({"nope_*.fcidump"}, fixtures), FixtureError);
  EXPECT_THROW(resolve_fixtures({"nope.fcidump"}, fixtures), FixtureError);
  EXPECT_THROW(resolve_fixtures({}, fixtures), FixtureError);
}

TEST(Fixtures, MetadataAndGeometry) {
  const auto g = load_geometry(fixtures / "h2o_sto3g_150.fcidump");
  EXPECT_DOUBLE_EQ(g.r_angstrom, 1.5);
  EXPECT_EQ(g.frozen, std::vector<std::size_t>{0});
  EXPECT_EQ(g.n_qubits(), 12u);
  EXPECT_EQ(g.integrals.n_electrons, 8);
  const auto unfrozen = load_geometry(fixtures / "h2o_sto3g_150.fcidump", std::vector<std::size_t>{});
  EXPECT_EQ(unfrozen.n_qubits(), 14u);
  EXPECT_THROW(load_geometry(fixtures / "missing.fcidump"), FixtureError);

  EXPECT_EQ(bond_length("x/bh_175.fcidump", {}), 1.75);
  EXPECT_FALSE(bond_length("x/bh.fcidump", {}));
  EXPECT_EQ(parse_index_list("0, 1"), (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(parse_index_list("none").empty());
  EXPECT_THROW(parse_index_list("a"), DomainError);
  EXPECT_EQ(slug("COMPASS(5,7)-OP"), "compass_5_7_op");
}

TEST(Output, CsvFormat) {
  ScanRecord r{"h2_sto3g_74", 0.74, "UCCSD", -1.137283834488, 1.5e-9, 3, 4, true, 0.01234};
  EXPECT_EQ(csv_row(r),
            "h2_sto3g_74,0.74,UCCSD,-1.13728383449,1.5e-09,9.41264211095e-07,3,4,true,0.012");
  ScanRecord f{"h2_sto3g_74", 0.74, "FCI", -1.0, std::nullopt, std::nullopt, std::nullopt, true, 0};
  EXPECT_EQ(csv_row(f), "h2_sto3g_74,0.74,FCI,-1,,,,,true,0.000");
  std::ostringstream os;
  write_scan_csv(os, {r});
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), scan_csv_header);
}

TEST(Output, Summary) {
  std::vector<ScanRecord> rows = {
      {"a", 1.0, "FCI", -1.0, 0.0, std::nullopt, 1, true, 0},
      {"a", 1.0, "UCCSD", -0.999, 1e-3, 5, 1, true, 0},
      {"b", 2.0, "UCCSD", -0.997, 3e-3, 5, 1, true, 0},
      {"b", 2.0, "X", -0.997, 2e-3, 9, 1, true, 0},
  };
  const auto s = summarize(rows, RunConfig{});
  ASSERT_TRUE(s["methods"].contains("UCCSD"));
  EXPECT_FALSE(s["methods"].contains("FCI"));
  EXPECT_NEAR(s["methods"]["UCCSD"]["npe_hartree"].get<double>(), 2e-3, 1e-15);
  EXPECT_NEAR(s["methods"]["UCCSD"]["avg_hartree"].get<double>(), 2e-3, 1e-15);
  EXPECT_NEAR(s["methods"]["UCCSD"]["npe_kcal_mol"].get<double>(), 2e-3 * 627.5094740631, 1e-12);
  EXPECT_EQ(s["methods"]["X"]["max_parameters"].get<std::size_t>(), 9u);
}

TEST(Scan, HydrogenSingleGeometry) {
  RunConfig c;
  c.fixtures = {(fixtures / "h2_sto3g_74.fcidump").string()};
  c.noise = NoiseConfig{{1e-3}, 5, {Method::compass}};
  const auto r = run_scan(c);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].method, "FCI");
  EXPECT_EQ(r.rows[1].method, "COMPASS(5,7)-OP");
  EXPECT_EQ(r.rows[2].method, "UCCSD");
  for (const auto &row : r.rows) {
    EXPECT_LT(std::abs(*row.error), 1e-8);
    EXPECT_TRUE(row.converged);
  }
  EXPECT_EQ(*r.rows[1].parameters, 3u);
  ASSERT_EQ(r.noise.size(), 1u);
  EXPECT_EQ(r.noise[0].study.n_samples, 5u);

  const auto d = scratch_dir("scan");
  write_scan_outputs(r, d);
  const auto csv = lines_of(d / "scan.csv");
  ASSERT_EQ(csv.size(), 4u);
  EXPECT_EQ(csv[0], scan_csv_header);
  EXPECT_EQ(lines_of(d / "noise.csv").at(0), noise_csv_header);
  EXPECT_TRUE(fs::exists(d / "summary.json"));
  EXPECT_TRUE(fs::exists(d / "results" / "h2_sto3g_74__compass_5_7_op.json"));
  EXPECT_TRUE(fs::exists(d / "results" / "h2_sto3g_74__uccsd.json"));
}

TEST(Scan, RowsSortedByBondLengthAndThreadIndependent) {
  RunConfig c;
  c.fixtures = {(fixtures / "h2_sto3g_*.fcidump").string()};
  c.methods = {Method::uccsd, Method::fci};
  c.threads = 1;
  const auto a = run_scan(c);
  c.threads = 3;
  const auto b = run_scan(c);
  ASSERT_EQ(a.rows.size(), 10u);
  for (std::size_t k = 1; k < a.rows.size(); ++k)
    EXPECT_LE(a.rows[k - 1].r_angstrom, a.rows[k].r_angstrom);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].geometry, b.rows[k].geometry);
    EXPECT_EQ(a.rows[k].energy, b.rows[k].energy);
  }
  EXPECT_EQ(a.summary, b.summary);
}

TEST(Scan, BoronHydrideUccsdParameterCount) {
  const auto g = load_geometry(fixtures / "bh_sto3g_250.fcidump");
  const auto o = build_method(g, Method::uccsd, CompassConfig{}, 1);
  EXPECT_EQ(o.ansatz.parameter_count(), 117u);
  EXPECT_FALSE(o.report);
}
