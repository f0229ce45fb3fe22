/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/

// compass: potential-energy scans, screening reports, ansatz export, FCI and
// parameter-noise studies over FCIDUMP fixtures.
//
// Exit codes: 0 success, 2 missing fixture or empty geometry list,
// 3 parse / screening / numerical failure, 64 usage error.

#include "compass/compass.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using namespace compass;
using namespace compass::driver;

constexpr int exit_ok = 0;
constexpr int exit_fixture = 2;
constexpr int exit_failure = 3;
constexpr int exit_usage = 64;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::string> output_dir;
  std::vector<std::string> fixtures;
  std::vector<std::string> methods;
  std::optional<double> eps1, eps2;
  std::optional<std::string> sector;
  std::optional<std::string> frozen;
};

RunConfig make_config(const Overrides &o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.fixtures.empty()) {
    c.fixtures = o.fixtures;
    c.base_dir = ".";
  }
  if (!o.methods.empty()) {
    c.methods.clear();
    for (const auto &m : o.methods)
      c.methods.push_back(method_from_string(m));
  }
  if (o.seed)
    c.seed = *o.seed;
  if (o.threads)
    c.threads = *o.threads;
  if (o.output_dir)
    c.output_dir = *o.output_dir;
  if (o.eps1)
    c.compass.eps1 = *o.eps1;
  if (o.eps2)
    c.compass.eps2 = *o.eps2;
  if (o.sector)
    c.compass.sector = fermion::sector_from_string(*o.sector);
  if (o.frozen)
    c.frozen = parse_index_list(*o.frozen);
  c.compass.validate();
  return c;
}

void print_rows(const std::vector<ScanRecord> &rows) {
  std::printf("%-20s %7s %-18s %20s %14s %6s\n", "geometry", "R", "method", "energy",
              "err(kcal/mol)", "npar");
  for (const auto &r : rows)
    std::printf("%-20s %7.3f %-18s %20.12f %14s %6s\n", r.geometry.c_str(), r.r_angstrom,
                r.method.c_str(), r.energy,
                r.error ? fmt12(*r.error * oracle::hartree_to_kcal).c_str() : "-",
                r.parameters ? std::to_string(*r.parameters).c_str() : "-");
}

int cmd_scan(const Overrides &o, const std::string &from_ansatz) {
  auto cfg = make_config(o);
  ScanResult res;
  if (!from_ansatz.empty()) {
    std::ifstream in(from_ansatz);
    if (!in)
      throw FixtureError("cannot open ansatz file " + from_ansatz);
    json doc;
    try {
      in >> doc;
    } catch (const json::exception &e) {
      throw ConstructionError(std::string("ansatz file is not valid JSON: ") + e.what());
    }
    auto frozen = doc.value("frozen", std::vector<std::size_t>{});
    GeometryResult g;
    g.geometry = load_geometry(doc.at("fixture").get<std::string>(), frozen);
    const auto ansatz = ansatz_from_json(doc.at("ansatz"));
    if (ansatz.n_qubits != g.geometry.n_qubits() ||
        ansatz.n_electrons != g.geometry.integrals.n_electrons)
      throw ConstructionError("ansatz does not fit the fixture it names");
    if (cfg.has(Method::fci)) {
      g.fci = oracle::fci_ground_state(g.geometry.hamiltonian, g.geometry.integrals.n_electrons,
                                       g.geometry.integrals.ms2);
      g.rows.push_back({g.geometry.label, g.geometry.r_angstrom, "FCI", g.fci->energy, 0.0,
                        std::nullopt, g.fci->iterations, true, 0.0});
    }
    MethodOutcome out;
    out.method = ansatz.label == "UCCSD" ? Method::uccsd : Method::compass;
    out.ansatz = ansatz;
    sim::GeneratorPool pool(g.geometry.n_qubits());
    out.result = vqe::minimize(g.geometry.sparse, g.geometry.reference, ansatz,
                               ansatz.initial_parameters, cfg.vqe, &pool);
    ScanRecord r{g.geometry.label, g.geometry.r_angstrom, ansatz.label, out.result.energy,
                 std::nullopt, ansatz.parameter_count(), out.result.iterations,
                 out.result.converged, 0.0};
    if (g.fci)
      r.error = out.result.energy - g.fci->energy;
    g.rows.push_back(r);
    g.outcomes.push_back(std::move(out));
    res.rows = g.rows;
    res.geometries.push_back(std::move(g));
    res.summary = summarize(res.rows, cfg);
  } else {
    if (cfg.fixtures.empty())
      throw FixtureError("empty geometry list");
    res = run_scan(cfg);
  }
  write_scan_outputs(res, cfg.output_dir);
  print_rows(res.rows);
  std::cout << "wrote " << (fs::path(cfg.output_dir) / "scan.csv").string() << '\n';
  return exit_ok;
}

int cmd_screen(const Overrides &o) {
  auto cfg = make_config(o);
  const auto paths = resolve_fixtures(cfg.fixtures, cfg.base_dir);
  fs::create_directories(cfg.output_dir);
  for (const auto &p : paths) {
    const auto g = load_geometry(p, cfg.frozen);
    const auto out = build_method(g, Method::compass, cfg.compass, cfg.threads);
    const auto &rep = *out.report;
    std::printf("%s  R=%.3f  %s  kept %zu/%zu doubles, %zu scatterers, %zu parameters\n",
                g.label.c_str(), g.r_angstrom, rep.ansatz.label.c_str(), rep.screened.size(),
                rep.evaluated.size(), rep.ansatz.scatterer_count(),
                rep.ansatz.parameter_count());
    for (const auto &b : rep.ansatz.blocks) {
      std::printf("  %3zu  %-28s dE=%.6e\n", b.index,
                  fermion::describe(b.tau.excitation).c_str(), b.tau.delta_e);
      for (const auto &s : b.scatterers)
        std::printf("         + %-40s dE=%.6e\n", fermion::describe(s.scatterer).c_str(),
                    s.delta_e);
    }
    write_json(fs::path(cfg.output_dir) / (g.label + "__screen.json"), screen_document(g, rep));
  }
  return exit_ok;
}

int cmd_ansatz(const Overrides &o) {
  auto cfg = make_config(o);
  const auto paths = resolve_fixtures(cfg.fixtures, cfg.base_dir);
  fs::create_directories(cfg.output_dir);
  for (const auto &p : paths) {
    const auto g = load_geometry(p, cfg.frozen);
    for (Method m : cfg.methods) {
      if (m == Method::fci)
        continue;
      const auto out = build_method(g, m, cfg.compass, cfg.threads);
      const auto file =
          fs::path(cfg.output_dir) / (g.label + "__" + slug(out.ansatz.label) + "__ansatz.json");
      write_json(file, ansatz_document(g, out.ansatz));
      std::cout << "wrote " << file.string() << " (" << out.ansatz.parameter_count()
                << " parameters)\n";
    }
  }
  return exit_ok;
}

int cmd_fci(const Overrides &o) {
  auto cfg = make_config(o);
  cfg.methods = {Method::fci};
  cfg.noise.reset();
  auto res = run_scan(cfg);
  write_scan_outputs(res, cfg.output_dir);
  print_rows(res.rows);
  return exit_ok;
}

int cmd_noise(const Overrides &o, const std::vector<std::string> &results,
              const std::vector<double> &sds, std::size_t samples) {
  auto cfg = make_config(o);
  NoiseConfig nc = cfg.noise.value_or(NoiseConfig{});
  if (!sds.empty())
    nc.sd = sds;
  if (samples > 0)
    nc.samples = samples;
  if (results.empty())
    throw FixtureError("no converged result files given");
  std::vector<NoiseRecord> rows;
  for (const auto &file : results) {
    std::ifstream in(file);
    if (!in)
      throw FixtureError("cannot open result file " + file);
    json doc;
    try {
      in >> doc;
    } catch (const json::exception &e) {
      throw ConstructionError(std::string("result file is not valid JSON: ") + e.what());
    }
    const auto g = load_geometry(doc.at("fixture").get<std::string>(),
                                 doc.value("frozen", std::vector<std::size_t>{}));
    const auto ansatz = ansatz_from_json(doc.at("ansatz"));
    const auto params = doc.at("parameters").get<std::vector<double>>();
    sim::GeneratorPool pool(g.n_qubits());
    sim::EnergyModel model(g.sparse, g.reference, pool.compile(ansatz));
    std::optional<double> efci;
    if (doc.contains("fci_energy"))
      efci = doc["fci_energy"].get<double>();
    for (double sd : nc.sd)
      rows.push_back({g.label, g.r_angstrom, ansatz.label,
                      noise::noise_study(model, params, sd, nc.samples, cfg.seed, cfg.threads),
                      efci});
  }
  fs::create_directories(cfg.output_dir);
  const auto path = fs::path(cfg.output_dir) / "noise.csv";
  std::ofstream csv(path);
  write_noise_csv(csv, rows);
  write_noise_csv(std::cout, rows);
  return exit_ok;
}

int cmd_fcidump_check(const std::vector<std::string> &files) {
  int status = exit_ok;
  for (const auto &f : files) {
    if (!fs::is_regular_file(f)) {
      std::cerr << f << ": missing file\n";
      status = std::max(status, exit_fixture);
      continue;
    }
    try {
      const auto raw = fcidump::read_fcidump(f);
      const auto meta = fixture_metadata(raw.source_label);
      std::vector<std::size_t> frozen;
      if (auto it = meta.find("frozen"); it != meta.end())
        frozen = parse_index_list(it->second);
      const auto active = fcidump::apply_frozen_core(raw, frozen);
      std::vector<std::size_t> occ;
      for (int k = 0; k < active.n_electrons / 2; ++k)
        occ.push_back(static_cast<std::size_t>(k));
      std::printf("%s: ok\n  NORB=%zu NELEC=%d MS2=%d e_core=%.12f\n"
                  "  symmetry violation=%.3e\n  frozen=%zu -> active NORB=%zu NELEC=%d\n"
                  "  reference determinant energy=%.12f\n",
                  f.c_str(), raw.n_spatial, raw.n_electrons, raw.ms2, raw.e_core,
                  fcidump::symmetry_violation(raw), frozen.size(), active.n_spatial,
                  active.n_electrons, fcidump::determinant_energy(active, occ));
    } catch (const ParseError &e) {
      std::cerr << f << ": " << e.what() << '\n';
      status = std::max(status, exit_failure);
    } catch (const Error &e) {
      std::cerr << f << ": " << e.what() << '\n';
      status = std::max(status, exit_failure);
    }
  }
  return status;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"COMPASS statevector toolkit", "compass"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "seed for the noise study");
  app.add_option("--threads", o.threads, "worker threads (0 = hardware)");
  app.add_option("--output-dir", o.output_dir, "output directory");
  app.add_option("--fixture", o.fixtures, "fixture path or wildcard (repeatable)");
  app.add_option("--method", o.methods, "compass | uccsd | fci (repeatable)");
  app.add_option("--eps1", o.eps1, "cluster screening threshold (Hartree)");
  app.add_option("--eps2", o.eps2, "scatterer screening threshold (Hartree)");
  app.add_option("--sector", o.sector, "scatterer sector: OP | PP");
  app.add_option("--frozen", o.frozen, "comma-separated frozen spatial orbitals");

  std::string from_ansatz;
  auto *scan = app.add_subcommand("scan", "VQE + FCI scan over the fixture set");
  scan->add_option("--from-ansatz", from_ansatz, "optimize a stored ansatz instead");
  auto *screen = app.add_subcommand("screen", "screened-operator report");
  auto *ansatz = app.add_subcommand("ansatz", "write the built ansatz without optimizing");
  auto *fci = app.add_subcommand("fci", "exact ground energies only");
  std::vector<std::string> results;
  std::vector<double> sds;
  std::size_t samples = 0;
  auto *noise_cmd = app.add_subcommand("noise", "parameter-noise study on converged results");
  noise_cmd->add_option("--result", results, "result JSON from a scan (repeatable)");
  noise_cmd->add_option("--sd", sds, "noise standard deviation (repeatable)");
  noise_cmd->add_option("--samples", samples, "samples per study");
  std::vector<std::string> dumps;
  auto *check = app.add_subcommand("fcidump-check", "parse and report on FCIDUMP files");
  check->add_option("files", dumps, "FCIDUMP files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    std::cerr << app.help();
    return exit_usage;
  }

  try {
    if (*scan)
      return cmd_scan(o, from_ansatz);
    if (*screen)
      return cmd_screen(o);
    if (*ansatz)
      return cmd_ansatz(o);
    if (*fci)
      return cmd_fci(o);
    if (*noise_cmd)
      return cmd_noise(o, results, sds, samples);
    if (*check)
      return cmd_fcidump_check(dumps);
  } catch (const FixtureError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_fixture;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  } catch (const json::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  } catch (const fs::filesystem_error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_usage;
}
