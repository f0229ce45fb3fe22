/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

// Potential-energy-surface scan driver: run configuration, fixture discovery,
// the per-geometry pipeline and CSV / JSON emission.

#include "compass/ansatz.hpp"
#include "compass/fcidump.hpp"
#include "compass/noise.hpp"
#include "compass/oracle.hpp"
#include "compass/parallel.hpp"
#include "compass/protocol.hpp"
#include "compass/vqe.hpp"

#include <nlohmann/json.hpp>

#include <fnmatch.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace compass::driver {

namespace fs = std::filesystem;
using nlohmann::json;

/// A fixture is missing or the geometry list is empty.
class FixtureError : public Error {
public:
  using Error::Error;
};

enum class Method { compass, uccsd, fci };

inline std::string to_string(Method m) {
  switch (m) {
  case Method::compass: return "compass";
  case Method::uccsd: return "uccsd";
  default: return "fci";
  }
}

inline Method method_from_string(const std::string &s) {
  if (s == "compass")
    return Method::compass;
  if (s == "uccsd")
    return Method::uccsd;
  if (s == "fci")
    return Method::fci;
  throw DomainError("unknown method '" + s + "'");
}

struct NoiseConfig {
  std::vector<double> sd{1e-2, 1e-3, 1e-4};
  std::size_t samples = 100;
  std::vector<Method> methods{Method::compass, Method::uccsd};
};

struct RunConfig {
  std::vector<std::string> fixtures; ///< paths or wildcard patterns
  std::vector<Method> methods{Method::compass, Method::uccsd, Method::fci};
  CompassConfig compass;
  std::optional<std::vector<std::size_t>> frozen; ///< overrides fixture metadata
  vqe::Settings vqe;
  std::optional<NoiseConfig> noise;
  std::string output_dir = "compass-out";
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  fs::path base_dir = "."; ///< relative fixture paths resolve here

  bool has(Method m) const { return std::find(methods.begin(), methods.end(), m) != methods.end(); }
};

// Configuration ----------------------------------------------------------------

inline RunConfig config_from_json(const json &j, const fs::path &base_dir = ".") {
  RunConfig c;
  c.base_dir = base_dir;
  try {
    if (j.contains("fixtures")) {
      if (j["fixtures"].is_string())
        c.fixtures = {j["fixtures"].get<std::string>()};
      else
        c.fixtures = j["fixtures"].get<std::vector<std::string>>();
    }
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto &m : j["methods"])
        c.methods.push_back(method_from_string(m.get<std::string>()));
    }
    if (j.contains("compass")) {
      const auto &jc = j["compass"];
      c.compass.eps1 = jc.value("eps1", c.compass.eps1);
      c.compass.eps2 = jc.value("eps2", c.compass.eps2);
      if (jc.contains("sector"))
        c.compass.sector = fermion::sector_from_string(jc["sector"].get<std::string>());
      if (jc.contains("cso")) {
        fermion::CsoSpec cso;
        cso.holes = jc["cso"].value("holes", std::vector<std::size_t>{});
        cso.particles = jc["cso"].value("particles", std::vector<std::size_t>{});
        c.compass.cso = cso;
      }
    }
    if (j.contains("frozen"))
      c.frozen = j["frozen"].get<std::vector<std::size_t>>();
    if (j.contains("vqe")) {
      const auto &jv = j["vqe"];
      if (jv.contains("gradient"))
        c.vqe.gradient = vqe::gradient_mode_from_string(jv["gradient"].get<std::string>());
      c.vqe.optimizer.max_evaluations =
          jv.value("max_evaluations", c.vqe.optimizer.max_evaluations);
      c.vqe.optimizer.gtol = jv.value("gtol", c.vqe.optimizer.gtol);
      c.vqe.optimizer.ftol = jv.value("ftol", c.vqe.optimizer.ftol);
      c.vqe.optimizer.memory = jv.value("memory", c.vqe.optimizer.memory);
    }
    if (j.contains("noise") && !j["noise"].is_null()) {
      NoiseConfig n;
      const auto &jn = j["noise"];
      n.sd = jn.value("sd", n.sd);
      n.samples = jn.value("samples", n.samples);
      if (jn.contains("methods")) {
        n.methods.clear();
        for (const auto &m : jn["methods"])
          n.methods.push_back(method_from_string(m.get<std::string>()));
      }
      c.noise = n;
    }
    c.output_dir = j.value("output_dir", c.output_dir);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
  } catch (const json::exception &e) {
    throw DomainError(std::string("bad configuration: ") + e.what());
  }
  c.compass.validate();
  return c;
}

inline RunConfig load_config(const fs::path &path) {
  std::ifstream in(path);
  if (!in)
    throw FixtureError("cannot open configuration " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    throw DomainError("configuration " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

/// Expands wildcard patterns in the file-name component. Plain paths must
/// exist; patterns must match at least one file.
inline std::vector<fs::path> resolve_fixtures(const std::vector<std::string> &patterns,
                                              const fs::path &base_dir) {
  std::vector<fs::path> out;
  for (const auto &p : patterns) {
    fs::path path = p;
    if (path.is_relative())
      path = base_dir / path;
    const auto name = path.filename().string();
    if (name.find_first_of("*?[") == std::string::npos) {
      if (!fs::is_regular_file(path))
        throw FixtureError("missing fixture " + path.string());
      out.push_back(path);
      continue;
    }
    const auto dir = path.parent_path();
    std::vector<fs::path> hits;
    if (fs::is_directory(dir))
      for (const auto &e : fs::directory_iterator(dir))
        if (e.is_regular_file() && fnmatch(name.c_str(), e.path().filename().c_str(), 0) == 0)
          hits.push_back(e.path());
    if (hits.empty())
      throw FixtureError("no fixture matches " + path.string());
    std::sort(hits.begin(), hits.end());
    out.insert(out.end(), hits.begin(), hits.end());
  }
  if (out.empty())
    throw FixtureError("empty geometry list");
  return out;
}

// Geometry -----------------------------------------------------------------------

/// `key: value` pairs from the fixture's comment lines.
inline std::map<std::string, std::string> fixture_metadata(const std::string &source_label) {
  std::map<std::string, std::string> out;
  std::istringstream in(source_label);
  for (std::string item; std::getline(in, item, ';');) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      continue;
    auto key = std::string(fcidump::detail::trim(std::string_view(item).substr(0, colon)));
    auto val = std::string(fcidump::detail::trim(std::string_view(item).substr(colon + 1)));
    out[key] = val;
  }
  return out;
}

/// Bond length from metadata, else from a `_<picometres>` file-name suffix.
inline std::optional<double> bond_length(const fs::path &path,
                                         const std::map<std::string, std::string> &meta) {
  if (auto it = meta.find("R_angstrom"); it != meta.end())
    return std::stod(it->second);
  static const std::regex pm(R"(_(\d+)$)");
  std::smatch m;
  const auto stem = path.stem().string();
  if (std::regex_search(stem, m, pm))
    return std::stod(m[1].str()) / 100.0;
  return std::nullopt;
}

inline std::vector<std::size_t> parse_index_list(const std::string &s) {
  std::vector<std::size_t> out;
  std::string tok;
  std::istringstream in(s);
  while (std::getline(in, tok, ',')) {
    auto t = fcidump::detail::trim(tok);
    if (t.empty() || t == "none")
      continue;
    auto v = fcidump::detail::to_long(t);
    if (!v || *v < 0)
      throw DomainError("bad frozen-orbital list '" + s + "'");
    out.push_back(static_cast<std::size_t>(*v));
  }
  return out;
}

struct Geometry {
  fs::path path;
  std::string label; ///< file stem
  double r_angstrom = 0.0;
  std::vector<std::size_t> frozen;
  fcidump::MoleculeIntegrals integrals; ///< active space
  pauli::PauliOperator hamiltonian;
  std::shared_ptr<const sim::SparseOperator> sparse;
  sim::StateVector reference;

  std::size_t n_qubits() const { return 2 * integrals.n_spatial; }
};

inline Geometry load_geometry(const fs::path &path,
                              const std::optional<std::vector<std::size_t>> &frozen = {}) {
  if (!fs::is_regular_file(path))
    throw FixtureError("missing fixture " + path.string());
  Geometry g;
  g.path = path;
  g.label = path.stem().string();
  const auto raw = fcidump::read_fcidump(path.string());
  const auto meta = fixture_metadata(raw.source_label);
  g.r_angstrom = bond_length(path, meta).value_or(0.0);
  if (frozen)
    g.frozen = *frozen;
  else if (auto it = meta.find("frozen"); it != meta.end())
    g.frozen = parse_index_list(it->second);
  g.integrals = fcidump::apply_frozen_core(raw, g.frozen);
  g.hamiltonian = jw::build_qubit_hamiltonian(g.integrals);
  g.sparse = std::make_shared<const sim::SparseOperator>(g.hamiltonian);
  g.reference = sim::hf_state(g.n_qubits(), g.integrals.n_electrons);
  return g;
}

// Records --------------------------------------------------------------------------

struct ScanRecord {
  std::string geometry;
  double r_angstrom = 0.0;
  std::string method;
  double energy = 0.0;
  std::optional<double> error; ///< E - E_FCI, when FCI was computed
  std::optional<std::size_t> parameters;
  std::optional<std::size_t> iterations;
  bool converged = true;
  double wall_seconds = 0.0;
};

struct MethodOutcome {
  Method method = Method::compass;
  Ansatz ansatz;
  vqe::VqeResult result;
  std::optional<CompassReport> report;
};

struct NoiseRecord {
  std::string geometry;
  double r_angstrom = 0.0;
  std::string method;
  noise::NoiseStudy study;
  std::optional<double> fci_energy;
};

struct GeometryResult {
  Geometry geometry;
  std::optional<oracle::FciResult> fci;
  std::vector<MethodOutcome> outcomes;
  std::vector<ScanRecord> rows;
  std::vector<NoiseRecord> noise;
};

inline std::string slug(const std::string &label) {
  std::string s;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else if (!s.empty() && s.back() != '_')
      s += '_';
  }
  while (!s.empty() && s.back() == '_')
    s.pop_back();
  return s;
}

namespace detail {

template <typename F> auto staged(const std::string &geometry, const char *stage, F &&f) {
  try {
    return f();
  } catch (const ScreeningError &e) {
    throw ScreeningError(geometry + " [" + stage + "]: " + e.what());
  } catch (const NumericalError &e) {
    throw NumericalError(geometry + " [" + stage + "]: " + e.what());
  } catch (const ConstructionError &e) {
    throw ConstructionError(geometry + " [" + stage + "]: " + e.what());
  } catch (const DomainError &e) {
    throw DomainError(geometry + " [" + stage + "]: " + e.what());
  }
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace detail

/// Builds the ansatz for one method without optimizing it.
inline MethodOutcome build_method(const Geometry &g, Method m, const CompassConfig &cc,
                                  std::size_t threads, ScreeningContext *ctx = nullptr) {
  MethodOutcome out;
  out.method = m;
  if (m == Method::uccsd) {
    out.ansatz = make_uccsd_ansatz(g.integrals.n_spatial, g.integrals.n_electrons);
    return out;
  }
  ScreeningContext local(g.sparse, g.reference, threads);
  auto &c = ctx ? *ctx : local;
  out.report = detail::staged(g.label, "screen", [&] {
    return construct_compass_ansatz(c, g.integrals.n_spatial, g.integrals.n_electrons, cc);
  });
  out.ansatz = out.report->ansatz;
  return out;
}

/// Full pipeline for one geometry: ansatz construction, VQE, FCI, noise.
inline GeometryResult run_geometry(Geometry g, const RunConfig &cfg, std::size_t threads) {
  GeometryResult res;
  res.geometry = std::move(g);
  const auto &geo = res.geometry;
  ScreeningContext ctx(geo.sparse, geo.reference, threads);

  if (cfg.has(Method::fci)) {
    const auto t0 = std::chrono::steady_clock::now();
    res.fci = detail::staged(geo.label, "fci", [&] {
      return oracle::fci_ground_state(geo.hamiltonian, geo.integrals.n_electrons,
                                      geo.integrals.ms2);
    });
    ScanRecord r{geo.label, geo.r_angstrom, "FCI", res.fci->energy, 0.0, std::nullopt,
                 res.fci->iterations, true, detail::seconds_since(t0)};
    res.rows.push_back(r);
  }

  for (Method m : cfg.methods) {
    if (m == Method::fci)
      continue;
    const auto t0 = std::chrono::steady_clock::now();
    auto out = build_method(geo, m, cfg.compass, threads, &ctx);
    out.result = detail::staged(geo.label, "vqe", [&] {
      return vqe::minimize(geo.sparse, geo.reference, out.ansatz, out.ansatz.initial_parameters,
                           cfg.vqe, ctx.pool.get());
    });
    ScanRecord r;
    r.geometry = geo.label;
    r.r_angstrom = geo.r_angstrom;
    r.method = out.ansatz.label;
    r.energy = out.result.energy;
    if (res.fci)
      r.error = out.result.energy - res.fci->energy;
    r.parameters = out.ansatz.parameter_count();
    r.iterations = out.result.iterations;
    r.converged = out.result.converged;
    r.wall_seconds = detail::seconds_since(t0);
    res.rows.push_back(r);
    res.outcomes.push_back(std::move(out));
  }

  if (cfg.noise) {
    for (const auto &o : res.outcomes) {
      if (std::find(cfg.noise->methods.begin(), cfg.noise->methods.end(), o.method) ==
          cfg.noise->methods.end())
        continue;
      sim::EnergyModel model(geo.sparse, geo.reference, ctx.pool->compile(o.ansatz));
      for (double sd : cfg.noise->sd) {
        auto study = detail::staged(geo.label, "noise", [&] {
          return noise::noise_study(model, o.result.params, sd, cfg.noise->samples, cfg.seed,
                                    threads);
        });
        res.noise.push_back({geo.label, geo.r_angstrom, o.ansatz.label, std::move(study),
                             res.fci ? std::optional(res.fci->energy) : std::nullopt});
      }
    }
  }
  return res;
}

struct ScanResult {
  std::vector<GeometryResult> geometries;
  std::vector<ScanRecord> rows;
  std::vector<NoiseRecord> noise;
  json summary;
};

inline json summarize(const std::vector<ScanRecord> &rows, const RunConfig &cfg) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> errors;
  for (const auto &r : rows) {
    if (!r.error || r.method == "FCI")
      continue;
    if (!errors.count(r.method))
      order.push_back(r.method);
    errors[r.method].push_back(*r.error);
  }
  json methods = json::object();
  for (const auto &label : order) {
    const auto m = oracle::error_metrics(errors[label]);
    std::size_t max_params = 0;
    for (const auto &r : rows)
      if (r.method == label && r.parameters)
        max_params = std::max(max_params, *r.parameters);
    methods[label] = {{"geometries", errors[label].size()},
                      {"npe_hartree", m.npe_hartree},
                      {"avg_hartree", m.avg_hartree},
                      {"npe_kcal_mol", m.npe_kcal()},
                      {"avg_kcal_mol", m.avg_kcal()},
                      {"max_abs_error_kcal_mol", m.max_abs_kcal()},
                      {"max_parameters", max_params}};
  }
  return {{"methods", methods}, {"seed", cfg.seed}};
}

/// Runs every geometry, concurrently up to cfg.threads; rows come back in
/// ascending bond length regardless of completion order.
inline ScanResult run_scan(const RunConfig &cfg) {
  auto paths = resolve_fixtures(cfg.fixtures, cfg.base_dir);
  std::vector<Geometry> geos;
  for (const auto &p : paths)
    geos.push_back(load_geometry(p, cfg.frozen));
  std::stable_sort(geos.begin(), geos.end(), [](const auto &a, const auto &b) {
    if (a.r_angstrom != b.r_angstrom)
      return a.r_angstrom < b.r_angstrom;
    return a.label < b.label;
  });
  const std::size_t outer = std::min(resolve_threads(cfg.threads), geos.size());
  const std::size_t inner = geos.size() == 1 ? cfg.threads : 1;
  ScanResult out;
  out.geometries.resize(geos.size());
  parallel_for(geos.size(), outer, [&](std::size_t k) {
    out.geometries[k] = run_geometry(std::move(geos[k]), cfg, inner);
  });
  for (const auto &g : out.geometries) {
    out.rows.insert(out.rows.end(), g.rows.begin(), g.rows.end());
    out.noise.insert(out.noise.end(), g.noise.begin(), g.noise.end());
  }
  out.summary = summarize(out.rows, cfg);
  return out;
}

// Output ------------------------------------------------------------------------------

inline constexpr const char *scan_csv_header =
    "geometry,R_angstrom,method,energy_hartree,error_hartree,error_kcal_mol,parameters,"
    "iterations,converged,wall_seconds";

inline constexpr const char *noise_csv_header =
    "geometry,R_angstrom,method,sd,mean_energy,std_energy,n_samples,seed,mean_error_hartree,"
    "mean_error_kcal_mol";

inline std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_row(const ScanRecord &r) {
  std::ostringstream os;
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", r.wall_seconds);
  os << r.geometry << ',' << fmt12(r.r_angstrom) << ',' << r.method << ',' << fmt12(r.energy)
     << ',' << (r.error ? fmt12(*r.error) : "") << ','
     << (r.error ? fmt12(*r.error * oracle::hartree_to_kcal) : "") << ','
     << (r.parameters ? std::to_string(*r.parameters) : "") << ','
     << (r.iterations ? std::to_string(*r.iterations) : "") << ','
     << (r.converged ? "true" : "false") << ',' << wall;
  return os.str();
}

inline void write_scan_csv(std::ostream &os, const std::vector<ScanRecord> &rows) {
  os << scan_csv_header << '\n';
  for (const auto &r : rows)
    os << csv_row(r) << '\n';
}

inline void write_noise_csv(std::ostream &os, const std::vector<NoiseRecord> &rows) {
  os << noise_csv_header << '\n';
  for (const auto &n : rows) {
    const auto &s = n.study;
    os << n.geometry << ',' << fmt12(n.r_angstrom) << ',' << n.method << ',' << fmt12(s.sd)
       << ',' << fmt12(s.mean) << ',' << fmt12(s.std) << ',' << s.n_samples << ',' << s.seed
       << ',';
    if (n.fci_energy)
      os << fmt12(s.mean - *n.fci_energy) << ','
         << fmt12((s.mean - *n.fci_energy) * oracle::hartree_to_kcal);
    else
      os << ',';
    os << '\n';
  }
}

/// Ansatz plus the fixture it was built for.
inline json ansatz_document(const Geometry &g, const Ansatz &a) {
  return {{"fixture", fs::absolute(g.path).string()},
          {"geometry", g.label},
          {"R_angstrom", g.r_angstrom},
          {"frozen", g.frozen},
          {"ansatz", to_json(a)}};
}

inline json result_document(const GeometryResult &g, const MethodOutcome &o) {
  auto doc = ansatz_document(g.geometry, o.ansatz);
  doc["method"] = o.ansatz.label;
  doc["energy"] = o.result.energy;
  doc["parameters"] = o.result.params;
  doc["iterations"] = o.result.iterations;
  doc["converged"] = o.result.converged;
  if (g.fci)
    doc["fci_energy"] = g.fci->energy;
  return doc;
}

inline json screen_document(const Geometry &g, const CompassReport &rep) {
  json blocks = json::array();
  for (std::size_t k = 0; k < rep.ansatz.blocks.size(); ++k) {
    const auto &b = rep.ansatz.blocks[k];
    json scat = json::array();
    for (const auto &s : b.scatterers)
      scat.push_back({{"operator", fermion::describe(s.scatterer)},
                      {"delta_e", s.delta_e},
                      {"theta", s.theta},
                      {"theta_tau", s.theta_tau}});
    blocks.push_back({{"index", b.index},
                      {"operator", fermion::describe(b.tau.excitation)},
                      {"delta_e", b.tau.delta_e},
                      {"theta_opt", b.tau.theta_opt},
                      {"admissible_candidates", rep.candidates[k]},
                      {"scatterers", scat}});
  }
  return {{"geometry", g.label},
          {"R_angstrom", g.r_angstrom},
          {"label", rep.ansatz.label},
          {"doubles_screened", rep.evaluated.size()},
          {"doubles_kept", rep.screened.size()},
          {"scatterer_bath", rep.bath_size},
          {"parameter_count", rep.ansatz.parameter_count()},
          {"blocks", blocks}};
}

inline void write_json(const fs::path &path, const json &j) {
  std::ofstream out(path);
  if (!out)
    throw DomainError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

inline void write_scan_outputs(const ScanResult &r, const fs::path &dir) {
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "scan.csv");
    write_scan_csv(csv, r.rows);
  }
  write_json(dir / "summary.json", r.summary);
  if (!r.noise.empty()) {
    std::ofstream csv(dir / "noise.csv");
    write_noise_csv(csv, r.noise);
  }
  fs::create_directories(dir / "results");
  for (const auto &g : r.geometries)
    for (const auto &o : g.outcomes)
      write_json(dir / "results" / (g.geometry.label + "__" + slug(o.ansatz.label) + ".json"),
                 result_document(g, o));
}

} // namespace compass::driver
