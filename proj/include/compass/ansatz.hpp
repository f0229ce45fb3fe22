/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

// Ansatz layout: operator blocks (one screened double followed by its attached
// scatterers) in application order, then the singles tail. Parameters are
// indexed in exactly that order.

#include "compass/errors.hpp"
#include "compass/fermion_ops.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <variant>
#include <vector>

namespace compass {

using fermion::Excitation;
using fermion::Scatterer;

using Operator = std::variant<Excitation, Scatterer>;

struct ScreenedDouble {
  Excitation excitation;
  double theta_opt = 0.0; ///< one-parameter optimum
  double energy = 0.0;    ///< E_I at theta_opt
  double delta_e = 0.0;   ///< |E_I - E_HF|
};

struct AttachedScatterer {
  Scatterer scatterer;
  double theta = 0.0;     ///< sigma parameter from the pair optimization
  double theta_tau = 0.0; ///< tau parameter refined in the same optimization
  double energy = 0.0;    ///< E_{I mu}
  double delta_e = 0.0;   ///< |E_{I mu} - E_I|
};

struct OperatorBlock {
  ScreenedDouble tau;
  std::vector<AttachedScatterer> scatterers;
  std::size_t index = 0; ///< 1-based position; block 1 acts first
};

struct Ansatz {
  std::string label;
  std::size_t n_qubits = 0;
  int n_electrons = 0;
  std::vector<OperatorBlock> blocks;
  std::vector<Excitation> singles;
  std::vector<double> initial_parameters;

  std::size_t parameter_count() const {
    std::size_t n = singles.size();
    for (const auto &b : blocks)
      n += 1 + b.scatterers.size();
    return n;
  }

  /// Operators in application order (the parameter layout).
  std::vector<Operator> operators() const {
    std::vector<Operator> ops;
    ops.reserve(parameter_count());
    for (const auto &b : blocks) {
      ops.emplace_back(b.tau.excitation);
      for (const auto &s : b.scatterers)
        ops.emplace_back(s.scatterer);
    }
    for (const auto &s : singles)
      ops.emplace_back(s);
    return ops;
  }

  std::size_t scatterer_count() const {
    std::size_t n = 0;
    for (const auto &b : blocks)
      n += b.scatterers.size();
    return n;
  }
};

// JSON -----------------------------------------------------------------------

namespace detail {

inline nlohmann::json orbitals_to_json(const std::vector<fermion::SpinOrbital> &orbs) {
  auto j = nlohmann::json::array();
  for (auto o : orbs)
    j.push_back(o.qubit());
  return j;
}

inline std::vector<fermion::SpinOrbital> orbitals_from_json(const nlohmann::json &j) {
  std::vector<fermion::SpinOrbital> out;
  for (const auto &q : j)
    out.push_back(fermion::SpinOrbital::from_qubit(q.get<std::size_t>()));
  return out;
}

inline nlohmann::json excitation_to_json(const Excitation &x) {
  return {{"holes", orbitals_to_json(x.holes)}, {"particles", orbitals_to_json(x.particles)}};
}

inline Excitation excitation_from_json(const nlohmann::json &j) {
  return {orbitals_from_json(j.at("holes")), orbitals_from_json(j.at("particles"))};
}

inline nlohmann::json scatterer_to_json(const Scatterer &s) {
  return {{"kind", fermion::to_string(s.kind)},
          {"sector", fermion::to_string(s.sector)},
          {"cso", s.cso_orbital.qubit()},
          {"create", orbitals_to_json(s.create)},
          {"destroy", orbitals_to_json(s.destroy)}};
}

inline Scatterer scatterer_from_json(const nlohmann::json &j) {
  Scatterer s;
  const auto kind = j.at("kind").get<std::string>();
  if (kind != "hole" && kind != "particle")
    throw ConstructionError("unknown scatterer kind '" + kind + "'");
  s.kind = kind == "hole" ? fermion::ScattererKind::hole : fermion::ScattererKind::particle;
  s.sector = fermion::sector_from_string(j.at("sector").get<std::string>());
  s.cso_orbital = fermion::SpinOrbital::from_qubit(j.at("cso").get<std::size_t>());
  s.create = orbitals_from_json(j.at("create"));
  s.destroy = orbitals_from_json(j.at("destroy"));
  return s;
}

} // namespace detail

inline nlohmann::json to_json(const Ansatz &a) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto &b : a.blocks) {
    nlohmann::json scat = nlohmann::json::array();
    for (const auto &s : b.scatterers)
      scat.push_back({{"operator", detail::scatterer_to_json(s.scatterer)},
                      {"theta", s.theta},
                      {"theta_tau", s.theta_tau},
                      {"energy", s.energy},
                      {"delta_e", s.delta_e}});
    blocks.push_back({{"index", b.index},
                      {"tau",
                       {{"operator", detail::excitation_to_json(b.tau.excitation)},
                        {"theta_opt", b.tau.theta_opt},
                        {"energy", b.tau.energy},
                        {"delta_e", b.tau.delta_e}}},
                      {"scatterers", scat}});
  }
  nlohmann::json singles = nlohmann::json::array();
  for (const auto &s : a.singles)
    singles.push_back(detail::excitation_to_json(s));
  return {{"label", a.label},
          {"n_qubits", a.n_qubits},
          {"n_electrons", a.n_electrons},
          {"parameter_count", a.parameter_count()},
          {"blocks", blocks},
          {"singles", singles},
          {"initial_parameters", a.initial_parameters}};
}

inline Ansatz ansatz_from_json(const nlohmann::json &j) {
  Ansatz a;
  try {
    a.label = j.at("label").get<std::string>();
    a.n_qubits = j.at("n_qubits").get<std::size_t>();
    a.n_electrons = j.at("n_electrons").get<int>();
    for (const auto &jb : j.at("blocks")) {
      OperatorBlock b;
      b.index = jb.at("index").get<std::size_t>();
      const auto &jt = jb.at("tau");
      b.tau.excitation = detail::excitation_from_json(jt.at("operator"));
      b.tau.theta_opt = jt.at("theta_opt").get<double>();
      b.tau.energy = jt.at("energy").get<double>();
      b.tau.delta_e = jt.at("delta_e").get<double>();
      for (const auto &js : jb.at("scatterers")) {
        AttachedScatterer s;
        s.scatterer = detail::scatterer_from_json(js.at("operator"));
        s.theta = js.at("theta").get<double>();
        s.theta_tau = js.at("theta_tau").get<double>();
        s.energy = js.at("energy").get<double>();
        s.delta_e = js.at("delta_e").get<double>();
        b.scatterers.push_back(std::move(s));
      }
      a.blocks.push_back(std::move(b));
    }
    for (const auto &js : j.at("singles"))
      a.singles.push_back(detail::excitation_from_json(js));
    a.initial_parameters = j.at("initial_parameters").get<std::vector<double>>();
  } catch (const nlohmann::json::exception &e) {
    throw ConstructionError(std::string("malformed ansatz JSON: ") + e.what());
  }
  if (a.initial_parameters.size() != a.parameter_count())
    throw ConstructionError("ansatz JSON parameter vector does not match its operators");
  return a;
}

} // namespace compass
