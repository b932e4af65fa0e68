// Copyright 2026 The qfelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <json.hpp>

#include <string>

#include "qfe/circuit/circuit.hpp"
#include "qfe/core.hpp"

namespace qfe {

/**
 * Circuit file format:
 *
 *   {
 *     "quantum_inputs": 2,
 *     "classical_inputs": 1,
 *     "ancillas": [2],            // wire ids; must follow the inputs
 *     "trace_out": [0],
 *     "gates": [
 *       {"kind": "H", "wires": [0]},
 *       {"kind": "CNOT", "wires": [0, 2], "control": 0}
 *     ]
 *   }
 *
 * "control" may be absent or null for uncontrolled gates.  Structural
 * problems beyond JSON syntax are reported through validate()-style
 * diagnostics by the caller; this parser throws only on shape errors that
 * leave no circuit to diagnose.
 */
inline nlohmann::json circuit_to_json(const CircuitDesc& desc) {
  nlohmann::json j;
  j["quantum_inputs"] = desc.quantum_inputs;
  j["classical_inputs"] = desc.classical_inputs;
  std::vector<int> anc;
  for (int i = 0; i < desc.ancillas; ++i) anc.push_back(desc.quantum_inputs + i);
  j["ancillas"] = anc;
  j["trace_out"] = desc.trace_out;
  j["gates"] = nlohmann::json::array();
  for (const Gate& g : desc.gates) {
    nlohmann::json jg;
    jg["kind"] = gate_name(g.kind);
    jg["wires"] = g.wires;
    if (g.controlled()) {
      jg["control"] = g.control;
    } else {
      jg["control"] = nullptr;
    }
    j["gates"].push_back(jg);
  }
  return j;
}

inline CircuitDesc circuit_from_json(const nlohmann::json& j) {
  CircuitDesc desc;
  desc.quantum_inputs = j.at("quantum_inputs").get<int>();
  desc.classical_inputs = j.value("classical_inputs", 0);
  const auto anc = j.value("ancillas", std::vector<int>{});
  desc.ancillas = static_cast<int>(anc.size());
  for (std::size_t i = 0; i < anc.size(); ++i) {
    if (anc[i] != desc.quantum_inputs + static_cast<int>(i)) {
      throw std::invalid_argument(
          "circuit_from_json: ancilla wires must be the contiguous block "
          "directly after the quantum inputs");
    }
  }
  desc.trace_out = j.value("trace_out", std::vector<int>{});
  for (const auto& jg : j.value("gates", nlohmann::json::array())) {
    Gate g;
    g.kind = gate_from_name(jg.at("kind").get<std::string>());
    g.wires = jg.at("wires").get<std::vector<int>>();
    if (jg.contains("control") && !jg.at("control").is_null()) {
      g.control = jg.at("control").get<int>();
    }
    desc.gates.push_back(g);
  }
  return desc;
}

/** Parse circuit JSON text; syntax errors carry nlohmann's byte offset. */
inline CircuitDesc parse_circuit_json(const std::string& text) {
  return circuit_from_json(nlohmann::json::parse(text));
}

/** Density matrix as JSON (row-major real/imag parts). */
inline nlohmann::json density_to_json(const DensityMatrix& dm) {
  nlohmann::json j;
  j["qubits"] = dm.qubits();
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < dm.mat().rows(); ++r) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < dm.mat().cols(); ++c) {
      re_row.push_back(dm.mat()(r, c).real());
      im_row.push_back(dm.mat()(r, c).imag());
    }
    re.push_back(re_row);
    im.push_back(im_row);
  }
  j["real"] = re;
  j["imag"] = im;
  return j;
}

}  // namespace qfe
