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

#include <algorithm>
#include <string>
#include <vector>

#include "qfe/core.hpp"

namespace qfe {

/**
 * One gate in a circuit schedule.  `control`, when >= 0, names a classical
 * input bit: the gate fires iff that bit is 1.
 */
struct Gate {
  GateKind kind = GateKind::I;
  std::vector<int> wires;
  int control = -1;

  bool controlled() const { return control >= 0; }
};

/**
 * A circuit over a fixed set of qubit lines.
 *
 * Wires 0..quantum_inputs-1 are the input payload; the next `ancillas` wires
 * are appended in the |0> state at evaluation time.  Gates run in list order
 * (the list order is the schedule, so the wiring is acyclic by
 * construction).  After the last gate the wires in `trace_out` are
 * discarded; the remaining wires, in ascending order, are the output.
 */
struct CircuitDesc {
  int quantum_inputs = 0;
  int classical_inputs = 0;
  int ancillas = 0;
  std::vector<int> trace_out;
  std::vector<Gate> gates;

  int wires() const { return quantum_inputs + ancillas; }

  std::vector<int> output_wires() const {
    std::vector<int> out;
    for (int w = 0; w < wires(); ++w) {
      if (std::find(trace_out.begin(), trace_out.end(), w) ==
          trace_out.end()) {
        out.push_back(w);
      }
    }
    return out;
  }

  int output_width() const { return static_cast<int>(output_wires().size()); }

  bool is_clifford() const {
    return std::all_of(gates.begin(), gates.end(),
                       [](const Gate& g) { return gate_is_clifford(g.kind); });
  }
};

/**
 * The gate-kind-erased shape of a circuit: wire counts, slot wiring, control
 * hookup, and trace-outs.  This is exactly what a garbled-encoding bundle is
 * allowed to reveal about its circuit.
 */
struct Topology {
  struct Slot {
    std::vector<int> wires;
    int control = -1;
  };
  int quantum_inputs = 0;
  int classical_inputs = 0;
  int ancillas = 0;
  std::vector<int> trace_out;
  std::vector<Slot> slots;

  int wires() const { return quantum_inputs + ancillas; }

  std::vector<int> output_wires() const {
    std::vector<int> out;
    for (int w = 0; w < wires(); ++w) {
      if (std::find(trace_out.begin(), trace_out.end(), w) ==
          trace_out.end()) {
        out.push_back(w);
      }
    }
    return out;
  }
};

inline Topology topology_of(const CircuitDesc& desc) {
  Topology t;
  t.quantum_inputs = desc.quantum_inputs;
  t.classical_inputs = desc.classical_inputs;
  t.ancillas = desc.ancillas;
  t.trace_out = desc.trace_out;
  for (const auto& g : desc.gates) {
    t.slots.push_back({g.wires, g.control});
  }
  return t;
}

/**
 * Structural validation.  Returns human-readable diagnostics; a circuit is
 * well-formed iff the list is empty.
 */
inline std::vector<std::string> validate(const CircuitDesc& desc) {
  std::vector<std::string> diags;
  if (desc.quantum_inputs < 0 || desc.classical_inputs < 0 ||
      desc.ancillas < 0) {
    diags.push_back("negative terminal count");
    return diags;
  }
  const int w = desc.wires();
  for (std::size_t i = 0; i < desc.gates.size(); ++i) {
    const Gate& g = desc.gates[i];
    const std::string at = "gate " + std::to_string(i) + ": ";
    if (static_cast<int>(g.wires.size()) != gate_arity(g.kind)) {
      diags.push_back(at + "arity mismatch for " + gate_name(g.kind));
      continue;
    }
    bool range_ok = true;
    for (int gw : g.wires) {
      if (gw < 0 || gw >= w) {
        diags.push_back(at + "wire index out of range");
        range_ok = false;
        break;
      }
    }
    if (range_ok && g.wires.size() == 2 && g.wires[0] == g.wires[1]) {
      diags.push_back(at + "duplicate wire within one gate");
    }
    if (g.control >= desc.classical_inputs) {
      diags.push_back(at + "control bit index out of range");
    }
    if (g.control < -1) {
      diags.push_back(at + "malformed control index");
    }
  }
  std::vector<int> seen;
  for (int t : desc.trace_out) {
    if (t < 0 || t >= w) {
      diags.push_back("trace-out wire out of range");
    } else if (std::find(seen.begin(), seen.end(), t) != seen.end()) {
      diags.push_back("duplicate trace-out wire");
    }
    seen.push_back(t);
  }
  return diags;
}

inline void require_valid(const CircuitDesc& desc) {
  auto diags = validate(desc);
  if (!diags.empty()) {
    throw std::invalid_argument("invalid circuit: " + diags.front());
  }
}

/**
 * Run the circuit on `in_wires` of a register: append |0> ancillas, fire
 * gates (skipping controlled gates whose bit is 0), trace the trace-out set.
 * Returns the output wires (non-traced, in wire order).
 */
inline std::vector<int> evaluate_on(const CircuitDesc& desc, RegisterState& rs,
                                    const std::vector<int>& in_wires,
                                    const std::vector<std::uint8_t>& bits) {
  require_valid(desc);
  if (static_cast<int>(in_wires.size()) != desc.quantum_inputs) {
    throw std::invalid_argument("evaluate: input width mismatch");
  }
  if (static_cast<int>(bits.size()) != desc.classical_inputs) {
    throw std::invalid_argument("evaluate: classical input width mismatch");
  }
  std::vector<int> line = in_wires;
  for (int i = 0; i < desc.ancillas; ++i) {
    line.push_back(rs.add_qubit(DensityMatrix::zero()));
  }
  for (const Gate& g : desc.gates) {
    if (g.controlled() && bits[static_cast<std::size_t>(g.control)] == 0) {
      continue;
    }
    std::vector<int> ws;
    for (int w : g.wires) ws.push_back(line[static_cast<std::size_t>(w)]);
    rs.apply_gate(g.kind, ws);
  }
  std::vector<int> traced;
  for (int t : desc.trace_out) traced.push_back(line[static_cast<std::size_t>(t)]);
  rs.trace_out(traced);
  std::vector<int> out;
  for (int w : desc.output_wires()) out.push_back(line[static_cast<std::size_t>(w)]);
  return out;
}

/** The circuit as a channel (classical inputs fixed). */
inline Channel circuit_channel(const CircuitDesc& desc,
                               std::vector<std::uint8_t> bits = {}) {
  Channel ch;
  ch.n_in = desc.quantum_inputs;
  ch.n_out = desc.output_width();
  ch.apply = [desc, bits](RegisterState& rs, const std::vector<int>& ws,
                          RandomSource&) {
    return evaluate_on(desc, rs, ws, bits);
  };
  return ch;
}

/** Dense convenience: evaluate on exactly the circuit's input wires. */
inline DensityMatrix evaluate(const CircuitDesc& desc, const DensityMatrix& in,
                              const std::vector<std::uint8_t>& bits = {}) {
  if (in.qubits() != desc.quantum_inputs) {
    throw std::invalid_argument("evaluate: input width mismatch");
  }
  std::vector<int> ws(static_cast<std::size_t>(in.qubits()));
  for (std::size_t i = 0; i < ws.size(); ++i) ws[i] = static_cast<int>(i);
  return channel_apply(circuit_channel(desc, bits), in, ws);
}

}  // namespace qfe
