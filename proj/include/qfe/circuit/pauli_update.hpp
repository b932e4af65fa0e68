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

#include <stdexcept>
#include <utility>

#include "qfe/circuit/circuit.hpp"
#include "qfe/core.hpp"

namespace qfe {

/**
 * Push X^a Z^b through one Clifford gate: rewrites the (a, b) flags of the
 * touched wires so that, up to global phase,
 *
 *   U . Pauli(a, b)  =  Pauli(a', b') . U.
 *
 * The rules per kind (phases dropped, as everywhere in this library):
 *   X, Z, I : unchanged
 *   H       : (a, b) -> (b, a)
 *   P       : (a, b) -> (a, a xor b)
 *   CNOT    : X on control copies onto target, Z on target copies onto
 *             control: a_t ^= a_c, b_c ^= b_t
 *   SWAP    : keys swap wires
 * T is not Clifford and is rejected.
 */
inline void pauli_update_gate(GateKind kind, const std::vector<int>& wires,
                              PauliKey& key) {
  if (!gate_is_clifford(kind)) {
    throw std::invalid_argument(
        "pauli_update_gate: " + std::string(gate_name(kind)) +
        " does not map Pauli masks to Pauli masks");
  }
  if (static_cast<int>(wires.size()) != gate_arity(kind)) {
    throw std::invalid_argument("pauli_update_gate: arity mismatch");
  }
  for (int w : wires) {
    if (w < 0 || static_cast<std::size_t>(w) >= key.size()) {
      throw std::invalid_argument("pauli_update_gate: wire out of key range");
    }
  }
  switch (kind) {
    case GateKind::I:
    case GateKind::X:
    case GateKind::Z:
      break;
    case GateKind::H: {
      const auto w = static_cast<std::size_t>(wires[0]);
      std::swap(key.a[w], key.b[w]);
      break;
    }
    case GateKind::P: {
      const auto w = static_cast<std::size_t>(wires[0]);
      key.b[w] = key.b[w] ^ key.a[w];
      break;
    }
    case GateKind::CNOT: {
      const auto c = static_cast<std::size_t>(wires[0]);
      const auto t = static_cast<std::size_t>(wires[1]);
      key.a[t] = key.a[t] ^ key.a[c];
      key.b[c] = key.b[c] ^ key.b[t];
      break;
    }
    case GateKind::SWAP: {
      const auto u = static_cast<std::size_t>(wires[0]);
      const auto v = static_cast<std::size_t>(wires[1]);
      std::swap(key.a[u], key.a[v]);
      std::swap(key.b[u], key.b[v]);
      break;
    }
    default:
      throw std::invalid_argument("pauli_update_gate: unsupported gate");
  }
}

/**
 * Push a Pauli mask through a whole Clifford circuit with the classical
 * inputs fixed.  `key` covers every wire of the circuit (inputs then
 * ancillas); ancilla flags are usually zero on entry.  The returned key
 * again covers every wire; the caller slices out trace-out wires if it only
 * wants the output mask.  Satisfies, for all states rho and keys k,
 *
 *   evaluate(C, qotp(k, rho), bits)
 *     = qotp(pauli_update(C, k, bits) restricted to outputs,
 *            evaluate(C, rho, bits))
 *
 * provided no trace-out wire keeps a nonzero mask that the caller forgets
 * (QOTP on a traced wire is invisible anyway).
 */
inline PauliKey pauli_update(const CircuitDesc& desc, const PauliKey& key,
                             const std::vector<std::uint8_t>& bits = {}) {
  if (key.size() != static_cast<std::size_t>(desc.wires())) {
    throw std::invalid_argument("pauli_update: key width must equal wires()");
  }
  if (static_cast<int>(bits.size()) != desc.classical_inputs) {
    throw std::invalid_argument("pauli_update: classical input width mismatch");
  }
  PauliKey out = key;
  for (const Gate& g : desc.gates) {
    if (g.controlled() && bits[static_cast<std::size_t>(g.control)] == 0) {
      continue;
    }
    pauli_update_gate(g.kind, g.wires, out);
  }
  return out;
}

}  // namespace qfe
