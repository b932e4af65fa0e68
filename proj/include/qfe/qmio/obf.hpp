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

/**
 * @file
 * Single-use program obfuscation from multi-input functional encryption.
 *
 * Obf encrypts a circuit so that the holder can run it on exactly one input
 * of their choice and learn nothing but the output.  For an n-qubit circuit
 * drawn from a class with l description bits, it sets up a 3n+1-slot
 * multi-input scheme (encryption limit 2) and issues one function key for
 *
 *     U(a_1, b_1, ..., a_n, b_n, C; rho_1..rho_n)
 *         = C(X^{a_1} Z^{b_1} rho_1, ..., X^{a_n} Z^{b_n} rho_n),
 *
 * the class universal wrapped with per-input Pauli corrections.  The
 * program consists of: both bit values encrypted in each of the 2n
 * correction slots, one encrypted EPR half per input slot, the encrypted
 * circuit description, and the free second EPR halves.
 *
 * Eval teleports the input through the free halves; the Bell outcomes
 * (a_i, b_i) pick which of the pre-encrypted bit ciphertexts to hand to
 * decryption, whose corrections then cancel the teleportation's byproduct
 * Paulis exactly.  The teleport halves are consumed, so a program runs
 * once.  Correctness is exact; hiding is inherited from whatever
 * multi-input scheme backs the construction (the dealer here claims none).
 */

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qfe/circuit/circuit.hpp"
#include "qfe/core.hpp"
#include "qfe/fe/polyqfe.hpp"
#include "qfe/qmio/qmife.hpp"

namespace qfe {

struct ObfuscatedProgram {
  QmifeKey sk_u;
  QmifeCiphertext ct_c;                                // circuit description
  std::vector<std::array<QmifeCiphertext, 2>> bit_cts;  // 2n slots x 2 values
  std::vector<QmifeCiphertext> epr_cts;                 // n encrypted halves
  std::vector<int> free_halves;                         // n teleport wires
  int n = 0;
  bool used = false;
};

/**
 * The correction-wrapped universal: quantum inputs as in the class, the
 * first 2n classical inputs are interleaved (a_i, b_i), and the class's own
 * description bits follow.
 */
inline CircuitDesc obf_universal(const PolyQfeClass& cls) {
  const CircuitDesc& u = cls.universal;
  const int n = u.quantum_inputs;
  CircuitDesc big;
  big.quantum_inputs = n;
  big.classical_inputs = 2 * n + u.classical_inputs;
  big.ancillas = u.ancillas;
  big.trace_out = u.trace_out;
  for (int i = 0; i < n; ++i) {
    big.gates.push_back(Gate{GateKind::X, {i}, 2 * i});
    big.gates.push_back(Gate{GateKind::Z, {i}, 2 * i + 1});
  }
  for (Gate g : u.gates) {
    if (g.control >= 0) g.control += 2 * n;
    big.gates.push_back(g);
  }
  return big;
}

/**
 * Obfuscate one member of a garbleable class, given by its description
 * bits.  EPR halves live in the caller's register.
 */
inline ObfuscatedProgram obf(const PolyQfeClass& cls,
                             const std::vector<std::uint8_t>& c_bits,
                             RegisterState& rs, RandomSource& rng) {
  const int n = cls.n();
  const int l = cls.l();
  if (static_cast<int>(c_bits.size()) != l) {
    throw std::invalid_argument("obf: description length mismatch");
  }
  std::vector<QmifeSlot> slots;
  for (int i = 0; i < 2 * n; ++i) slots.push_back(QmifeSlot{1, true});
  for (int i = 0; i < n; ++i) slots.push_back(QmifeSlot{1, false});
  slots.push_back(QmifeSlot{l, true});
  auto keys = qmife_setup(std::move(slots), 2, rng);

  ObfuscatedProgram prog;
  prog.n = n;
  prog.sk_u = qmife_keygen(keys, obf_universal(cls));
  for (int i = 0; i < 2 * n; ++i) {
    prog.bit_cts.push_back({qmife_enc_bits(keys, i, {0}),
                            qmife_enc_bits(keys, i, {1})});
  }
  for (int i = 0; i < n; ++i) {
    const auto pair = rs.add_epr_pairs(1);
    prog.epr_cts.push_back(qmife_enc(keys, 2 * n + i, rs, {pair[0]}));
    prog.free_halves.push_back(pair[1]);
  }
  prog.ct_c = qmife_enc_bits(keys, 3 * n, c_bits);
  return prog;
}

/**
 * Obfuscate a bare circuit via its singleton class: each gate gets its own
 * always-on description bit.  Clifford only (class construction checks).
 */
inline ObfuscatedProgram obf(const CircuitDesc& c, RegisterState& rs,
                             RandomSource& rng) {
  require_valid(c);
  if (c.classical_inputs != 0) {
    throw std::invalid_argument("obf: circuit must have no classical inputs");
  }
  CircuitDesc u = c;
  u.classical_inputs = static_cast<int>(c.gates.size());
  for (std::size_t i = 0; i < u.gates.size(); ++i) {
    u.gates[i].control = static_cast<int>(i);
  }
  const std::vector<std::uint8_t> bits(u.gates.size(), 1);
  return obf(poly_class(std::move(u)), bits, rs, rng);
}

/**
 * Run the program on an input held in the same register.  Consumes the
 * teleport halves and marks the program used; returns the output wires.
 */
inline std::vector<int> eval(ObfuscatedProgram& prog, RegisterState& rs,
                             const std::vector<int>& x_wires,
                             RandomSource& rng) {
  if (prog.used) {
    throw std::logic_error("eval: obfuscated program is single-use");
  }
  if (static_cast<int>(x_wires.size()) != prog.n) {
    throw std::invalid_argument("eval: input width mismatch");
  }
  const PauliKey key = rs.teleport(x_wires, prog.free_halves, rng);
  std::vector<QmifeCiphertext> cts;
  for (int i = 0; i < 2 * prog.n; ++i) {
    const std::size_t pick = (i % 2 == 0)
                                 ? key.a[static_cast<std::size_t>(i / 2)]
                                 : key.b[static_cast<std::size_t>(i / 2)];
    cts.push_back(prog.bit_cts[static_cast<std::size_t>(i)][pick]);
  }
  for (const auto& ct : prog.epr_cts) cts.push_back(ct);
  cts.push_back(prog.ct_c);
  prog.used = true;
  return qmife_dec(prog.sk_u, rs, cts, rng);
}

/** Dense convenience: feed a state, return the output state. */
inline DensityMatrix eval(ObfuscatedProgram& prog, RegisterState& rs,
                          const DensityMatrix& rho, RandomSource& rng) {
  const auto out = eval(prog, rs, rs.add_state(rho), rng);
  return rs.dense(out);
}

}  // namespace qfe
