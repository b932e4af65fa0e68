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
 * Secret-key multi-input functional encryption, dealer reference.
 *
 * An instance fixes a list of input slots, each carrying either a quantum
 * register or a classical bit string of a declared width, plus a limit on
 * how many ciphertexts each slot key may produce.  The master secret is one
 * Pauli pad per slot; quantum payloads are encrypted under the pad, and
 * classical payloads take a fast path masked with the pad's X half.  A
 * function key carries a circuit over the concatenated slots (quantum slots
 * feed its wires, classical slots its classical inputs, both in slot order)
 * together with the pads, and decryption strips the pads and evaluates the
 * circuit on the joint state.  Correctness is exact; no cryptographic
 * hardness is modelled — the security definitions live in the experiment
 * harness, runnable against any implementation of this interface.
 *
 * The trusted party of the simulation-security definition is also here: it
 * holds message registers and answers evaluation queries by running the
 * queried circuit coherently on selected copies, CNOT-copying the output to
 * a fresh register, and uncomputing, so its registers stay entangled with
 * every answer it hands out.
 */

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qfe/circuit/circuit.hpp"
#include "qfe/core.hpp"

namespace qfe {

struct QmifeSlot {
  int width = 1;           // qubits or bits
  bool classical = false;  // classical payloads skip the register
};

struct QmifeKeys {
  std::vector<QmifeSlot> slots;
  int limit = 1;                // ciphertexts allowed per slot key
  std::vector<PauliKey> pads;   // master secret, one pad per slot
  std::vector<int> produced;    // encryption counter per slot

  int arity() const { return static_cast<int>(slots.size()); }
};

inline QmifeKeys qmife_setup(std::vector<QmifeSlot> slots, int limit,
                             RandomSource& rng) {
  if (slots.empty()) throw std::invalid_argument("qmife_setup: no slots");
  if (limit < 1) throw std::invalid_argument("qmife_setup: limit < 1");
  for (const auto& s : slots) {
    if (s.width < 0 || (!s.classical && s.width < 1)) {
      throw std::invalid_argument("qmife_setup: bad slot width");
    }
  }
  QmifeKeys keys;
  keys.slots = std::move(slots);
  keys.limit = limit;
  for (const auto& s : keys.slots) {
    keys.pads.push_back(
        PauliKey::random(static_cast<std::size_t>(s.width), rng));
  }
  keys.produced.assign(keys.slots.size(), 0);
  return keys;
}

/** All-quantum instance: n single-qubit slots. */
inline QmifeKeys qmife_setup(int n, int limit, RandomSource& rng) {
  return qmife_setup(std::vector<QmifeSlot>(static_cast<std::size_t>(n)),
                     limit, rng);
}

struct QmifeCiphertext {
  int slot = -1;
  bool classical = false;
  std::vector<std::uint8_t> bits;  // masked payload, classical path
  std::vector<int> wires;          // padded payload wires, quantum path
};

namespace qmife_detail {

inline void charge(QmifeKeys& keys, int slot, bool classical,
                   std::size_t width) {
  if (slot < 0 || slot >= keys.arity()) {
    throw std::invalid_argument("qmife_enc: slot index out of range");
  }
  const auto& spec = keys.slots[static_cast<std::size_t>(slot)];
  if (spec.classical != classical) {
    throw std::invalid_argument("qmife_enc: payload kind does not match slot");
  }
  if (static_cast<std::size_t>(spec.width) != width) {
    throw std::invalid_argument("qmife_enc: payload width mismatch");
  }
  if (keys.produced[static_cast<std::size_t>(slot)] >= keys.limit) {
    throw std::logic_error("qmife_enc: encryption limit exhausted for slot");
  }
  ++keys.produced[static_cast<std::size_t>(slot)];
}

}  // namespace qmife_detail

/** Quantum payload: the wires are consumed into the ciphertext. */
inline QmifeCiphertext qmife_enc(QmifeKeys& keys, int slot, RegisterState& rs,
                                 const std::vector<int>& wires) {
  qmife_detail::charge(keys, slot, false, wires.size());
  rs.apply_qotp(keys.pads[static_cast<std::size_t>(slot)], wires);
  return QmifeCiphertext{slot, false, {}, wires};
}

/** Classical fast path: bits masked with the slot pad's X half. */
inline QmifeCiphertext qmife_enc_bits(QmifeKeys& keys, int slot,
                                      std::vector<std::uint8_t> bits) {
  qmife_detail::charge(keys, slot, true, bits.size());
  const auto& pad = keys.pads[static_cast<std::size_t>(slot)];
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] ^= pad.a[i];
  return QmifeCiphertext{slot, true, std::move(bits), {}};
}

/**
 * Function key.  The circuit's quantum wires are the quantum slots
 * concatenated in slot order; its classical inputs are the classical slots
 * concatenated in slot order.  The dealer's pads ride inside the key.
 */
struct QmifeKey {
  CircuitDesc c;
  std::vector<QmifeSlot> slots;
  std::vector<PauliKey> pads;
};

inline QmifeKey qmife_keygen(const QmifeKeys& keys, const CircuitDesc& c) {
  require_valid(c);
  int qubits = 0;
  int bits = 0;
  for (const auto& s : keys.slots) (s.classical ? bits : qubits) += s.width;
  if (c.quantum_inputs != qubits || c.classical_inputs != bits) {
    throw std::invalid_argument(
        "qmife_keygen: circuit arity does not match the slot layout");
  }
  return QmifeKey{c, keys.slots, keys.pads};
}

/**
 * Strip the pads and evaluate.  Expects exactly one ciphertext per slot, in
 * slot order; returns the circuit's output wires.
 */
inline std::vector<int> qmife_dec(const QmifeKey& sk, RegisterState& rs,
                                  const std::vector<QmifeCiphertext>& cts,
                                  RandomSource& rng) {
  if (cts.size() != sk.slots.size()) {
    throw std::invalid_argument("qmife_dec: need one ciphertext per slot");
  }
  std::vector<int> qwires;
  std::vector<std::uint8_t> bits;
  for (std::size_t i = 0; i < cts.size(); ++i) {
    const auto& ct = cts[i];
    const auto& spec = sk.slots[i];
    if (ct.slot != static_cast<int>(i) || ct.classical != spec.classical) {
      throw std::invalid_argument(
          "qmife_dec: ciphertext does not belong to this slot");
    }
    const auto& pad = sk.pads[i];
    if (spec.classical) {
      if (ct.bits.size() != static_cast<std::size_t>(spec.width)) {
        throw std::invalid_argument("qmife_dec: ciphertext width mismatch");
      }
      for (std::size_t t = 0; t < ct.bits.size(); ++t) {
        bits.push_back(static_cast<std::uint8_t>(ct.bits[t] ^ pad.a[t]));
      }
    } else {
      if (ct.wires.size() != static_cast<std::size_t>(spec.width)) {
        throw std::invalid_argument("qmife_dec: ciphertext width mismatch");
      }
      rs.apply_qotp(pad, ct.wires);
      qwires.insert(qwires.end(), ct.wires.begin(), ct.wires.end());
    }
  }
  return evaluate_on(sk.c, rs, qwires, bits);
}

/**
 * The ideal-world trusted party: holds `copies` message registers for each
 * of `arity` input positions, inside a caller-owned RegisterState.
 */
struct TrustedParty {
  int arity = 0;
  int copies = 0;
  std::vector<std::vector<std::vector<int>>> held;  // held[i][j] = wires
  int queries = 0;
};

namespace tp_detail {

inline std::vector<int> slot_widths(const TrustedParty& tp) {
  if (static_cast<int>(tp.held.size()) != tp.arity) {
    throw std::invalid_argument("tp_query: held registers incomplete");
  }
  std::vector<int> w;
  for (const auto& copies : tp.held) {
    if (static_cast<int>(copies.size()) != tp.copies) {
      throw std::invalid_argument("tp_query: held registers incomplete");
    }
    for (const auto& ws : copies) {
      if (ws.size() != copies.front().size()) {
        throw std::invalid_argument("tp_query: uneven copy widths");
      }
    }
    w.push_back(static_cast<int>(copies.front().size()));
  }
  return w;
}

inline void check_query_circuit(const CircuitDesc& g, int total_width) {
  require_valid(g);
  if (g.classical_inputs != 0 || g.ancillas != 0 || !g.trace_out.empty()) {
    throw std::invalid_argument(
        "tp_query: query circuit must be a pure unitary (no classical "
        "inputs, ancillas, or traced wires)");
  }
  if (g.quantum_inputs != total_width) {
    throw std::invalid_argument("tp_query: query circuit arity mismatch");
  }
}

/** Embed an operator on `pos` (list order = MSB first) into m qubits. */
inline Mat embed_on(const Mat& op, const std::vector<int>& pos, int m) {
  const int s = static_cast<int>(pos.size());
  const std::size_t dim = std::size_t{1} << m;
  const std::size_t sdim = std::size_t{1} << s;
  Mat out = Mat::Zero(static_cast<Eigen::Index>(dim),
                      static_cast<Eigen::Index>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t cs = 0;
    for (int t = 0; t < s; ++t) {
      cs = (cs << 1) | ((col >> (m - 1 - pos[static_cast<std::size_t>(t)])) &
                        1u);
    }
    for (std::size_t r = 0; r < sdim; ++r) {
      const auto v = op(static_cast<Eigen::Index>(r),
                        static_cast<Eigen::Index>(cs));
      if (v == std::complex<double>(0.0, 0.0)) continue;
      std::size_t row = col;
      for (int t = 0; t < s; ++t) {
        const std::size_t mask =
            std::size_t{1} << (m - 1 - pos[static_cast<std::size_t>(t)]);
        if ((r >> (s - 1 - t)) & 1u) {
          row |= mask;
        } else {
          row &= ~mask;
        }
      }
      out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = v;
    }
  }
  return out;
}

/** Unitary of a pure circuit over m qubits, acting on mapped positions. */
inline Mat circuit_on(const CircuitDesc& g, const std::vector<int>& pos,
                      int m) {
  const std::size_t dim = std::size_t{1} << m;
  Mat u = Mat::Identity(static_cast<Eigen::Index>(dim),
                        static_cast<Eigen::Index>(dim));
  for (const auto& gate : g.gates) {
    std::vector<int> mapped;
    for (int w : gate.wires) {
      mapped.push_back(pos[static_cast<std::size_t>(w)]);
    }
    u = embed_on(gate_matrix(gate.kind), mapped, m) * u;
  }
  return u;
}

inline int index_bits(int copies) {
  int b = 0;
  while ((1 << b) < copies) ++b;
  return b;
}

}  // namespace tp_detail

/**
 * Classical-tuple query: evaluate g on the picked copies, copy the output
 * out by CNOTs, uncompute.  Returns the answer wires; the held registers
 * stay in place (entangled with the answer).
 */
inline std::vector<int> tp_query(TrustedParty& tp, RegisterState& rs,
                                 const CircuitDesc& g,
                                 const std::vector<int>& picks) {
  const auto widths = tp_detail::slot_widths(tp);
  if (static_cast<int>(picks.size()) != tp.arity) {
    throw std::invalid_argument("tp_query: need one index per position");
  }
  std::vector<int> ws;
  for (int i = 0; i < tp.arity; ++i) {
    const int j = picks[static_cast<std::size_t>(i)];
    if (j < 0 || j >= tp.copies) {
      throw std::invalid_argument("tp_query: index out of range");
    }
    const auto& sel = tp.held[static_cast<std::size_t>(i)]
                             [static_cast<std::size_t>(j)];
    ws.insert(ws.end(), sel.begin(), sel.end());
  }
  tp_detail::check_query_circuit(g, static_cast<int>(ws.size()));

  for (const auto& gate : g.gates) {
    std::vector<int> mapped;
    for (int w : gate.wires) mapped.push_back(ws[static_cast<std::size_t>(w)]);
    rs.apply_gate(gate.kind, mapped);
  }
  const auto answer = rs.add_bits(std::vector<std::uint8_t>(ws.size(), 0));
  for (std::size_t t = 0; t < ws.size(); ++t) {
    rs.apply_gate(GateKind::CNOT, {ws[t], answer[t]});
  }
  for (auto it = g.gates.rbegin(); it != g.gates.rend(); ++it) {
    std::vector<int> mapped;
    for (int w : it->wires) mapped.push_back(ws[static_cast<std::size_t>(w)]);
    rs.apply_unitary(gate_matrix(it->kind).adjoint(), mapped);
  }
  ++tp.queries;
  return answer;
}

/**
 * Superposed-index query: `index_regs[i]` is a caller register of
 * ceil(log2 copies) qubits naming the copy for position i.  The whole
 * select-evaluate-copy-uncompute step is one unitary, so index, answer, and
 * held registers end up exactly as entangled as the definition demands.
 * Index values beyond the copy count act as the identity.  Joint sizes
 * beyond `max_qubits` raise a capability error; callers should fall back to
 * classical-tuple queries.
 */
inline std::vector<int> tp_query_superposed(
    TrustedParty& tp, RegisterState& rs, const CircuitDesc& g,
    const std::vector<std::vector<int>>& index_regs, int max_qubits = 12) {
  const auto widths = tp_detail::slot_widths(tp);
  if (static_cast<int>(index_regs.size()) != tp.arity) {
    throw std::invalid_argument("tp_query: need one index register per "
                                "position");
  }
  const int ib = tp_detail::index_bits(tp.copies);
  std::vector<int> order;
  for (const auto& reg : index_regs) {
    if (static_cast<int>(reg.size()) != ib) {
      throw std::invalid_argument("tp_query: index register width mismatch");
    }
    order.insert(order.end(), reg.begin(), reg.end());
  }
  int total_width = 0;
  for (int w : widths) total_width += w;
  tp_detail::check_query_circuit(g, total_width);

  // Non-index space: every held copy, then the answer register.
  std::vector<std::vector<int>> offsets(tp.held.size());
  int m = 0;
  for (std::size_t i = 0; i < tp.held.size(); ++i) {
    for (const auto& ws : tp.held[i]) {
      offsets[i].push_back(m);
      m += static_cast<int>(ws.size());
      order.insert(order.end(), ws.begin(), ws.end());
    }
  }
  const int ans_at = m;
  m += total_width;
  const int idx_total = ib * tp.arity;
  if (idx_total + m > max_qubits) {
    throw std::runtime_error(
        "tp_query: superposed index set exceeds the qubit budget; use "
        "classical-tuple queries");
  }
  const auto answer =
      rs.add_bits(std::vector<std::uint8_t>(
          static_cast<std::size_t>(total_width), 0));
  order.insert(order.end(), answer.begin(), answer.end());

  const std::size_t mdim = std::size_t{1} << m;
  const std::size_t dim = std::size_t{1} << (idx_total + m);
  Mat v = Mat::Zero(static_cast<Eigen::Index>(dim),
                    static_cast<Eigen::Index>(dim));
  for (std::size_t iv = 0; iv < (std::size_t{1} << idx_total); ++iv) {
    std::vector<int> picks;
    bool valid = true;
    for (int i = 0; i < tp.arity; ++i) {
      const auto seg =
          (iv >> (idx_total - ib * (i + 1))) & ((std::size_t{1} << ib) - 1);
      picks.push_back(static_cast<int>(seg));
      valid = valid && static_cast<int>(seg) < tp.copies;
    }
    Mat block;
    if (valid) {
      std::vector<int> sel;
      for (int i = 0; i < tp.arity; ++i) {
        const int at = offsets[static_cast<std::size_t>(i)]
                              [static_cast<std::size_t>(picks
                                   [static_cast<std::size_t>(i)])];
        for (int q = 0; q < widths[static_cast<std::size_t>(i)]; ++q) {
          sel.push_back(at + q);
        }
      }
      const Mat gmat = tp_detail::circuit_on(g, sel, m);
      Mat copy = Mat::Identity(static_cast<Eigen::Index>(mdim),
                               static_cast<Eigen::Index>(mdim));
      for (int t = 0; t < total_width; ++t) {
        copy = tp_detail::embed_on(
                   gate_matrix(GateKind::CNOT),
                   {sel[static_cast<std::size_t>(t)], ans_at + t}, m) *
               copy;
      }
      block = gmat.adjoint() * copy * gmat;
    } else {
      block = Mat::Identity(static_cast<Eigen::Index>(mdim),
                            static_cast<Eigen::Index>(mdim));
    }
    v.block(static_cast<Eigen::Index>(iv * mdim),
            static_cast<Eigen::Index>(iv * mdim),
            static_cast<Eigen::Index>(mdim),
            static_cast<Eigen::Index>(mdim)) = block;
  }
  rs.apply_unitary(v, order);
  ++tp.queries;
  return answer;
}

}  // namespace qfe
