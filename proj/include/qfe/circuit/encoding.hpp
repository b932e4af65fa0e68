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
#include <string>
#include <vector>

#include "qfe/circuit/circuit.hpp"

namespace qfe {

/**
 * Fixed bit-string format for Clifford circuits on n wires.
 *
 * A description is a sequence of *records*.  Each record is one pass over
 * the full gate menu for n wires, one flag bit per menu entry, fired in menu
 * order when set:
 *
 *   for each wire w = 0..n-1:          [ X_w, Z_w, H_w, P_w ]       (4 bits)
 *   for each pair i < j (lex order):   [ CNOT_{i->j}, CNOT_{j->i},
 *                                        SWAP_{i,j} ]               (3 bits)
 *
 * so a record holds 4n + 3*n*(n-1)/2 bits; the all-zero record is the
 * identity step.  A description is *canonical* when every record has at
 * most one flag set — the encoder always produces canonical bits (one
 * record per gate, zero-padded to a requested length), while the decoder
 * accepts any bit pattern.  Every flag being an independent single bit is
 * what lets the universal circuit be a fixed schedule of classically
 * controlled gates with one control terminal per description bit.
 *
 * Fixture: the 1-wire circuit "X on wire 0" encodes to the single record
 * 1000.
 */
inline int record_width(int wires) {
  if (wires < 1) throw std::invalid_argument("record_width: need >= 1 wire");
  return 4 * wires + 3 * (wires * (wires - 1)) / 2;
}

/** The gate menu for one record, in flag order. */
inline std::vector<Gate> gate_menu(int wires) {
  std::vector<Gate> menu;
  const GateKind singles[] = {GateKind::X, GateKind::Z, GateKind::H,
                              GateKind::P};
  for (int w = 0; w < wires; ++w) {
    for (GateKind k : singles) menu.push_back({k, {w}, -1});
  }
  for (int i = 0; i < wires; ++i) {
    for (int j = i + 1; j < wires; ++j) {
      menu.push_back({GateKind::CNOT, {i, j}, -1});
      menu.push_back({GateKind::CNOT, {j, i}, -1});
      menu.push_back({GateKind::SWAP, {i, j}, -1});
    }
  }
  return menu;
}

/** Flag position of a gate within one record, or -1 if not in the menu. */
inline int menu_index(int wires, GateKind kind, const std::vector<int>& ws) {
  const auto menu = gate_menu(wires);
  for (std::size_t p = 0; p < menu.size(); ++p) {
    if (menu[p].kind != kind) continue;
    if (menu[p].wires == ws) return static_cast<int>(p);
    if (kind == GateKind::SWAP && menu[p].wires.size() == 2 &&
        ws.size() == 2 && menu[p].wires[0] == ws[1] &&
        menu[p].wires[1] == ws[0]) {
      return static_cast<int>(p);
    }
  }
  return -1;
}

struct CircuitEncoding {
  int wires = 0;
  int records = 0;
  std::vector<std::uint8_t> bits;  // records * record_width(wires) flags

  int length() const { return static_cast<int>(bits.size()); }
};

/**
 * Encode a plain unitary Clifford circuit (no ancillas, trace-outs, or
 * classical controls) as canonical flag records, one gate per record,
 * zero-padded with identity records up to `min_records` when requested.
 */
inline CircuitEncoding encode_circuit(const CircuitDesc& desc,
                                      int min_records = 0) {
  require_valid(desc);
  if (desc.classical_inputs != 0 || desc.ancillas != 0 ||
      !desc.trace_out.empty()) {
    throw std::invalid_argument(
        "encode_circuit: only plain unitary circuits are encodable");
  }
  const int n = desc.quantum_inputs;
  const int width = record_width(n);
  std::vector<std::vector<std::uint8_t>> recs;
  for (const Gate& g : desc.gates) {
    if (g.kind == GateKind::I) continue;
    const int p = menu_index(n, g.kind, g.wires);
    if (p < 0) {
      throw std::invalid_argument("encode_circuit: gate " +
                                  std::string(gate_name(g.kind)) +
                                  " is outside the encodable menu");
    }
    std::vector<std::uint8_t> rec(static_cast<std::size_t>(width), 0);
    rec[static_cast<std::size_t>(p)] = 1;
    recs.push_back(std::move(rec));
  }
  while (static_cast<int>(recs.size()) < min_records) {
    recs.emplace_back(static_cast<std::size_t>(width), 0);
  }
  CircuitEncoding enc;
  enc.wires = n;
  enc.records = static_cast<int>(recs.size());
  for (auto& rec : recs) {
    enc.bits.insert(enc.bits.end(), rec.begin(), rec.end());
  }
  return enc;
}

/**
 * Decode flag bits into a circuit.  Any bit pattern is meaningful; flags
 * fire in menu order within each record.  Length errors report the offset
 * at which the input ran out.
 */
inline CircuitDesc decode_circuit(int wires, int records,
                                  const std::vector<std::uint8_t>& bits) {
  const int width = record_width(wires);
  const std::size_t need = static_cast<std::size_t>(width) *
                           static_cast<std::size_t>(records);
  if (records < 0) throw std::invalid_argument("decode_circuit: records < 0");
  if (bits.size() != need) {
    throw std::invalid_argument(
        "decode_circuit: bit string ends at offset " +
        std::to_string(bits.size()) + ", expected length " +
        std::to_string(need));
  }
  const auto menu = gate_menu(wires);
  CircuitDesc desc;
  desc.quantum_inputs = wires;
  for (int r = 0; r < records; ++r) {
    for (std::size_t p = 0; p < menu.size(); ++p) {
      const std::size_t at =
          static_cast<std::size_t>(r) * static_cast<std::size_t>(width) + p;
      if (bits[at] != 0) desc.gates.push_back(menu[p]);
    }
  }
  return desc;
}

inline CircuitDesc decode_circuit(const CircuitEncoding& enc) {
  return decode_circuit(enc.wires, enc.records, enc.bits);
}

/**
 * The classically-controlled universal circuit U for n-wire descriptions of
 * length l: terminal i of its l classical inputs controls menu entry
 * i % record_width(n) of record i / record_width(n), so
 *
 *   evaluate(U, rho, bits) == evaluate(decode_circuit(n, R, bits), rho)
 *
 * for every bit pattern.  l must be a whole number of records.
 */
inline CircuitDesc universal_circuit(int l, int n) {
  const int width = record_width(n);
  if (l < 0 || l % width != 0) {
    throw std::invalid_argument(
        "universal_circuit: description length " + std::to_string(l) +
        " is not a whole number of " + std::to_string(width) +
        "-bit records");
  }
  const int records = l / width;
  const auto menu = gate_menu(n);
  CircuitDesc u;
  u.quantum_inputs = n;
  u.classical_inputs = l;
  for (int r = 0; r < records; ++r) {
    for (std::size_t p = 0; p < menu.size(); ++p) {
      Gate g = menu[p];
      g.control = r * width + static_cast<int>(p);
      u.gates.push_back(g);
    }
  }
  return u;
}

/**
 * Substitute fixed values for a circuit's classical inputs: drop gates whose
 * control bit is 0, strip controls from the rest.  specialize(U, enc.bits)
 * recovers decode_circuit(enc) gate for gate.
 */
inline CircuitDesc specialize(const CircuitDesc& desc,
                              const std::vector<std::uint8_t>& bits) {
  if (static_cast<int>(bits.size()) != desc.classical_inputs) {
    throw std::invalid_argument("specialize: classical input width mismatch");
  }
  CircuitDesc out;
  out.quantum_inputs = desc.quantum_inputs;
  out.classical_inputs = 0;
  out.ancillas = desc.ancillas;
  out.trace_out = desc.trace_out;
  for (const Gate& g : desc.gates) {
    if (g.controlled() && bits[static_cast<std::size_t>(g.control)] == 0) {
      continue;
    }
    Gate fired = g;
    fired.control = -1;
    out.gates.push_back(fired);
  }
  return out;
}

}  // namespace qfe
