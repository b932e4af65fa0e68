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

#include "qfe/garble/types.hpp"

namespace qfe {

namespace garble_detail {

/**
 * Online quantum piece for one input wire: Bell-measure the input against
 * its e_2 half and publish the outcome masked by this wire's slice of m_0.
 * The narrow signature is the decomposability guarantee: nothing else is in
 * scope.
 */
inline OnlineQuantumPiece encode_input_piece(RegisterState& rs, int x_wire,
                                             std::pair<int, int> e2_pair,
                                             std::uint8_t m0_a,
                                             std::uint8_t m0_b,
                                             RandomSource& rng) {
  auto [a, b] = rs.bell_measure(x_wire, e2_pair.first, rng);
  OnlineQuantumPiece piece;
  piece.carrier = e2_pair.second;
  piece.kappa = {static_cast<std::uint8_t>((a ^ m0_a) & 1),
                 static_cast<std::uint8_t>((b ^ m0_b) & 1)};
  return piece;
}

/** Online classical piece: the bit plus the row pads it selects. */
inline OnlineClassicalPiece encode_classical_piece(
    int bit_index, std::uint8_t value,
    std::vector<std::pair<int, std::vector<std::uint8_t>>> selected_pads) {
  OnlineClassicalPiece piece;
  piece.bit_index = bit_index;
  piece.value = value;
  piece.pads = std::move(selected_pads);
  return piece;
}

inline void check_shapes(const CircuitDesc& desc, const EprPool& pool,
                         const EncodingRandomness& r) {
  if (static_cast<int>(pool.e2.size()) != desc.quantum_inputs ||
      pool.e3.size() != desc.gates.size()) {
    throw std::invalid_argument("encode: EPR pool shape mismatch");
  }
  if (r.m0.size() != static_cast<std::size_t>(desc.wires()) ||
      r.m.size() != desc.gates.size() || r.c.size() != desc.gates.size() ||
      r.pads.size() != desc.gates.size() ||
      r.anc_mask.size() != static_cast<std::size_t>(desc.ancillas) ||
      r.c_final.size() != static_cast<std::size_t>(desc.wires())) {
    throw std::invalid_argument("encode: randomness shape mismatch");
  }
  for (std::size_t j = 0; j < desc.gates.size(); ++j) {
    const int jj = static_cast<int>(j);
    const std::size_t variants =
        static_cast<std::size_t>(slot_variants(desc, jj));
    const std::size_t arity = slot_wires(desc, jj).size();
    if (pool.e3[j].size() != variants || r.c[j].size() != variants ||
        r.m[j].size() != arity ||
        r.pads[j].size() != (slot_controlled(desc, jj) ? variants : 0u)) {
      throw std::invalid_argument("encode: slot shape mismatch");
    }
    for (const auto& gadget : pool.e3[j]) {
      if (gadget.size() != arity) {
        throw std::invalid_argument("encode: gadget pair count mismatch");
      }
    }
  }
}

}  // namespace garble_detail

/**
 * Build the offline half of a garbling from the gadget EPR pool `e3`:
 * masked ancilla carriers, gate gadgets, the masked affine table, and the
 * final record.  Touches no input wires and draws nothing — a party holding
 * only the randomness and the gadget pairs can run it, which is exactly the
 * position the poly-circuit FE encryptor is in.
 */
inline OfflinePart encode_offline(
    RegisterState& rs, const CircuitDesc& desc, const EncodingRandomness& r,
    const std::vector<std::vector<std::vector<std::pair<int, int>>>>& e3) {
  garble_check(desc);
  EprPool pool;
  pool.e2.resize(static_cast<std::size_t>(desc.quantum_inputs));
  pool.e3 = e3;
  garble_detail::check_shapes(desc, pool, r);

  const int wires = desc.wires();
  const int slots = static_cast<int>(desc.gates.size());
  const auto outs = desc.output_wires();
  OfflinePart off;
  for (int k = 0; k < desc.ancillas; ++k) {
    const int w = desc.quantum_inputs + k;
    const int id = rs.add_qubit(DensityMatrix::zero());
    rs.apply_pauli_bit(id, r.anc_mask.a[static_cast<std::size_t>(k)],
                       r.anc_mask.b[static_cast<std::size_t>(k)]);
    off.ancilla_carriers.push_back(id);
    off.ancilla_kappa.push_back(
        {static_cast<std::uint8_t>(r.anc_mask.a[static_cast<std::size_t>(k)] ^
                                   r.m0.a[static_cast<std::size_t>(w)]),
         static_cast<std::uint8_t>(r.anc_mask.b[static_cast<std::size_t>(k)] ^
                                   r.m0.b[static_cast<std::size_t>(w)])});
  }

  off.gadgets.resize(static_cast<std::size_t>(slots));
  for (int j = 0; j < slots; ++j) {
    for (int v = 0; v < slot_variants(desc, j); ++v) {
      GadgetRef gadget;
      gadget.pairs = pool.e3[static_cast<std::size_t>(j)]
                            [static_cast<std::size_t>(v)];
      std::vector<int> out_ids;
      for (const auto& [in_id, out_id] : gadget.pairs) {
        (void)in_id;
        out_ids.push_back(out_id);
      }
      const GateKind kind = variant_kind(desc, j, v);
      if (kind != GateKind::I) rs.apply_gate(kind, out_ids);
      rs.apply_qotp(r.c[static_cast<std::size_t>(j)]
                       [static_cast<std::size_t>(v)],
                    out_ids);
      off.gadgets[static_cast<std::size_t>(j)].push_back(std::move(gadget));
    }
  }

  // Final fresh mask on each output wire's last offline-held carrier.  For
  // controlled last slots both variants receive it — only one will be used,
  // and the other is buried under its own never-revealed gadget mask.
  for (int w = 0; w < wires; ++w) {
    if (!c_final_applicable(desc, w)) continue;
    const std::uint8_t ca = r.c_final.a[static_cast<std::size_t>(w)];
    const std::uint8_t cb = r.c_final.b[static_cast<std::size_t>(w)];
    const int j = last_slot_touching(desc, w);
    if (j < 0) {
      const int k = w - desc.quantum_inputs;
      rs.apply_pauli_bit(off.ancilla_carriers[static_cast<std::size_t>(k)],
                         ca, cb);
      continue;
    }
    const auto& sw = slot_wires(desc, j);
    const auto p = static_cast<std::size_t>(
        std::find(sw.begin(), sw.end(), w) - sw.begin());
    for (int v = 0; v < slot_variants(desc, j); ++v) {
      rs.apply_pauli_bit(
          off.gadgets[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)]
              .pairs[p]
              .second,
          ca, cb);
    }
  }

  // Masked affine table.  M tracks the full-width chain mask.
  PauliKey mask = r.m0;
  off.rows.resize(static_cast<std::size_t>(slots));
  for (int j = 0; j < slots; ++j) {
    const auto& sw = slot_wires(desc, j);
    for (int v = 0; v < slot_variants(desc, j); ++v) {
      PauliKey pushed = mask;
      const GateKind kind = variant_kind(desc, j, v);
      if (kind != GateKind::I) pauli_update_gate(kind, sw, pushed);
      PauliKey t = key_on(pushed, sw);
      t ^= r.c[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)];
      t ^= r.m[static_cast<std::size_t>(j)];
      std::vector<std::uint8_t> row = t.to_bits();
      if (slot_controlled(desc, j)) {
        row = xor_bits(row, r.pads[static_cast<std::size_t>(j)]
                                  [static_cast<std::size_t>(v)]);
      }
      off.rows[static_cast<std::size_t>(j)].push_back(std::move(row));
    }
    for (std::size_t p = 0; p < sw.size(); ++p) {
      const auto w = static_cast<std::size_t>(sw[p]);
      mask.a[w] = r.m[static_cast<std::size_t>(j)].a[p];
      mask.b[w] = r.m[static_cast<std::size_t>(j)].b[p];
    }
  }
  off.final_record = (key_on(mask, outs) ^ key_on(r.c_final, outs)).to_bits();
  return off;
}

/**
 * Garble `desc` with quantum input on `x_wires` (consumed; may be entangled
 * with spectator wires) and classical input `c_bits`.  All randomness comes
 * from `r`; the pool must have been allocated by make_epr_pool.  The only
 * sampling inside is the input Bell measurements, drawn through `rng`.
 */
inline EncodingBundle encode(RegisterState& rs, const CircuitDesc& desc,
                             const std::vector<int>& x_wires,
                             const std::vector<std::uint8_t>& c_bits,
                             const EncodingRandomness& r, const EprPool& pool,
                             RandomSource& rng) {
  garble_check(desc);
  garble_detail::check_shapes(desc, pool, r);
  if (static_cast<int>(x_wires.size()) != desc.quantum_inputs) {
    throw std::invalid_argument("encode: quantum input width mismatch");
  }
  if (static_cast<int>(c_bits.size()) != desc.classical_inputs) {
    throw std::invalid_argument("encode: classical input width mismatch");
  }

  const int slots = static_cast<int>(desc.gates.size());
  EncodingBundle bundle;
  bundle.topology = topology_of(desc);
  bundle.offline = encode_offline(rs, desc, r, pool.e3);

  // --- Online pieces. ------------------------------------------------------
  for (int i = 0; i < desc.quantum_inputs; ++i) {
    const auto wi = static_cast<std::size_t>(i);
    bundle.online_q.push_back(garble_detail::encode_input_piece(
        rs, x_wires[wi], pool.e2[wi], r.m0.a[wi], r.m0.b[wi], rng));
    bundle.manifest.online_quantum.push_back(
        {"x[" + std::to_string(i) + "]", "e2[" + std::to_string(i) + "]",
         "m0[" + std::to_string(i) + "]"});
  }
  for (int t = 0; t < desc.classical_inputs; ++t) {
    std::vector<std::pair<int, std::vector<std::uint8_t>>> selected;
    std::vector<std::string> deps = {"c_bits[" + std::to_string(t) + "]"};
    for (int j = 0; j < slots; ++j) {
      if (desc.gates[static_cast<std::size_t>(j)].control != t) continue;
      const int v = c_bits[static_cast<std::size_t>(t)] != 0 ? 1 : 0;
      selected.push_back({j, r.pads[static_cast<std::size_t>(j)]
                                   [static_cast<std::size_t>(v)]});
      deps.push_back("pad[" + std::to_string(j) + "][" + std::to_string(v) +
                     "]");
    }
    bundle.online_c.push_back(garble_detail::encode_classical_piece(
        t, c_bits[static_cast<std::size_t>(t)], std::move(selected)));
    bundle.manifest.online_classical.push_back(std::move(deps));
  }

  bundle.manifest.offline.push_back("m0");
  bundle.manifest.offline.push_back("anc_mask");
  bundle.manifest.offline.push_back("c_final");
  bundle.manifest.offline.push_back("e3[*]");
  for (int j = 0; j < slots; ++j) {
    bundle.manifest.offline.push_back("m[" + std::to_string(j) + "]");
    for (int v = 0; v < slot_variants(desc, j); ++v) {
      bundle.manifest.offline.push_back("c[" + std::to_string(j) + "][" +
                                        std::to_string(v) + "]");
      if (slot_controlled(desc, j)) {
        bundle.manifest.offline.push_back("pad[" + std::to_string(j) + "][" +
                                          std::to_string(v) + "]");
      }
    }
  }
  return bundle;
}

}  // namespace qfe
