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

/**
 * Decode an encoding bundle: teleport each wire through its gadget chain,
 * maintain the masked key via the published table, unmask the final
 * correction, and apply it to the output carriers.  `public_desc` is the
 * circuit description the bundle garbles (public in this construction; its
 * gate kinds drive the key-update chain).  Returns the output wire ids, in
 * output order; everything else the bundle held is consumed or traced out.
 */
inline std::vector<int> decode(RegisterState& rs,
                               const EncodingBundle& bundle,
                               const CircuitDesc& public_desc,
                               RandomSource& rng) {
  garble_check(public_desc);
  const int wires = public_desc.wires();
  const int slots = static_cast<int>(public_desc.gates.size());
  const auto outs = public_desc.output_wires();

  if (static_cast<int>(bundle.online_q.size()) !=
          public_desc.quantum_inputs ||
      static_cast<int>(bundle.offline.ancilla_carriers.size()) !=
          public_desc.ancillas ||
      static_cast<int>(bundle.offline.gadgets.size()) != slots ||
      static_cast<int>(bundle.offline.rows.size()) != slots) {
    throw std::invalid_argument("decode: bundle shape mismatch");
  }
  if (bundle.offline.final_record.size() != 2 * outs.size()) {
    throw std::invalid_argument("decode: final record width mismatch");
  }

  // Classical online pieces: bit values and the pads they released.
  std::vector<int> bit_value(
      static_cast<std::size_t>(public_desc.classical_inputs), -1);
  std::vector<const std::vector<std::uint8_t>*> pad_of_slot(
      static_cast<std::size_t>(slots), nullptr);
  for (const auto& piece : bundle.online_c) {
    if (piece.bit_index < 0 ||
        piece.bit_index >= public_desc.classical_inputs) {
      throw std::invalid_argument("decode: stray online classical piece");
    }
    bit_value[static_cast<std::size_t>(piece.bit_index)] =
        piece.value != 0 ? 1 : 0;
    for (const auto& [slot, pad] : piece.pads) {
      if (slot < 0 || slot >= slots) {
        throw std::invalid_argument("decode: pad references unknown slot");
      }
      pad_of_slot[static_cast<std::size_t>(slot)] = &pad;
    }
  }

  // Assemble the masked key and the current carrier of every wire.
  PauliKey kappa(static_cast<std::size_t>(wires));
  std::vector<int> carrier(static_cast<std::size_t>(wires), -1);
  for (int i = 0; i < public_desc.quantum_inputs; ++i) {
    const auto& piece = bundle.online_q[static_cast<std::size_t>(i)];
    kappa.a[static_cast<std::size_t>(i)] = piece.kappa[0];
    kappa.b[static_cast<std::size_t>(i)] = piece.kappa[1];
    carrier[static_cast<std::size_t>(i)] = piece.carrier;
  }
  for (int k = 0; k < public_desc.ancillas; ++k) {
    const int w = public_desc.quantum_inputs + k;
    kappa.a[static_cast<std::size_t>(w)] =
        bundle.offline.ancilla_kappa[static_cast<std::size_t>(k)][0];
    kappa.b[static_cast<std::size_t>(w)] =
        bundle.offline.ancilla_kappa[static_cast<std::size_t>(k)][1];
    carrier[static_cast<std::size_t>(w)] =
        bundle.offline.ancilla_carriers[static_cast<std::size_t>(k)];
  }

  std::vector<int> junk;  // unused gadget variants, discarded at the end
  for (int j = 0; j < slots; ++j) {
    const auto& sw = slot_wires(public_desc, j);
    const auto jj = static_cast<std::size_t>(j);
    if (static_cast<int>(bundle.offline.gadgets[jj].size()) !=
            slot_variants(public_desc, j) ||
        bundle.offline.rows[jj].size() != bundle.offline.gadgets[jj].size()) {
      throw std::invalid_argument("decode: slot " + std::to_string(j) +
                                  " row/gadget count mismatch");
    }
    int v = 0;
    if (slot_controlled(public_desc, j)) {
      const int bit = public_desc.gates[jj].control;
      v = bit_value.at(static_cast<std::size_t>(bit));
      if (v < 0) {
        throw std::invalid_argument(
            "decode: no online piece for control bit " + std::to_string(bit));
      }
    }
    const auto& gadget = bundle.offline.gadgets[jj][static_cast<std::size_t>(v)];
    if (gadget.pairs.size() != sw.size()) {
      throw std::invalid_argument("decode: gadget arity mismatch");
    }

    // Teleport the touched wires into the gadget, folding the outcomes into
    // the masked key *before* the gate's linear update.
    for (std::size_t p = 0; p < sw.size(); ++p) {
      const auto w = static_cast<std::size_t>(sw[p]);
      auto [a, b] = rs.bell_measure(carrier[w], gadget.pairs[p].first, rng);
      kappa.a[w] = static_cast<std::uint8_t>(kappa.a[w] ^ a);
      kappa.b[w] = static_cast<std::uint8_t>(kappa.b[w] ^ b);
      carrier[w] = gadget.pairs[p].second;
    }
    const GateKind kind = variant_kind(public_desc, j, v);
    if (kind != GateKind::I) pauli_update_gate(kind, sw, kappa);

    std::vector<std::uint8_t> row =
        bundle.offline.rows[jj][static_cast<std::size_t>(v)];
    if (slot_controlled(public_desc, j)) {
      const auto* pad = pad_of_slot[jj];
      if (pad == nullptr) {
        throw std::invalid_argument("decode: row pad for slot " +
                                    std::to_string(j) +
                                    " missing from its online piece");
      }
      if (pad->size() != row.size()) {
        throw std::invalid_argument("decode: row pad width mismatch at slot " +
                                    std::to_string(j));
      }
      row = xor_bits(row, *pad);
    }
    const PauliKey t = PauliKey::from_bits(row);
    for (std::size_t p = 0; p < sw.size(); ++p) {
      const auto w = static_cast<std::size_t>(sw[p]);
      kappa.a[w] = static_cast<std::uint8_t>(kappa.a[w] ^ t.a[p]);
      kappa.b[w] = static_cast<std::uint8_t>(kappa.b[w] ^ t.b[p]);
    }

    for (int u = 0; u < slot_variants(public_desc, j); ++u) {
      if (u == v) continue;
      for (const auto& [in_id, out_id] :
           bundle.offline.gadgets[jj][static_cast<std::size_t>(u)].pairs) {
        junk.push_back(in_id);
        junk.push_back(out_id);
      }
    }
  }

  // Unmask and apply the output correction.
  const PauliKey rec = PauliKey::from_bits(bundle.offline.final_record);
  for (std::size_t idx = 0; idx < outs.size(); ++idx) {
    const auto w = static_cast<std::size_t>(outs[idx]);
    rs.apply_pauli_bit(carrier[w], kappa.a[w] ^ rec.a[idx],
                       kappa.b[w] ^ rec.b[idx]);
  }
  for (int w : public_desc.trace_out) {
    junk.push_back(carrier[static_cast<std::size_t>(w)]);
  }
  rs.trace_out(junk);

  std::vector<int> out_ids;
  for (int w : outs) out_ids.push_back(carrier[static_cast<std::size_t>(w)]);
  return out_ids;
}

}  // namespace qfe
