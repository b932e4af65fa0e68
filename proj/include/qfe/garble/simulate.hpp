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
 * Simulate an encoding bundle from the circuit output alone.
 *
 * Ingredients: the public description, the classical input bits, published
 * classical strings (all uniform in the real ensemble), and internal
 * uniform Bell outcomes o_j.  The bundle is assembled so the decoder's
 * chain replay comes out consistent: every teleportation interface is a
 * Bell state pinned to o_j, unused gadget variants are maximally mixed,
 * and the final carriers of the output wires hold the provided output state
 * under exactly the Pauli correction the chain will unmask.
 *
 * `f_out_wires` (in output-wire order; may be entangled with spectators)
 * are consumed into the bundle as those final carriers.
 */
inline EncodingBundle simulate_conditional(RegisterState& rs,
                                           const std::vector<int>& f_out_wires,
                                           const CircuitDesc& desc,
                                           const std::vector<std::uint8_t>& c_bits,
                                           const PublishedValues& pub,
                                           RandomSource& rng) {
  garble_check(desc);
  const int wires = desc.wires();
  const int slots = static_cast<int>(desc.gates.size());
  const auto outs = desc.output_wires();
  if (static_cast<int>(c_bits.size()) != desc.classical_inputs) {
    throw std::invalid_argument("simulate: classical input width mismatch");
  }
  if (f_out_wires.size() != outs.size()) {
    throw std::invalid_argument("simulate: output shape mismatch");
  }
  if (pub.kappa0.size() != static_cast<std::size_t>(2 * wires) ||
      static_cast<int>(pub.rows.size()) != slots ||
      static_cast<int>(pub.online_pads.size()) != slots ||
      pub.final_record.size() != 2 * outs.size()) {
    throw std::invalid_argument("simulate: published-value shape mismatch");
  }
  for (int j = 0; j < slots; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    const std::size_t arity = slot_wires(desc, j).size();
    const std::size_t variants =
        static_cast<std::size_t>(slot_variants(desc, j));
    if (pub.rows[jj].size() != variants) {
      throw std::invalid_argument("simulate: row count mismatch");
    }
    for (const auto& row : pub.rows[jj]) {
      if (row.size() != 2 * arity) {
        throw std::invalid_argument("simulate: row width mismatch");
      }
    }
    if (pub.online_pads[jj].size() !=
        (slot_controlled(desc, j) ? 2 * arity : 0u)) {
      throw std::invalid_argument("simulate: pad width mismatch");
    }
  }

  // Internal decode-time Bell outcomes, one per gadget pair.
  std::vector<PauliKey> o;
  for (int j = 0; j < slots; ++j) {
    o.push_back(PauliKey::random(slot_wires(desc, j).size(), rng));
  }

  // Chain replay: the masked key the decoder will compute.
  PauliKey kappa(static_cast<std::size_t>(wires));
  for (int w = 0; w < wires; ++w) {
    kappa.a[static_cast<std::size_t>(w)] =
        pub.kappa0[static_cast<std::size_t>(2 * w)];
    kappa.b[static_cast<std::size_t>(w)] =
        pub.kappa0[static_cast<std::size_t>(2 * w + 1)];
  }
  for (int j = 0; j < slots; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    const auto& sw = slot_wires(desc, j);
    const int v = chosen_variant(desc, j, c_bits);
    for (std::size_t p = 0; p < sw.size(); ++p) {
      const auto w = static_cast<std::size_t>(sw[p]);
      kappa.a[w] = static_cast<std::uint8_t>(kappa.a[w] ^ o[jj].a[p]);
      kappa.b[w] = static_cast<std::uint8_t>(kappa.b[w] ^ o[jj].b[p]);
    }
    const GateKind kind = variant_kind(desc, j, v);
    if (kind != GateKind::I) pauli_update_gate(kind, sw, kappa);
    std::vector<std::uint8_t> row = pub.rows[jj][static_cast<std::size_t>(v)];
    if (slot_controlled(desc, j)) row = xor_bits(row, pub.online_pads[jj]);
    const PauliKey t = PauliKey::from_bits(row);
    for (std::size_t p = 0; p < sw.size(); ++p) {
      const auto w = static_cast<std::size_t>(sw[p]);
      kappa.a[w] = static_cast<std::uint8_t>(kappa.a[w] ^ t.a[p]);
      kappa.b[w] = static_cast<std::uint8_t>(kappa.b[w] ^ t.b[p]);
    }
  }
  const PauliKey correction =
      key_on(kappa, outs) ^ PauliKey::from_bits(pub.final_record);

  // Build the quantum register: per wire, a chain of Bell links through the
  // chosen gadget variants, ending at the output state (or a maximally
  // mixed qubit for traced wires).
  struct PairRole {
    int in = -1;
    int out = -1;
  };
  std::vector<std::vector<std::vector<PairRole>>> gid(
      static_cast<std::size_t>(slots));
  for (int j = 0; j < slots; ++j) {
    gid[static_cast<std::size_t>(j)].assign(
        static_cast<std::size_t>(slot_variants(desc, j)),
        std::vector<PairRole>(slot_wires(desc, j).size()));
  }
  std::vector<int> start(static_cast<std::size_t>(wires), -1);

  for (int w = 0; w < wires; ++w) {
    std::vector<std::pair<int, std::size_t>> seq;  // (slot, pair position)
    for (int j = 0; j < slots; ++j) {
      const auto& sw = slot_wires(desc, j);
      const auto it = std::find(sw.begin(), sw.end(), w);
      if (it != sw.end()) {
        seq.push_back({j, static_cast<std::size_t>(it - sw.begin())});
      }
    }
    int prev_slot = -1, prev_variant = -1;
    std::size_t prev_pos = 0;
    for (std::size_t t = 0; t < seq.size(); ++t) {
      const auto [j, p] = seq[t];
      const auto jj = static_cast<std::size_t>(j);
      const int v = chosen_variant(desc, j, c_bits);
      const auto link = rs.add_state(DensityMatrix::pure(
          bell_vector(o[jj].a[p], o[jj].b[p])));
      if (t == 0) {
        start[static_cast<std::size_t>(w)] = link[0];
      } else {
        gid[static_cast<std::size_t>(prev_slot)]
           [static_cast<std::size_t>(prev_variant)][prev_pos].out = link[0];
      }
      gid[jj][static_cast<std::size_t>(v)][p].in = link[1];
      prev_slot = j;
      prev_variant = v;
      prev_pos = p;
    }
    const auto out_it = std::find(outs.begin(), outs.end(), w);
    int fin;
    if (out_it != outs.end()) {
      fin = f_out_wires[static_cast<std::size_t>(out_it - outs.begin())];
    } else {
      fin = rs.add_qubit(DensityMatrix::maximally_mixed(1));
    }
    if (seq.empty()) {
      start[static_cast<std::size_t>(w)] = fin;
    } else {
      gid[static_cast<std::size_t>(prev_slot)]
         [static_cast<std::size_t>(prev_variant)][prev_pos].out = fin;
    }
  }
  for (int j = 0; j < slots; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    const int v = chosen_variant(desc, j, c_bits);
    for (int u = 0; u < slot_variants(desc, j); ++u) {
      if (u == v) continue;
      for (auto& role : gid[jj][static_cast<std::size_t>(u)]) {
        role.in = rs.add_qubit(DensityMatrix::maximally_mixed(1));
        role.out = rs.add_qubit(DensityMatrix::maximally_mixed(1));
      }
    }
  }

  rs.apply_qotp(correction, f_out_wires);

  // Assemble the bundle from the published values and role table.
  EncodingBundle bundle;
  bundle.topology = topology_of(desc);
  for (int i = 0; i < desc.quantum_inputs; ++i) {
    OnlineQuantumPiece piece;
    piece.carrier = start[static_cast<std::size_t>(i)];
    piece.kappa = {pub.kappa0[static_cast<std::size_t>(2 * i)],
                   pub.kappa0[static_cast<std::size_t>(2 * i + 1)]};
    bundle.online_q.push_back(piece);
  }
  for (int k = 0; k < desc.ancillas; ++k) {
    const int w = desc.quantum_inputs + k;
    bundle.offline.ancilla_carriers.push_back(
        start[static_cast<std::size_t>(w)]);
    bundle.offline.ancilla_kappa.push_back(
        {pub.kappa0[static_cast<std::size_t>(2 * w)],
         pub.kappa0[static_cast<std::size_t>(2 * w + 1)]});
  }
  bundle.offline.gadgets.resize(static_cast<std::size_t>(slots));
  for (int j = 0; j < slots; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    for (int v = 0; v < slot_variants(desc, j); ++v) {
      GadgetRef gadget;
      for (const auto& role : gid[jj][static_cast<std::size_t>(v)]) {
        gadget.pairs.push_back({role.in, role.out});
      }
      bundle.offline.gadgets[jj].push_back(std::move(gadget));
    }
  }
  bundle.offline.rows = pub.rows;
  bundle.offline.final_record = pub.final_record;
  for (int t = 0; t < desc.classical_inputs; ++t) {
    OnlineClassicalPiece piece;
    piece.bit_index = t;
    piece.value = c_bits[static_cast<std::size_t>(t)];
    for (int j = 0; j < slots; ++j) {
      if (desc.gates[static_cast<std::size_t>(j)].control == t) {
        piece.pads.push_back({j, pub.online_pads[static_cast<std::size_t>(j)]});
      }
    }
    bundle.online_c.push_back(std::move(piece));
  }
  bundle.manifest.offline.push_back("simulated");
  return bundle;
}

/** Draw a full set of published strings uniformly (their real marginal). */
inline PublishedValues sample_published(const CircuitDesc& desc,
                                        RandomSource& rng) {
  garble_check(desc);
  PublishedValues pub;
  pub.kappa0 = rng.bits(static_cast<std::size_t>(2 * desc.wires()));
  for (std::size_t j = 0; j < desc.gates.size(); ++j) {
    const int jj = static_cast<int>(j);
    const std::size_t arity = slot_wires(desc, jj).size();
    pub.rows.emplace_back();
    for (int v = 0; v < slot_variants(desc, jj); ++v) {
      pub.rows.back().push_back(rng.bits(2 * arity));
    }
    pub.online_pads.push_back(
        slot_controlled(desc, jj) ? rng.bits(2 * arity)
                                  : std::vector<std::uint8_t>{});
  }
  pub.final_record = rng.bits(2 * desc.output_wires().size());
  return pub;
}

/** Full simulator: draw the published strings uniformly, then condition. */
inline EncodingBundle simulate(RegisterState& rs,
                               const std::vector<int>& f_out_wires,
                               const CircuitDesc& desc,
                               const std::vector<std::uint8_t>& c_bits,
                               RandomSource& rng) {
  const PublishedValues pub = sample_published(desc, rng);
  return simulate_conditional(rs, f_out_wires, desc, c_bits, pub, rng);
}

}  // namespace qfe
