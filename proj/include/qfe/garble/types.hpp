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

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "qfe/circuit.hpp"
#include "qfe/core.hpp"

namespace qfe {

/**
 * Gate-teleportation garbling of Clifford circuits.
 *
 * The evaluator threads each circuit wire through a chain of teleportations.
 * For gate slot j the offline part prepares a *gadget*: one EPR pair per
 * touched wire, with the gate applied to the output halves followed by a
 * fresh secret Pauli mask (c_j, d_j).  Teleporting a wire into a gadget
 * applies the gate while re-randomizing the wire's Pauli key; the key
 * evolution
 *
 *     k_j = A_j(k_{j-1} xor o_j) xor (c_j, d_j)
 *
 * (A_j the gate's linear Pauli-update map, o_j the Bell outcomes) is
 * published in *masked* form: the decoder tracks kappa_j = k_j xor m_j via
 * published offsets T_j = A_j(m_{j-1}) xor (c_j,d_j) xor m_j, where the m_j
 * are fresh secret chain masks.  Classically controlled slots carry two
 * gadget variants (identity / gate) and two offset rows, each row one-time
 * padded; the online classical piece releases only the pad for the actual
 * bit value.  A final record unmasks exactly the output-wire correction,
 * which is uniform thanks to a last fresh mask, so every published string
 * is (jointly) uniform.
 *
 * The circuit description with gate kinds is treated as public: decode and
 * simulate both receive it, and the simulator additionally receives the
 * classical input bits.  What the encoding hides is the quantum input
 * (beyond the circuit output).
 */

/** All classical randomness consumed by encode, with fixed draw order. */
struct EncodingRandomness {
  PauliKey m0;                      // initial chain mask, width = wires()
  std::vector<PauliKey> m;          // per-slot fresh chain mask, width |S_j|
  std::vector<std::vector<PauliKey>> c;  // [slot][variant] gadget mask |S_j|
  std::vector<std::vector<std::vector<std::uint8_t>>> pads;  // [slot][variant]
  PauliKey anc_mask;                // per ancilla wire
  PauliKey c_final;                 // width wires(); zero where inapplicable
};

/** EPR pairs consumed by an encoding, as wire ids in a RegisterState. */
struct EprPool {
  std::vector<std::pair<int, int>> e2;  // per input wire: (measured, carrier)
  std::vector<std::vector<std::vector<std::pair<int, int>>>>
      e3;                           // [slot][variant][pair]: (in, out)
  std::vector<int> e1;              // classical-encoding auxiliaries (unused
                                    // by this construction; kept so the pool
                                    // partition is explicit)
};

struct OnlineQuantumPiece {
  int carrier = -1;                      // the teleported wire's EPR half
  std::array<std::uint8_t, 2> kappa{};   // masked Bell outcome (a, b)
};

struct OnlineClassicalPiece {
  int bit_index = -1;
  std::uint8_t value = 0;
  // (slot, released row pad) for every slot controlled by this bit.
  std::vector<std::pair<int, std::vector<std::uint8_t>>> pads;
};

struct GadgetRef {
  std::vector<std::pair<int, int>> pairs;  // per touched wire: (in, out)
};

struct OfflinePart {
  std::vector<int> ancilla_carriers;
  std::vector<std::array<std::uint8_t, 2>> ancilla_kappa;
  std::vector<std::vector<GadgetRef>> gadgets;          // [slot][variant]
  std::vector<std::vector<std::vector<std::uint8_t>>> rows;  // [slot][row]
  std::vector<std::uint8_t> final_record;               // 2 * |outputs| bits
};

/** Who read what: emitted at encode time, checked by decomposability tests. */
struct DependencyManifest {
  std::vector<std::vector<std::string>> online_quantum;
  std::vector<std::vector<std::string>> online_classical;
  std::vector<std::string> offline;
};

struct EncodingBundle {
  OfflinePart offline;
  std::vector<OnlineQuantumPiece> online_q;
  std::vector<OnlineClassicalPiece> online_c;
  Topology topology;
  DependencyManifest manifest;
};

/** The classical strings a bundle reveals, separated from wire ids. */
struct PublishedValues {
  std::vector<std::uint8_t> kappa0;                     // 2 * wires()
  std::vector<std::vector<std::vector<std::uint8_t>>> rows;  // as OfflinePart
  std::vector<std::vector<std::uint8_t>> online_pads;   // per slot; empty if
                                                        // uncontrolled
  std::vector<std::uint8_t> final_record;
};

// ---------------------------------------------------------------------------
// Layout helpers (all derived from the public description).

inline bool slot_controlled(const CircuitDesc& desc, int j) {
  return desc.gates[static_cast<std::size_t>(j)].controlled();
}

inline int slot_variants(const CircuitDesc& desc, int j) {
  return slot_controlled(desc, j) ? 2 : 1;
}

/** Variant 0 of a controlled slot is the identity hop; variant 1 the gate. */
inline GateKind variant_kind(const CircuitDesc& desc, int j, int v) {
  const GateKind k = desc.gates[static_cast<std::size_t>(j)].kind;
  if (!slot_controlled(desc, j)) return k;
  return v == 0 ? GateKind::I : k;
}

inline int chosen_variant(const CircuitDesc& desc, int j,
                          const std::vector<std::uint8_t>& c_bits) {
  if (!slot_controlled(desc, j)) return 0;
  const int bit = desc.gates[static_cast<std::size_t>(j)].control;
  return c_bits.at(static_cast<std::size_t>(bit)) != 0 ? 1 : 0;
}

inline const std::vector<int>& slot_wires(const CircuitDesc& desc, int j) {
  return desc.gates[static_cast<std::size_t>(j)].wires;
}

inline int last_slot_touching(const CircuitDesc& desc, int w) {
  int last = -1;
  for (std::size_t j = 0; j < desc.gates.size(); ++j) {
    const auto& ws = desc.gates[j].wires;
    if (std::find(ws.begin(), ws.end(), w) != ws.end()) {
      last = static_cast<int>(j);
    }
  }
  return last;
}

/**
 * The final fresh mask can be applied to a wire's last carrier only when the
 * offline part holds that carrier: gadget output halves and ancilla
 * carriers qualify; an input wire no gate ever touches does not (its carrier
 * is the online piece's EPR half).  Only output wires need the mask.
 */
inline bool c_final_applicable(const CircuitDesc& desc, int w) {
  const auto outs = desc.output_wires();
  if (std::find(outs.begin(), outs.end(), w) == outs.end()) return false;
  return last_slot_touching(desc, w) >= 0 || w >= desc.quantum_inputs;
}

/** Slice a full-width key down to the given wires, in the given order. */
inline PauliKey key_on(const PauliKey& key, const std::vector<int>& wires) {
  PauliKey out(wires.size());
  for (std::size_t i = 0; i < wires.size(); ++i) {
    out.a[i] = key.a.at(static_cast<std::size_t>(wires[i]));
    out.b[i] = key.b.at(static_cast<std::size_t>(wires[i]));
  }
  return out;
}

/** Circuits the garbler accepts: well-formed and Clifford throughout. */
inline void garble_check(const CircuitDesc& desc) {
  require_valid(desc);
  for (const Gate& g : desc.gates) {
    if (!gate_is_clifford(g.kind)) {
      throw std::invalid_argument("garble: non-Clifford gate " +
                                  std::string(gate_name(g.kind)));
    }
  }
}

/** Gadget EPR pairs the offline part consumes (the e_3 partition). */
inline int offline_epr_count(const Topology& topo) {
  int count = 0;
  for (const auto& slot : topo.slots) {
    const int variants = slot.control >= 0 ? 2 : 1;
    count += variants * static_cast<int>(slot.wires.size());
  }
  return count;
}

/** Allocate all EPR pairs an encoding will consume. */
inline EprPool make_epr_pool(RegisterState& rs, const CircuitDesc& desc) {
  garble_check(desc);
  EprPool pool;
  for (int i = 0; i < desc.quantum_inputs; ++i) {
    auto ids = rs.add_epr_pairs(1);
    pool.e2.push_back({ids[0], ids[1]});
  }
  pool.e3.resize(desc.gates.size());
  for (std::size_t j = 0; j < desc.gates.size(); ++j) {
    const int jj = static_cast<int>(j);
    pool.e3[j].resize(static_cast<std::size_t>(slot_variants(desc, jj)));
    for (int v = 0; v < slot_variants(desc, jj); ++v) {
      for (std::size_t p = 0; p < slot_wires(desc, jj).size(); ++p) {
        auto ids = rs.add_epr_pairs(1);
        pool.e3[j][static_cast<std::size_t>(v)].push_back({ids[0], ids[1]});
      }
    }
  }
  return pool;
}

/** Draw all encoding randomness in a fixed, documented order. */
inline EncodingRandomness sample_randomness(const CircuitDesc& desc,
                                            RandomSource& rng) {
  garble_check(desc);
  const int w = desc.wires();
  EncodingRandomness r;
  r.m0 = PauliKey::random(static_cast<std::size_t>(w), rng);
  for (std::size_t j = 0; j < desc.gates.size(); ++j) {
    const int jj = static_cast<int>(j);
    const std::size_t arity = slot_wires(desc, jj).size();
    r.m.push_back(PauliKey::random(arity, rng));
    r.c.emplace_back();
    r.pads.emplace_back();
    for (int v = 0; v < slot_variants(desc, jj); ++v) {
      r.c.back().push_back(PauliKey::random(arity, rng));
      if (slot_controlled(desc, jj)) {
        r.pads.back().push_back(rng.bits(2 * arity));
      }
    }
  }
  r.anc_mask = PauliKey::random(static_cast<std::size_t>(desc.ancillas), rng);
  r.c_final = PauliKey(static_cast<std::size_t>(w));
  for (int wire = 0; wire < w; ++wire) {
    if (c_final_applicable(desc, wire)) {
      r.c_final.a[static_cast<std::size_t>(wire)] = rng.bit();
      r.c_final.b[static_cast<std::size_t>(wire)] = rng.bit();
    }
  }
  return r;
}

/** Bit length of the flat randomness serialization for `desc`. */
inline std::size_t randomness_bit_count(const CircuitDesc& desc) {
  std::size_t n = 2 * static_cast<std::size_t>(desc.wires());  // m0
  for (std::size_t j = 0; j < desc.gates.size(); ++j) {
    const int jj = static_cast<int>(j);
    const std::size_t arity = slot_wires(desc, jj).size();
    n += 2 * arity;  // m[j]
    for (int v = 0; v < slot_variants(desc, jj); ++v) {
      n += 2 * arity;                                   // c[j][v]
      if (slot_controlled(desc, jj)) n += 2 * arity;    // pads[j][v]
    }
  }
  n += 2 * static_cast<std::size_t>(desc.ancillas);  // anc_mask
  n += 2 * static_cast<std::size_t>(desc.wires());   // c_final
  return n;
}

/**
 * Flatten the encoding randomness to bits, in the same order the fields are
 * declared: m0, then per slot m[j] and per variant c[j][v] (plus its row pad
 * when the slot is controlled), then anc_mask and c_final.  Pauli keys use
 * their to_bits layout (all a's, then all b's).
 */
inline std::vector<std::uint8_t> randomness_to_bits(
    const CircuitDesc& desc, const EncodingRandomness& r) {
  std::vector<std::uint8_t> out;
  auto put = [&out](const std::vector<std::uint8_t>& bits) {
    out.insert(out.end(), bits.begin(), bits.end());
  };
  put(r.m0.to_bits());
  for (std::size_t j = 0; j < desc.gates.size(); ++j) {
    const int jj = static_cast<int>(j);
    put(r.m[j].to_bits());
    for (int v = 0; v < slot_variants(desc, jj); ++v) {
      put(r.c[j][static_cast<std::size_t>(v)].to_bits());
      if (slot_controlled(desc, jj)) {
        put(r.pads[j][static_cast<std::size_t>(v)]);
      }
    }
  }
  put(r.anc_mask.to_bits());
  put(r.c_final.to_bits());
  return out;
}

/** Inverse of randomness_to_bits. */
inline EncodingRandomness randomness_from_bits(
    const CircuitDesc& desc, const std::vector<std::uint8_t>& bits) {
  if (bits.size() != randomness_bit_count(desc)) {
    throw std::invalid_argument("randomness_from_bits: length mismatch");
  }
  std::size_t at = 0;
  auto take = [&](std::size_t n) {
    std::vector<std::uint8_t> v(bits.begin() + static_cast<long>(at),
                                bits.begin() + static_cast<long>(at + n));
    at += n;
    return v;
  };
  auto take_key = [&](std::size_t n) { return PauliKey::from_bits(take(2 * n)); };
  EncodingRandomness r;
  r.m0 = take_key(static_cast<std::size_t>(desc.wires()));
  for (std::size_t j = 0; j < desc.gates.size(); ++j) {
    const int jj = static_cast<int>(j);
    const std::size_t arity = slot_wires(desc, jj).size();
    r.m.push_back(take_key(arity));
    r.c.emplace_back();
    r.pads.emplace_back();
    for (int v = 0; v < slot_variants(desc, jj); ++v) {
      r.c.back().push_back(take_key(arity));
      if (slot_controlled(desc, jj)) r.pads.back().push_back(take(2 * arity));
    }
  }
  r.anc_mask = take_key(static_cast<std::size_t>(desc.ancillas));
  r.c_final = take_key(static_cast<std::size_t>(desc.wires()));
  return r;
}

// ---------------------------------------------------------------------------
// Bundle views used by the ensemble tests.

/** Canonical quantum wire order of a bundle (roles, not values). */
inline std::vector<int> bundle_wires(const EncodingBundle& bundle) {
  std::vector<int> out;
  for (const auto& piece : bundle.online_q) out.push_back(piece.carrier);
  for (int id : bundle.offline.ancilla_carriers) out.push_back(id);
  for (const auto& slot : bundle.offline.gadgets) {
    for (const auto& gadget : slot) {
      for (const auto& [in_id, out_id] : gadget.pairs) {
        out.push_back(in_id);
        out.push_back(out_id);
      }
    }
  }
  return out;
}

inline PublishedValues published_of(const EncodingBundle& bundle) {
  PublishedValues pub;
  for (const auto& piece : bundle.online_q) {
    pub.kappa0.push_back(piece.kappa[0]);
    pub.kappa0.push_back(piece.kappa[1]);
  }
  for (const auto& k : bundle.offline.ancilla_kappa) {
    pub.kappa0.push_back(k[0]);
    pub.kappa0.push_back(k[1]);
  }
  pub.rows = bundle.offline.rows;
  pub.online_pads.resize(bundle.offline.rows.size());
  for (const auto& piece : bundle.online_c) {
    for (const auto& [slot, pad] : piece.pads) {
      pub.online_pads.at(static_cast<std::size_t>(slot)) = pad;
    }
  }
  pub.final_record = bundle.offline.final_record;
  return pub;
}

/** Serialize everything a bundle reveals classically (for cq labels). */
inline std::string bundle_label(const EncodingBundle& bundle) {
  const PublishedValues pub = published_of(bundle);
  std::string label = "k:" + bits_to_string(pub.kappa0);
  for (std::size_t j = 0; j < pub.rows.size(); ++j) {
    label += "|r" + std::to_string(j) + ":";
    for (const auto& row : pub.rows[j]) label += bits_to_string(row) + ",";
    if (!pub.online_pads[j].empty()) {
      label += "p:" + bits_to_string(pub.online_pads[j]);
    }
  }
  label += "|f:" + bits_to_string(pub.final_record);
  label += "|c:";
  for (const auto& piece : bundle.online_c) {
    label += piece.value != 0 ? '1' : '0';
  }
  return label;
}

}  // namespace qfe
