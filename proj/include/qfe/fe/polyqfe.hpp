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
 * Quantum functional encryption for a polynomial-size class of classically
 * described Clifford circuits ("PolyQFE").
 *
 * The supported class is a single classically controlled circuit U with l
 * control bits: each member is U with its controls bound to a bit string
 * (for the canonical record-structured class, every l-bit string is a
 * circuit description).  Enc garbles the *message* against U without
 * knowing which member will be opened; KeyGen later releases exactly the
 * pieces for one description C.  Concretely Enc:
 *
 *  - draws the garbling randomness R and two banks of EPR pairs: one pair
 *    per message qubit (the teleportation pool of the garbled-circuit
 *    online encoder) and one pair per class bit, whose first halves are
 *    measured to mask bits t_i;
 *  - encrypts (R, t_i) under a two-function classical FE instance per
 *    class bit i, whose family member f_{i,v} emits bit i's online
 *    classical garbling piece at value v, masked by t_i;
 *  - encrypts, under two single-function QFE instances, the *input side*
 *    (a channel that Bell-measures the message into the pool and emits the
 *    masked outcomes) and the *offline side* (a channel that reads R and
 *    builds the full offline garbling over a gadget EPR bank).
 *
 * A function key opens one member per two-function instance plus both
 * single-function keys; Dec reassembles a complete encoding bundle from
 * the opened pieces and runs the garbled-circuit decoder.  Security
 * reduces, hybrid by hybrid, to the sub-schemes' exact simulators and
 * finally to the garbled circuit's simulator; the hybrid chain is exposed
 * as a first-class runner so tests can compare adjacent levels directly.
 */

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfe/cfe.hpp"
#include "qfe/circuit.hpp"
#include "qfe/core.hpp"
#include "qfe/fe/oneqfe.hpp"
#include "qfe/garble.hpp"

namespace qfe {

// ---------------------------------------------------------------------------
// The supported class.

/**
 * A circuit class, represented by its classically controlled universal
 * circuit.  Members are the specializations universal(bits); the class size
 * is 2^l for l = universal.classical_inputs.
 */
struct PolyQfeClass {
  CircuitDesc universal;

  int l() const { return universal.classical_inputs; }
  int n() const { return universal.quantum_inputs; }
};

/** Wrap any garblable classically controlled circuit as a class. */
inline PolyQfeClass poly_class(CircuitDesc universal) {
  garble_check(universal);
  return {std::move(universal)};
}

/**
 * The canonical class: every circuit whose description fits `records`
 * gate records over (n_in + n_anc) wires, with the given ancilla and
 * trace-out shape applied around the recorded gates.
 */
inline PolyQfeClass poly_class_records(int n_in, int n_anc,
                                      std::vector<int> trace_out,
                                      int records) {
  if (n_in < 0 || n_anc < 0 || records < 0) {
    throw std::invalid_argument("poly_class_records: negative shape");
  }
  const int width = record_width(n_in + n_anc);
  CircuitDesc u = universal_circuit(records * width, n_in + n_anc);
  u.quantum_inputs = n_in;
  u.ancillas = n_anc;
  u.trace_out = std::move(trace_out);
  garble_check(u);
  return {std::move(u)};
}

/**
 * Encode a concrete circuit as a description string of a record-structured
 * class.  The circuit must match the class's input/ancilla/trace-out shape
 * and fit in the class's record budget; gates outside the encodable menu
 * are rejected.
 */
inline std::vector<std::uint8_t> poly_encode_member(const PolyQfeClass& cls,
                                                    const CircuitDesc& member) {
  const CircuitDesc& u = cls.universal;
  if (member.classical_inputs != 0 ||
      member.quantum_inputs != u.quantum_inputs ||
      member.ancillas != u.ancillas || member.trace_out != u.trace_out) {
    throw std::invalid_argument(
        "poly_encode_member: circuit shape does not match the class");
  }
  const int width = record_width(u.wires());
  if (u.classical_inputs % width != 0) {
    throw std::invalid_argument(
        "poly_encode_member: class is not record-structured");
  }
  CircuitDesc plain;  // recorded gates act on the full wire set
  plain.quantum_inputs = u.wires();
  plain.gates = member.gates;
  const CircuitEncoding enc = encode_circuit(plain, u.classical_inputs / width);
  if (enc.length() != u.classical_inputs) {
    throw std::invalid_argument(
        "poly_encode_member: circuit does not fit the class's record budget");
  }
  return enc.bits;
}

// ---------------------------------------------------------------------------
// Piece layout.

namespace poly_detail {

inline std::vector<std::uint8_t> norm_bits(const std::vector<std::uint8_t>& v) {
  std::vector<std::uint8_t> out;
  out.reserve(v.size());
  for (std::uint8_t b : v) out.push_back(b != 0 ? 1 : 0);
  return out;
}

/** Slots controlled by class bit `bit`, ascending. */
inline std::vector<int> slots_of_bit(const CircuitDesc& u, int bit) {
  std::vector<int> out;
  for (std::size_t j = 0; j < u.gates.size(); ++j) {
    if (u.gates[j].control == bit) out.push_back(static_cast<int>(j));
  }
  return out;
}

/**
 * Input-wire slice of the initial chain mask, in key serialization order
 * (all a's, then all b's).  Ancilla wires keep their m0 entries on the
 * offline side; only the teleported message wires need mask qubits.
 */
inline std::vector<std::uint8_t> m0_input_bits(const CircuitDesc& u,
                                               const PauliKey& m0) {
  const auto n = static_cast<std::size_t>(u.quantum_inputs);
  std::vector<std::uint8_t> out;
  out.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(m0.a[i]);
  for (std::size_t i = 0; i < n; ++i) out.push_back(m0.b[i]);
  return out;
}

/** Serialized length of bit `bit`'s online classical piece. */
inline std::size_t piece_bit_count(const CircuitDesc& u, int bit) {
  std::size_t count = 1;  // the bit value itself
  for (int j : slots_of_bit(u, bit)) count += 2 * slot_wires(u, j).size();
  return count;
}

/** Serialize an online classical piece and mask every bit with t. */
inline std::vector<std::uint8_t> masked_piece(const OnlineClassicalPiece& piece,
                                              std::uint8_t t) {
  std::vector<std::uint8_t> out;
  out.push_back(piece.value != 0 ? 1 : 0);
  for (const auto& [slot, pad] : piece.pads) {
    (void)slot;  // pads are stored slot-ascending, matching the parse order
    out.insert(out.end(), pad.begin(), pad.end());
  }
  for (auto& b : out) b = static_cast<std::uint8_t>(b ^ (t != 0 ? 1 : 0));
  return out;
}

/** Inverse of masked_piece, given the public description. */
inline OnlineClassicalPiece parse_piece(const CircuitDesc& u, int bit,
                                        std::vector<std::uint8_t> y,
                                        std::uint8_t t) {
  for (auto& b : y) b = static_cast<std::uint8_t>(b ^ (t != 0 ? 1 : 0));
  OnlineClassicalPiece piece;
  piece.bit_index = bit;
  if (y.empty()) {
    throw std::invalid_argument("polyqfe: empty classical piece");
  }
  piece.value = y[0];
  std::size_t at = 1;
  for (int j : slots_of_bit(u, bit)) {
    const std::size_t width = 2 * slot_wires(u, j).size();
    if (at + width > y.size()) {
      throw std::invalid_argument("polyqfe: classical piece too short");
    }
    piece.pads.push_back(
        {j, std::vector<std::uint8_t>(
                y.begin() + static_cast<long>(at),
                y.begin() + static_cast<long>(at + width))});
    at += width;
  }
  if (at != y.size()) {
    throw std::invalid_argument("polyqfe: classical piece too long");
  }
  return piece;
}

}  // namespace poly_detail

/**
 * Wire sections of the offline-side payload, in order: the masked key-update
 * table, the final record, and the ancilla keys as computational-basis
 * qubits; then the mask-pool halves, the message carriers, the gadget pairs
 * (slot-major, variant-major, (in, out) per pair), and the ancilla carriers.
 */
struct PolyOffLayout {
  int rows_n = 0;
  int rec_n = 0;
  int anck_n = 0;
  int t_n = 0;
  int car_n = 0;
  int gad_n = 0;
  int anc_n = 0;

  int in_extra() const { return t_n + car_n + gad_n; }  // beyond the R qubits
  int out_total() const {
    return rows_n + rec_n + anck_n + t_n + car_n + gad_n + anc_n;
  }
};

inline PolyOffLayout poly_off_layout(const CircuitDesc& u) {
  PolyOffLayout lay;
  for (std::size_t j = 0; j < u.gates.size(); ++j) {
    const int jj = static_cast<int>(j);
    const int arity = static_cast<int>(slot_wires(u, jj).size());
    lay.rows_n += slot_variants(u, jj) * 2 * arity;  // row bits
    lay.gad_n += slot_variants(u, jj) * 2 * arity;   // pair wires
  }
  lay.rec_n = 2 * static_cast<int>(u.output_wires().size());
  lay.anck_n = 2 * u.ancillas;
  lay.t_n = u.classical_inputs;
  lay.car_n = u.quantum_inputs;
  lay.anc_n = u.ancillas;
  return lay;
}

// ---------------------------------------------------------------------------
// The three kinds of sub-scheme functions.

/**
 * The classical function the i-th two-function FE instance evaluates at
 * member value v: on input (R || t) — the flat garbling randomness and the
 * one mask bit for this class bit — emit bit i's online classical piece at
 * value v (the value plus the released row pad of every slot bit i
 * controls), with every output bit XORed with t.  The mask ties the
 * classical opening to the quantum ciphertext: the decoder recovers t by
 * measuring the matching pool qubit, which Enc's own measurement collapsed
 * to the same value.
 */
inline ClassicalFn poly_slot_fn(const CircuitDesc& u, int bit, int value) {
  if (bit < 0 || bit >= u.classical_inputs) {
    throw std::invalid_argument("poly_slot_fn: class bit out of range");
  }
  if (value != 0 && value != 1) {
    throw std::invalid_argument("poly_slot_fn: member value must be 0 or 1");
  }
  ClassicalFn fn;
  fn.in_len = randomness_bit_count(u) + 1;
  fn.out_len = poly_detail::piece_bit_count(u, bit);
  fn.eval = [u, bit, value](const std::vector<std::uint8_t>& x) {
    const std::vector<std::uint8_t> rbits(x.begin(), x.end() - 1);
    const std::uint8_t t = x.back();
    const EncodingRandomness r = randomness_from_bits(u, rbits);
    OnlineClassicalPiece piece;
    piece.bit_index = bit;
    piece.value = static_cast<std::uint8_t>(value);
    for (int j : poly_detail::slots_of_bit(u, bit)) {
      piece.pads.push_back({j, r.pads[static_cast<std::size_t>(j)]
                                     [static_cast<std::size_t>(value)]});
    }
    return poly_detail::masked_piece(piece, t);
  };
  return fn;
}

/**
 * The input-side channel: Bell-measure each message qubit into its pool
 * partner and emit the outcomes, masked by the initial chain mask, as
 * computational-basis qubits.  Input wires: [n message] [n pool firsts]
 * [2n mask qubits holding m0 in key-serialization order (all a's, then all
 * b's)].  Output: per wire i, qubits |a_i ^ m0a_i>, |b_i ^ m0b_i>.
 */
inline Channel poly_f_in(int n) {
  if (n < 0) throw std::invalid_argument("poly_f_in: negative width");
  Channel ch;
  ch.n_in = 4 * n;
  ch.n_out = 2 * n;
  ch.apply = [n](RegisterState& rs, const std::vector<int>& ws,
                 RandomSource& rng) {
    std::vector<std::uint8_t> mask;  // m0: a_0..a_{n-1}, b_0..b_{n-1}
    for (int i = 0; i < 2 * n; ++i) {
      mask.push_back(static_cast<std::uint8_t>(
          rs.measure(ws[static_cast<std::size_t>(2 * n + i)], rng)));
    }
    std::vector<int> out;
    for (int i = 0; i < n; ++i) {
      auto [a, b] = rs.bell_measure(ws[static_cast<std::size_t>(i)],
                                    ws[static_cast<std::size_t>(n + i)], rng);
      const auto ids = rs.add_bits(
          {static_cast<std::uint8_t>(a ^ mask[static_cast<std::size_t>(i)]),
           static_cast<std::uint8_t>(
               b ^ mask[static_cast<std::size_t>(n + i)])});
      out.insert(out.end(), ids.begin(), ids.end());
    }
    return out;
  };
  return ch;
}

/**
 * The offline-side channel: read the garbling randomness off its qubit
 * register and build the offline garbling over the provided gadget bank.
 * Input wires: [randomness_bit_count(u) R qubits] [l mask-pool seconds]
 * [n message-pool seconds] [gadget pairs, slot-major, variant-major,
 * (in, out) per pair].  Output: the PolyOffLayout order.
 */
inline Channel poly_f_off(const CircuitDesc& u) {
  garble_check(u);
  const PolyOffLayout lay = poly_off_layout(u);
  const int n_r = static_cast<int>(randomness_bit_count(u));
  Channel ch;
  ch.n_in = n_r + lay.in_extra();
  ch.n_out = lay.out_total();
  ch.apply = [u, lay, n_r](RegisterState& rs, const std::vector<int>& ws,
                           RandomSource& rng) {
    std::size_t at = 0;
    std::vector<std::uint8_t> rbits;
    for (int i = 0; i < n_r; ++i) {
      rbits.push_back(static_cast<std::uint8_t>(rs.measure(ws[at++], rng)));
    }
    const EncodingRandomness r = randomness_from_bits(u, rbits);
    std::vector<int> t_wires, carriers;
    for (int i = 0; i < lay.t_n; ++i) t_wires.push_back(ws[at++]);
    for (int i = 0; i < lay.car_n; ++i) carriers.push_back(ws[at++]);
    std::vector<std::vector<std::vector<std::pair<int, int>>>> e3(
        u.gates.size());
    for (std::size_t j = 0; j < u.gates.size(); ++j) {
      const int jj = static_cast<int>(j);
      e3[j].resize(static_cast<std::size_t>(slot_variants(u, jj)));
      for (int v = 0; v < slot_variants(u, jj); ++v) {
        for (std::size_t p = 0; p < slot_wires(u, jj).size(); ++p) {
          const int in_id = ws[at++];
          const int out_id = ws[at++];
          e3[j][static_cast<std::size_t>(v)].push_back({in_id, out_id});
        }
      }
    }

    const OfflinePart off = encode_offline(rs, u, r, e3);

    std::vector<std::uint8_t> cbits;  // rows, final record, ancilla keys
    for (const auto& slot : off.rows) {
      for (const auto& row : slot) {
        cbits.insert(cbits.end(), row.begin(), row.end());
      }
    }
    cbits.insert(cbits.end(), off.final_record.begin(),
                 off.final_record.end());
    for (const auto& k : off.ancilla_kappa) {
      cbits.push_back(k[0]);
      cbits.push_back(k[1]);
    }
    std::vector<int> out = rs.add_bits(cbits);
    out.insert(out.end(), t_wires.begin(), t_wires.end());
    out.insert(out.end(), carriers.begin(), carriers.end());
    for (const auto& slot : off.gadgets) {
      for (const auto& gadget : slot) {
        for (const auto& [in_id, out_id] : gadget.pairs) {
          out.push_back(in_id);
          out.push_back(out_id);
        }
      }
    }
    out.insert(out.end(), off.ancilla_carriers.begin(),
               off.ancilla_carriers.end());
    return out;
  };
  return ch;
}

// ---------------------------------------------------------------------------
// Scheme objects.

struct PolyQfeKeys {
  PolyQfeClass cls;
  std::vector<TwoFeKeys> slots;  // one two-function instance per class bit
  OneQfeScheme in_scheme;        // Bell-measurement side
  OneQfeScheme off_scheme;       // garbling side
  bool key_consumed = false;
};

inline PolyQfeKeys polyqfe_setup(const PolyQfeClass& cls, RandomSource& rng) {
  const CircuitDesc& u = cls.universal;
  garble_check(u);
  PolyQfeKeys keys;
  keys.cls = cls;
  for (int i = 0; i < cls.l(); ++i) {
    keys.slots.push_back(
        twofe_setup(poly_slot_fn(u, i, 0), poly_slot_fn(u, i, 1), rng));
  }
  keys.in_scheme = oneqfe_setup(poly_f_in(cls.n()), rng);
  keys.off_scheme = oneqfe_setup(poly_f_off(u), rng);
  return keys;
}

/** Canonical-class setup: l-bit descriptions of plain circuits on n wires. */
inline PolyQfeKeys polyqfe_setup(int l, int n, RandomSource& rng) {
  return polyqfe_setup(poly_class(universal_circuit(l, n)), rng);
}

/**
 * All randomness Enc draws before any measurement, exposed so tests can pin
 * it and enumerate only measurement branches.
 */
struct PolyQfeRandomness {
  EncodingRandomness re;  // garbling randomness (travels as the R register)
  PauliKey ab_in, ab_off;  // pads of the two quantum sub-ciphertexts
};

inline PolyQfeRandomness sample_polyqfe_randomness(const PolyQfeKeys& keys,
                                                   RandomSource& rng) {
  PolyQfeRandomness rand;
  rand.re = sample_randomness(keys.cls.universal, rng);
  rand.ab_in = PauliKey::random(
      static_cast<std::size_t>(keys.in_scheme.f.n_out), rng);
  rand.ab_off = PauliKey::random(
      static_cast<std::size_t>(keys.off_scheme.f.n_out), rng);
  return rand;
}

struct PolyQfeCiphertext {
  std::vector<CfeCiphertext> cts;  // one per class bit
  OneQfeCiphertext ct_in, ct_off;
  std::vector<std::uint8_t> t_bits;  // encryptor-side record of the measured
                                     // mask bits; not part of the ciphertext
                                     // an adversary sees
};

/** Encrypt with pinned randomness; only measurements remain stochastic. */
inline PolyQfeCiphertext polyqfe_enc_with(const PolyQfeKeys& keys,
                                          RegisterState& rs,
                                          const std::vector<int>& msg_wires,
                                          const PolyQfeRandomness& rand,
                                          RandomSource& rng) {
  const CircuitDesc& u = keys.cls.universal;
  const int n = keys.cls.n();
  const int l = keys.cls.l();
  if (static_cast<int>(msg_wires.size()) != n) {
    throw std::invalid_argument("polyqfe_enc: message width mismatch");
  }
  if (static_cast<int>(keys.slots.size()) != l) {
    throw std::invalid_argument("polyqfe_enc: malformed key bundle");
  }

  const auto e2 = rs.add_epr_pairs(n);  // message teleport pool
  const auto el = rs.add_epr_pairs(l);  // classical mask pool
  const auto rbits = randomness_to_bits(u, rand.re);

  PolyQfeCiphertext ct;
  for (int i = 0; i < l; ++i) {
    const int t = rs.measure(el[static_cast<std::size_t>(2 * i)], rng);
    ct.t_bits.push_back(static_cast<std::uint8_t>(t));
    std::vector<std::uint8_t> x = rbits;
    x.push_back(static_cast<std::uint8_t>(t));
    ct.cts.push_back(twofe_enc(keys.slots[static_cast<std::size_t>(i)], x));
  }

  std::vector<int> in_wires = msg_wires;
  for (int i = 0; i < n; ++i) {
    in_wires.push_back(e2[static_cast<std::size_t>(2 * i)]);
  }
  const auto m0_wires =
      rs.add_bits(poly_detail::m0_input_bits(u, rand.re.m0));
  in_wires.insert(in_wires.end(), m0_wires.begin(), m0_wires.end());
  ct.ct_in = oneqfe_enc_with(keys.in_scheme, rs, in_wires, rand.ab_in, rng);

  std::vector<int> off_wires = rs.add_bits(rbits);  // the R register
  for (int i = 0; i < l; ++i) {
    off_wires.push_back(el[static_cast<std::size_t>(2 * i + 1)]);
  }
  for (int i = 0; i < n; ++i) {
    off_wires.push_back(e2[static_cast<std::size_t>(2 * i + 1)]);
  }
  for (std::size_t j = 0; j < u.gates.size(); ++j) {
    const int jj = static_cast<int>(j);
    for (int v = 0; v < slot_variants(u, jj); ++v) {
      for (std::size_t p = 0; p < slot_wires(u, jj).size(); ++p) {
        const auto ids = rs.add_epr_pairs(1);  // gadget bank
        off_wires.push_back(ids[0]);
        off_wires.push_back(ids[1]);
      }
    }
  }
  ct.ct_off = oneqfe_enc_with(keys.off_scheme, rs, off_wires, rand.ab_off,
                              rng);
  return ct;
}

inline PolyQfeCiphertext polyqfe_enc(const PolyQfeKeys& keys,
                                     RegisterState& rs,
                                     const std::vector<int>& msg_wires,
                                     RandomSource& rng) {
  return polyqfe_enc_with(keys, rs, msg_wires,
                          sample_polyqfe_randomness(keys, rng), rng);
}

struct PolyQfeFunctionKey {
  CircuitDesc universal;             // the (public) class description
  std::vector<std::uint8_t> c_bits;  // the certified member
  std::vector<TwoFeKey> slots;
  OneQfeKey in_key, off_key;
};

inline PolyQfeFunctionKey polyqfe_keygen(PolyQfeKeys& keys,
                                         const std::vector<std::uint8_t>&
                                             c_bits) {
  if (static_cast<int>(c_bits.size()) != keys.cls.l()) {
    throw std::invalid_argument("polyqfe_keygen: description length mismatch");
  }
  if (keys.key_consumed) {
    throw std::logic_error(
        "polyqfe_keygen: single-query instance already consumed");
  }
  keys.key_consumed = true;
  PolyQfeFunctionKey sk;
  sk.universal = keys.cls.universal;
  sk.c_bits = poly_detail::norm_bits(c_bits);
  for (std::size_t i = 0; i < sk.c_bits.size(); ++i) {
    sk.slots.push_back(twofe_keygen(keys.slots[i], sk.c_bits[i]));
  }
  sk.in_key = oneqfe_keygen(keys.in_scheme);
  sk.off_key = oneqfe_keygen(keys.off_scheme);
  return sk;
}

/** Certify a concrete circuit of a record-structured class. */
inline PolyQfeFunctionKey polyqfe_keygen(PolyQfeKeys& keys,
                                         const CircuitDesc& member) {
  return polyqfe_keygen(keys, poly_encode_member(keys.cls, member));
}

/**
 * Decrypt: open both quantum sub-ciphertexts, measure off the classical
 * sections (table, record, ancilla keys, mask bits), decrypt and unmask the
 * per-bit pieces, reassemble the encoding bundle, and run the garbled
 * circuit decoder.  Returns the output wires inside `rs`.
 */
inline std::vector<int> polyqfe_dec(const PolyQfeFunctionKey& sk,
                                    RegisterState& rs,
                                    const PolyQfeCiphertext& ct,
                                    RandomSource& rng) {
  const CircuitDesc& u = sk.universal;
  garble_check(u);
  const int n = u.quantum_inputs;
  const int l = u.classical_inputs;
  if (static_cast<int>(sk.slots.size()) != l ||
      static_cast<int>(ct.cts.size()) != l) {
    throw std::invalid_argument("polyqfe_dec: piece count mismatch");
  }
  const PolyOffLayout lay = poly_off_layout(u);

  const auto in_q = oneqfe_dec(sk.in_key, rs, ct.ct_in);
  const auto off_q = oneqfe_dec(sk.off_key, rs, ct.ct_off);
  if (static_cast<int>(in_q.size()) != 2 * n ||
      static_cast<int>(off_q.size()) != lay.out_total()) {
    throw std::invalid_argument("polyqfe_dec: sub-ciphertext width mismatch");
  }

  EncodingBundle bundle;
  bundle.topology = topology_of(u);
  bundle.manifest.offline.push_back("reassembled");

  std::size_t at = 0;
  auto take_bits = [&](int count) {
    std::vector<std::uint8_t> out;
    for (int i = 0; i < count; ++i) {
      out.push_back(static_cast<std::uint8_t>(rs.measure(off_q[at++], rng)));
    }
    return out;
  };

  for (std::size_t j = 0; j < u.gates.size(); ++j) {
    const int jj = static_cast<int>(j);
    bundle.offline.rows.emplace_back();
    for (int v = 0; v < slot_variants(u, jj); ++v) {
      bundle.offline.rows.back().push_back(
          take_bits(2 * static_cast<int>(slot_wires(u, jj).size())));
    }
    bundle.offline.gadgets.emplace_back();  // wires attached below
  }
  bundle.offline.final_record = take_bits(lay.rec_n);
  for (int k = 0; k < u.ancillas; ++k) {
    const auto kb = take_bits(2);
    bundle.offline.ancilla_kappa.push_back({kb[0], kb[1]});
  }
  // Mask bits: Enc's own measurement already collapsed the pool, so these
  // reads are deterministic and agree with the encrypted pieces.
  std::vector<std::uint8_t> t_bits;
  for (int i = 0; i < l; ++i) {
    t_bits.push_back(static_cast<std::uint8_t>(rs.measure(off_q[at++], rng)));
  }
  for (int i = 0; i < n; ++i) {
    OnlineQuantumPiece piece;
    piece.carrier = off_q[at++];
    piece.kappa[0] = static_cast<std::uint8_t>(
        rs.measure(in_q[static_cast<std::size_t>(2 * i)], rng));
    piece.kappa[1] = static_cast<std::uint8_t>(
        rs.measure(in_q[static_cast<std::size_t>(2 * i + 1)], rng));
    bundle.online_q.push_back(piece);
  }
  for (std::size_t j = 0; j < u.gates.size(); ++j) {
    const int jj = static_cast<int>(j);
    for (int v = 0; v < slot_variants(u, jj); ++v) {
      GadgetRef gadget;
      for (std::size_t p = 0; p < slot_wires(u, jj).size(); ++p) {
        const int in_id = off_q[at++];
        const int out_id = off_q[at++];
        gadget.pairs.push_back({in_id, out_id});
      }
      bundle.offline.gadgets[j].push_back(std::move(gadget));
    }
  }
  for (int k = 0; k < u.ancillas; ++k) {
    bundle.offline.ancilla_carriers.push_back(off_q[at++]);
  }

  for (int i = 0; i < l; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    bundle.online_c.push_back(poly_detail::parse_piece(
        u, i, twofe_dec(sk.slots[ii], ct.cts[ii]), t_bits[ii]));
  }
  return decode(rs, bundle, u, rng);
}

// ---------------------------------------------------------------------------
// Simulators.

struct PolyQfeSimState {
  CircuitDesc universal;
  std::vector<std::uint8_t> c_bits;  // known at key time (non-adaptive order)
  std::vector<CfeSimState> slot_sts;
  OneQfeSimState in_st, off_st;
  bool used = false;
};

namespace poly_detail {

using SlotRng = std::function<RandomSource&(int)>;

/** Key-first phase shared by the public simulator and the hybrid runner. */
inline std::pair<PolyQfeFunctionKey, PolyQfeSimState> sim_keys_core(
    const PolyQfeClass& cls, const std::vector<std::uint8_t>& c_bits,
    const SlotRng& slot_rng, RandomSource& in_rng, RandomSource& off_rng) {
  if (static_cast<int>(c_bits.size()) != cls.l()) {
    throw std::invalid_argument("polyqfe_sim: description length mismatch");
  }
  const CircuitDesc& u = cls.universal;
  PolyQfeFunctionKey sk;
  PolyQfeSimState st;
  sk.universal = u;
  st.universal = u;
  st.c_bits = norm_bits(c_bits);
  sk.c_bits = st.c_bits;
  for (int i = 0; i < cls.l(); ++i) {
    auto [key, s] = twofe_sim_key_first(
        st.c_bits[static_cast<std::size_t>(i)], piece_bit_count(u, i),
        slot_rng(i));
    sk.slots.push_back(std::move(key));
    st.slot_sts.push_back(std::move(s));
  }
  {
    auto [key, s] = oneqfe_sim_key_first(2 * cls.n(), in_rng);
    sk.in_key = std::move(key);
    st.in_st = std::move(s);
  }
  {
    auto [key, s] =
        oneqfe_sim_key_first(poly_off_layout(u).out_total(), off_rng);
    sk.off_key = std::move(key);
    st.off_st = std::move(s);
  }
  return {std::move(sk), std::move(st)};
}

/**
 * Package a (real or simulated) encoding bundle plus mask bits as the two
 * quantum payloads, in exactly the wire order the honest channels emit.
 */
inline std::pair<std::vector<int>, std::vector<int>> bundle_payloads(
    RegisterState& rs, const EncodingBundle& bundle,
    const std::vector<std::uint8_t>& t_bits) {
  std::vector<int> in_payload;
  for (const auto& piece : bundle.online_q) {
    const auto ids = rs.add_bits({piece.kappa[0], piece.kappa[1]});
    in_payload.insert(in_payload.end(), ids.begin(), ids.end());
  }
  std::vector<std::uint8_t> cbits;
  for (const auto& slot : bundle.offline.rows) {
    for (const auto& row : slot) {
      cbits.insert(cbits.end(), row.begin(), row.end());
    }
  }
  cbits.insert(cbits.end(), bundle.offline.final_record.begin(),
               bundle.offline.final_record.end());
  for (const auto& k : bundle.offline.ancilla_kappa) {
    cbits.push_back(k[0]);
    cbits.push_back(k[1]);
  }
  std::vector<int> off_payload = rs.add_bits(cbits);
  const auto t_wires = rs.add_bits(t_bits);
  off_payload.insert(off_payload.end(), t_wires.begin(), t_wires.end());
  for (const auto& piece : bundle.online_q) {
    off_payload.push_back(piece.carrier);
  }
  for (const auto& slot : bundle.offline.gadgets) {
    for (const auto& gadget : slot) {
      for (const auto& [in_id, out_id] : gadget.pairs) {
        off_payload.push_back(in_id);
        off_payload.push_back(out_id);
      }
    }
  }
  off_payload.insert(off_payload.end(),
                     bundle.offline.ancilla_carriers.begin(),
                     bundle.offline.ancilla_carriers.end());
  return {std::move(in_payload), std::move(off_payload)};
}

/** Ciphertext phase shared by the public simulator and the hybrid runner. */
inline PolyQfeCiphertext sim_ct_core(PolyQfeSimState& st, RegisterState& rs,
                                     const std::vector<int>& out_wires,
                                     RandomSource& qre_rng,
                                     const SlotRng& slot_rng,
                                     RandomSource& in_rng,
                                     RandomSource& off_rng) {
  const CircuitDesc& u = st.universal;
  if (st.used) {
    throw std::logic_error("polyqfe_sim: simulator state already consumed");
  }
  if (out_wires.size() != u.output_wires().size()) {
    throw std::invalid_argument("polyqfe_sim: output width mismatch");
  }
  st.used = true;
  const int l = u.classical_inputs;

  const EncodingBundle bundle = simulate(rs, out_wires, u, st.c_bits, qre_rng);
  std::vector<std::uint8_t> t_bits;
  for (int i = 0; i < l; ++i) {
    t_bits.push_back(static_cast<std::uint8_t>(qre_rng.bit()));
  }

  PolyQfeCiphertext ct;
  for (int i = 0; i < l; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const auto y = masked_piece(bundle.online_c[ii], t_bits[ii]);
    ct.cts.push_back(
        twofe_sim_ct_after_key(st.slot_sts[ii], y, y.size(), slot_rng(i)));
  }
  auto [in_payload, off_payload] = bundle_payloads(rs, bundle, t_bits);
  ct.ct_in = oneqfe_sim_ct_after_key(st.in_st, rs, in_payload, in_rng);
  ct.ct_off = oneqfe_sim_ct_after_key(st.off_st, rs, off_payload, off_rng);
  return ct;
}

}  // namespace poly_detail

/**
 * Non-adaptive simulator, key phase: fabricate the function key from
 * uniform pads (the query order fixes the key before the challenge).
 */
inline std::pair<PolyQfeFunctionKey, PolyQfeSimState> polyqfe_sim_key_first(
    const PolyQfeClass& cls, const std::vector<std::uint8_t>& c_bits,
    RandomSource& rng) {
  return poly_detail::sim_keys_core(
      cls, c_bits, [&rng](int) -> RandomSource& { return rng; }, rng, rng);
}

/**
 * Non-adaptive simulator, challenge phase: given the member's output
 * C(message) as wires, garble it with the circuit simulator, mask fresh
 * bits over the pieces, and program every sub-ciphertext against the key
 * already issued.
 */
inline PolyQfeCiphertext polyqfe_sim_ct_after_key(
    PolyQfeSimState& st, RegisterState& rs, const std::vector<int>& out_wires,
    RandomSource& rng) {
  return poly_detail::sim_ct_core(
      st, rs, out_wires, rng, [&rng](int) -> RandomSource& { return rng; },
      rng, rng);
}

/** One-shot non-adaptive ideal experiment: key phase then challenge phase. */
inline std::pair<PolyQfeFunctionKey, PolyQfeCiphertext>
polyqfe_sim_nonadaptive(const PolyQfeClass& cls,
                        const std::vector<std::uint8_t>& c_bits,
                        RegisterState& rs, const std::vector<int>& out_wires,
                        RandomSource& rng) {
  auto [sk, st] = polyqfe_sim_key_first(cls, c_bits, rng);
  auto ct = polyqfe_sim_ct_after_key(st, rs, out_wires, rng);
  return {std::move(sk), std::move(ct)};
}

/**
 * Adaptive simulator, challenge phase: every quantum payload qubit is an
 * EPR half, every classical piece a uniform string.  Nothing message- or
 * member-dependent is committed.
 */
inline std::pair<PolyQfeCiphertext, PolyQfeSimState> polyqfe_sim_adaptive_ct(
    const PolyQfeClass& cls, RegisterState& rs, RandomSource& rng) {
  const CircuitDesc& u = cls.universal;
  PolyQfeCiphertext ct;
  PolyQfeSimState st;
  st.universal = u;
  for (int i = 0; i < cls.l(); ++i) {
    const std::size_t len = poly_detail::piece_bit_count(u, i);
    auto [c, s] = twofe_sim_ct(len, len, rng);
    ct.cts.push_back(std::move(c));
    st.slot_sts.push_back(std::move(s));
  }
  {
    auto [c, s] = oneqfe_sim_adaptive_ct(2 * cls.n(), rs, rng);
    ct.ct_in = std::move(c);
    st.in_st = std::move(s);
  }
  {
    auto [c, s] =
        oneqfe_sim_adaptive_ct(poly_off_layout(u).out_total(), rs, rng);
    ct.ct_off = std::move(c);
    st.off_st = std::move(s);
  }
  return {std::move(ct), std::move(st)};
}

/**
 * Adaptive simulator, key phase: garble the now-known output, teleport the
 * payloads into the halves already handed out, and program every classical
 * layer (per-bit keys to open the masked pieces, sub-scheme keys to reveal
 * the teleportation corrections).
 */
inline PolyQfeFunctionKey polyqfe_sim_adaptive_key(
    PolyQfeSimState& st, RegisterState& rs, const std::vector<int>& out_wires,
    const std::vector<std::uint8_t>& c_bits, RandomSource& rng) {
  const CircuitDesc& u = st.universal;
  if (st.used) {
    throw std::logic_error(
        "polyqfe_sim_adaptive_key: simulator state already consumed");
  }
  if (static_cast<int>(c_bits.size()) != u.classical_inputs) {
    throw std::invalid_argument(
        "polyqfe_sim_adaptive_key: description length mismatch");
  }
  if (out_wires.size() != u.output_wires().size()) {
    throw std::invalid_argument(
        "polyqfe_sim_adaptive_key: output width mismatch");
  }
  st.used = true;
  st.c_bits = poly_detail::norm_bits(c_bits);
  const int l = u.classical_inputs;

  const EncodingBundle bundle = simulate(rs, out_wires, u, st.c_bits, rng);
  std::vector<std::uint8_t> t_bits;
  for (int i = 0; i < l; ++i) {
    t_bits.push_back(static_cast<std::uint8_t>(rng.bit()));
  }

  PolyQfeFunctionKey sk;
  sk.universal = u;
  sk.c_bits = st.c_bits;
  for (int i = 0; i < l; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const auto y = poly_detail::masked_piece(bundle.online_c[ii], t_bits[ii]);
    sk.slots.push_back(twofe_sim_key(st.slot_sts[ii], st.c_bits[ii], y));
  }
  auto [in_payload, off_payload] =
      poly_detail::bundle_payloads(rs, bundle, t_bits);
  sk.in_key = oneqfe_sim_adaptive_key(st.in_st, rs, in_payload, rng);
  sk.off_key = oneqfe_sim_adaptive_key(st.off_st, rs, off_payload, rng);
  return sk;
}

// ---------------------------------------------------------------------------
// The hybrid chain.

struct PolyQfeHybridView {
  PolyQfeFunctionKey sk;
  PolyQfeCiphertext ct;
};

/**
 * Run the non-adaptive security experiment at hybrid level h in [0, l+3]:
 * the function key for c_bits is fixed first, then the challenge ciphertext
 * for the message is produced with the first h proof components replaced by
 * their simulators.  Component order: the l two-function instances (levels
 * 1..l), the input-side single-function instance (l+1), the offline-side
 * instance (l+2), and finally the garbled encoding itself (l+3).  Level 0
 * is the honest experiment; level l+3 is the full ideal experiment.
 *
 * Every component draws from its own stream, forked off `rng` by component
 * index (0..l-1 the per-bit instances, l the input side, l+1 the offline
 * side, l+2 the garbling randomness and all measurements).  Adjacent levels
 * therefore differ only in the switched component's draws, which a test can
 * enumerate exhaustively by overriding that one stream via
 * `enumerate_component` / `component_rng` while everything else stays
 * pinned to `rng`'s forks.
 */
inline PolyQfeHybridView polyqfe_hybrid_run(
    const PolyQfeClass& cls, int h, RegisterState& rs,
    const std::vector<int>& msg_wires, const std::vector<std::uint8_t>& c_bits,
    RandomSource& rng, int enumerate_component = -1,
    RandomSource* component_rng = nullptr) {
  const CircuitDesc& u = cls.universal;
  const int n = cls.n();
  const int l = cls.l();
  if (h < 0 || h > l + 3) {
    throw std::invalid_argument("polyqfe_hybrid_run: level out of range");
  }
  if (static_cast<int>(c_bits.size()) != l) {
    throw std::invalid_argument(
        "polyqfe_hybrid_run: description length mismatch");
  }
  if (static_cast<int>(msg_wires.size()) != n) {
    throw std::invalid_argument("polyqfe_hybrid_run: message width mismatch");
  }
  const std::vector<std::uint8_t> cb = poly_detail::norm_bits(c_bits);
  const PolyOffLayout lay = poly_off_layout(u);

  std::vector<RandomSource> child;
  for (int k = 0; k <= l + 2; ++k) {
    child.push_back(rng.fork(static_cast<std::uint64_t>(k)));
  }
  auto src = [&](int k) -> RandomSource& {
    if (k == enumerate_component && component_rng != nullptr) {
      return *component_rng;
    }
    return child[static_cast<std::size_t>(k)];
  };
  const auto slot_simmed = [&](int i) { return h >= i + 1; };
  const bool sim_in = h >= l + 1;
  const bool sim_off = h >= l + 2;
  const bool sim_qre = h >= l + 3;

  PolyQfeHybridView view;
  view.sk.universal = u;
  view.sk.c_bits = cb;

  // --- Key phase (the non-adaptive order fixes the key first). -------------
  std::vector<TwoFeKeys> real_slots(static_cast<std::size_t>(l));
  std::vector<CfeSimState> slot_sts(static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    if (slot_simmed(i)) {
      auto [key, s] = twofe_sim_key_first(
          cb[ii], poly_detail::piece_bit_count(u, i), src(i));
      view.sk.slots.push_back(std::move(key));
      slot_sts[ii] = std::move(s);
    } else {
      real_slots[ii] =
          twofe_setup(poly_slot_fn(u, i, 0), poly_slot_fn(u, i, 1), src(i));
      view.sk.slots.push_back(twofe_keygen(real_slots[ii], cb[ii]));
    }
  }
  OneQfeScheme in_scheme;
  OneQfeSimState in_st;
  if (sim_in) {
    auto [key, s] = oneqfe_sim_key_first(2 * n, src(l));
    view.sk.in_key = std::move(key);
    in_st = std::move(s);
  } else {
    in_scheme = oneqfe_setup(poly_f_in(n), src(l));
    view.sk.in_key = oneqfe_keygen(in_scheme);
  }
  OneQfeScheme off_scheme;
  OneQfeSimState off_st;
  if (sim_off) {
    auto [key, s] = oneqfe_sim_key_first(lay.out_total(), src(l + 1));
    view.sk.off_key = std::move(key);
    off_st = std::move(s);
  } else {
    off_scheme = oneqfe_setup(poly_f_off(u), src(l + 1));
    view.sk.off_key = oneqfe_keygen(off_scheme);
  }

  // --- Challenge phase. ----------------------------------------------------
  if (sim_qre) {
    PolyQfeSimState st;
    st.universal = u;
    st.c_bits = cb;
    st.slot_sts = std::move(slot_sts);
    st.in_st = std::move(in_st);
    st.off_st = std::move(off_st);
    const auto out_wires = evaluate_on(u, rs, msg_wires, cb);
    view.ct = poly_detail::sim_ct_core(
        st, rs, out_wires, src(l + 2),
        [&src](int i) -> RandomSource& { return src(i); }, src(l),
        src(l + 1));
    return view;
  }

  const EncodingRandomness re = sample_randomness(u, src(l + 2));
  const auto rbits = randomness_to_bits(u, re);
  const auto e2 = rs.add_epr_pairs(n);
  const auto el = rs.add_epr_pairs(l);
  std::vector<std::uint8_t> t_bits;
  for (int i = 0; i < l; ++i) {
    t_bits.push_back(static_cast<std::uint8_t>(
        rs.measure(el[static_cast<std::size_t>(2 * i)], src(l + 2))));
  }

  for (int i = 0; i < l; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    std::vector<std::uint8_t> x = rbits;
    x.push_back(t_bits[ii]);
    if (slot_simmed(i)) {
      const auto y = poly_slot_fn(u, i, cb[ii])(x);
      view.ct.cts.push_back(
          twofe_sim_ct_after_key(slot_sts[ii], y, y.size(), src(i)));
    } else {
      view.ct.cts.push_back(twofe_enc(real_slots[ii], x));
    }
  }

  std::vector<int> in_wires = msg_wires;
  for (int i = 0; i < n; ++i) {
    in_wires.push_back(e2[static_cast<std::size_t>(2 * i)]);
  }
  const auto m0_wires = rs.add_bits(poly_detail::m0_input_bits(u, re.m0));
  in_wires.insert(in_wires.end(), m0_wires.begin(), m0_wires.end());
  if (sim_in) {
    const auto payload = poly_f_in(n).apply(rs, in_wires, src(l + 2));
    view.ct.ct_in = oneqfe_sim_ct_after_key(in_st, rs, payload, src(l));
  } else {
    const PauliKey ab =
        PauliKey::random(static_cast<std::size_t>(2 * n), src(l));
    view.ct.ct_in = oneqfe_enc_with(in_scheme, rs, in_wires, ab, src(l + 2));
  }

  std::vector<int> off_wires = rs.add_bits(rbits);
  for (int i = 0; i < l; ++i) {
    off_wires.push_back(el[static_cast<std::size_t>(2 * i + 1)]);
  }
  for (int i = 0; i < n; ++i) {
    off_wires.push_back(e2[static_cast<std::size_t>(2 * i + 1)]);
  }
  for (std::size_t j = 0; j < u.gates.size(); ++j) {
    const int jj = static_cast<int>(j);
    for (int v = 0; v < slot_variants(u, jj); ++v) {
      for (std::size_t p = 0; p < slot_wires(u, jj).size(); ++p) {
        const auto ids = rs.add_epr_pairs(1);
        off_wires.push_back(ids[0]);
        off_wires.push_back(ids[1]);
      }
    }
  }
  if (sim_off) {
    const auto payload = poly_f_off(u).apply(rs, off_wires, src(l + 2));
    view.ct.ct_off = oneqfe_sim_ct_after_key(off_st, rs, payload, src(l + 1));
  } else {
    const PauliKey ab = PauliKey::random(
        static_cast<std::size_t>(lay.out_total()), src(l + 1));
    view.ct.ct_off =
        oneqfe_enc_with(off_scheme, rs, off_wires, ab, src(l + 2));
  }
  view.ct.t_bits = t_bits;
  return view;
}

}  // namespace qfe
