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
 * A single-bit unclonable-style encryption scheme whose decryption key is a
 * quantum state: the reference conjugate-coding instantiation.
 *
 * KeyGen draws a basis string theta in {0,1}^t and a parity pad; the
 * decryption key is the computational-basis encoding |theta, pad> carried in
 * a (t+1)-qubit register, so it can be teleported, measured, or handed to a
 * circuit like any other quantum payload.  KeyGen is deterministic in its
 * seed, so any number of identical decryption-key copies can be minted.
 *
 * Enc(bit) draws x uniformly from the strings of parity bit xor pad and
 * emits the t-qubit conjugate coding H^theta |x>.  Dec measures the key
 * register to recover (theta, pad), rotates each ciphertext qubit back, and
 * returns the parity of the outcomes xor pad.  Round trips are exact; a
 * decryption attempt under an independently drawn key succeeds with
 * probability exactly 1/2 (any wrong basis position makes the parity
 * uniform, and a right-basis-wrong-pad draw flips it).
 *
 * Only correctness is engineered here.  Resistance to cloning attacks is a
 * property probed empirically, never assumed, by the experiment harness.
 */

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qfe/core.hpp"

namespace qfe {

struct UeqKeys {
  std::vector<std::uint8_t> theta;  // per-qubit basis choice
  std::uint8_t pad = 0;             // parity pad
  std::uint64_t seed = 0;           // regeneration seed

  int t() const { return static_cast<int>(theta.size()); }
  int dk_len() const { return t() + 1; }

  /** Classical content of the decryption key: theta, then the pad bit. */
  std::vector<std::uint8_t> dk_bits() const {
    std::vector<std::uint8_t> out = theta;
    out.push_back(pad);
    return out;
  }
};

/** Deterministic in `seed`: the same seed mints the identical key pair. */
inline UeqKeys ueq_keygen(int t, std::uint64_t seed) {
  if (t <= 0) throw std::invalid_argument("ueq_keygen: need t >= 1");
  RandomSource rng(seed);
  UeqKeys k;
  k.theta = rng.bits(static_cast<std::size_t>(t));
  k.pad = static_cast<std::uint8_t>(rng.bit());
  k.seed = seed;
  return k;
}

/** One copy of the quantum decryption key |theta, pad>. */
inline DensityMatrix ueq_dk_state(const UeqKeys& k) {
  return DensityMatrix::basis(k.dk_bits());
}

/** Conjugate-coding ciphertext for one bit; rng draws the free x bits. */
inline DensityMatrix ueq_enc(const UeqKeys& k, int bit, RandomSource& rng) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("ueq_enc: bit");
  std::vector<std::uint8_t> x =
      rng.bits(static_cast<std::size_t>(k.t() - 1));
  std::uint8_t parity = static_cast<std::uint8_t>(bit) ^ k.pad;
  for (auto v : x) parity ^= v;
  x.push_back(parity);
  DensityMatrix ct = DensityMatrix::basis(x);
  for (int i = 0; i < k.t(); ++i) {
    if (k.theta[static_cast<std::size_t>(i)]) {
      ct = apply_gate(ct, GateKind::H, {i});
    }
  }
  return ct;
}

/**
 * Measure the key register, rotate the ciphertext back and take the parity.
 * Both registers are consumed.  Works for any key-register state; honest
 * basis-state keys make every measurement deterministic.
 */
inline int ueq_dec(RegisterState& rs, const std::vector<int>& dk_wires,
                   const std::vector<int>& ct_wires, RandomSource& rng) {
  if (dk_wires.size() != ct_wires.size() + 1) {
    throw std::invalid_argument("ueq_dec: key/ciphertext width mismatch");
  }
  const auto key_bits = rs.measure_bits(dk_wires, rng);
  int out = key_bits.back();  // the pad position
  for (std::size_t i = 0; i < ct_wires.size(); ++i) {
    if (key_bits[i]) rs.apply_gate(GateKind::H, {ct_wires[i]});
    out ^= rs.measure(ct_wires[i], rng);
  }
  return out & 1;
}

/** Dense convenience over a scratch register. */
inline int ueq_dec(const DensityMatrix& dk, const DensityMatrix& ct,
                   RandomSource& rng) {
  RegisterState rs;
  const auto dk_wires = rs.add_state(dk);
  const auto ct_wires = rs.add_state(ct);
  return ueq_dec(rs, dk_wires, ct_wires, rng);
}

}  // namespace qfe
