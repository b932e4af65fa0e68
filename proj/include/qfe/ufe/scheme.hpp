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
 * Functional encryption whose keys carry an anti-cloning trap.
 *
 * A key for circuit C embeds two fresh random strings (a, b).  Decryption
 * runs a two-mode program over a fixed plaintext layout
 *
 *     [ m_0 | m_1 | dk_0 | dk_1 | ue | flag ]
 *
 * where the m slots are message registers, the dk slots can carry a quantum
 * decryption key for the single-bit scheme in ueq.hpp, `ue` is a ciphertext
 * of that scheme, and `flag` selects the mode:
 *
 *   flag 0: output C(m_0), ignoring every other slot.  Honest encryption
 *           pads the layout with zeros, so honest decryption lives entirely
 *           on this path.
 *   flag 1: apply X^a Z^b to both dk slots, look for a dk whose first
 *           lambda_prefix qubits measure to all-zero (slot 0 first, then
 *           slot 1, else reject), decrypt `ue` under the accepted dk to a
 *           selector bit s, and output C(m_s).
 *
 * Mode 1 exists for the challenge ciphertext built by ufe_enc_star: it
 * encrypts EPR halves in the dk slots and teleports zero-prefixed dk copies
 * through the retained halves afterwards; the Bell corrections become the
 * (a, b) of two valid keys.  Those teleport-derived strings are uniformly
 * random — exactly the distribution ufe_keygen samples — which is the
 * mechanical heart of the cloning experiments in the games module.
 *
 * The functional-encryption backend here is a *dealer*: the master secret is
 * a one-time Pauli pad that never leaves the scheme object, Enc applies the
 * pad, and Dec removes it and evaluates the keyed program directly.  It is
 * correctness-grade — every layout, mode, and distribution property above
 * is mechanically real, but no cryptographic hardness is modelled, and
 * encrypting twice reuses the pad.  A restricted garbled-circuit backend
 * for the flag-0 path of Clifford fixtures is provided by ufe_flag0_class.
 */

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfe/circuit/circuit.hpp"
#include "qfe/core.hpp"
#include "qfe/fe/polyqfe.hpp"
#include "qfe/ufe/ueq.hpp"

namespace qfe {

/** Width knobs for the two-mode layout. */
struct UfeConfig {
  int lambda_prefix = 4;  // zero-prefix check length
  int ue_qubits = 2;      // width t of the single-bit ciphertext slot

  int dk_len() const { return ue_qubits + 1; }
  int key_slot() const { return lambda_prefix + dk_len(); }
};

/** Wire offsets of the plaintext layout for n-qubit messages. */
struct UfeLayout {
  int n = 0;
  UfeConfig cfg;

  int slot() const { return cfg.key_slot(); }
  int total() const { return 2 * n + 2 * slot() + cfg.ue_qubits + 1; }

  std::vector<int> m0(const std::vector<int>& ws) const {
    return slice(ws, 0, n);
  }
  std::vector<int> m1(const std::vector<int>& ws) const {
    return slice(ws, n, n);
  }
  std::vector<int> dk0(const std::vector<int>& ws) const {
    return slice(ws, 2 * n, slot());
  }
  std::vector<int> dk1(const std::vector<int>& ws) const {
    return slice(ws, 2 * n + slot(), slot());
  }
  std::vector<int> ue(const std::vector<int>& ws) const {
    return slice(ws, 2 * n + 2 * slot(), cfg.ue_qubits);
  }
  int flag(const std::vector<int>& ws) const {
    return ws.at(static_cast<std::size_t>(total() - 1));
  }

 private:
  static std::vector<int> slice(const std::vector<int>& ws, int at, int len) {
    if (static_cast<int>(ws.size()) < at + len) {
      throw std::invalid_argument("UfeLayout: wire list shorter than layout");
    }
    return {ws.begin() + at, ws.begin() + at + len};
  }
};

/** A keyed instance of the two-mode program. */
struct UParams {
  CircuitDesc c;                   // circuit on the message slot
  std::vector<std::uint8_t> a, b;  // slot-width Pauli corrections
};

/**
 * The two-mode program as a channel over the full layout.  Output wire 0 is
 * a status bit (0 = value, 1 = reject); the remaining wires carry C's
 * output, zeroed on reject.
 */
inline Channel u_channel(const UParams& p, const UfeLayout& lay) {
  require_valid(p.c);
  if (p.c.quantum_inputs != lay.n || p.c.classical_inputs != 0) {
    throw std::invalid_argument(
        "u_channel: circuit shape does not fit the message slot");
  }
  if (static_cast<int>(p.a.size()) != lay.slot() ||
      static_cast<int>(p.b.size()) != lay.slot()) {
    throw std::invalid_argument(
        "u_channel: correction strings must cover one key slot");
  }
  const int out_w = p.c.output_width();
  Channel ch;
  ch.n_in = lay.total();
  ch.n_out = 1 + out_w;
  ch.apply = [p, lay, out_w](RegisterState& rs, const std::vector<int>& ws,
                             RandomSource& rng) {
    if (static_cast<int>(ws.size()) != lay.total()) {
      throw std::invalid_argument("u_channel: layout mismatch");
    }
    const auto m0 = lay.m0(ws);
    const auto m1 = lay.m1(ws);
    const auto dk0 = lay.dk0(ws);
    const auto dk1 = lay.dk1(ws);
    const auto ue = lay.ue(ws);
    const int f = rs.measure(lay.flag(ws), rng);

    auto finish = [&](int status, const std::vector<int>& value) {
      std::vector<int> out =
          rs.add_bits({static_cast<std::uint8_t>(status)});
      out.insert(out.end(), value.begin(), value.end());
      return out;
    };

    if (f == 0) {
      rs.trace_out(m1);
      rs.trace_out(dk0);
      rs.trace_out(dk1);
      rs.trace_out(ue);
      return finish(0, evaluate_on(p.c, rs, m0, {}));
    }

    const PauliKey corr(p.a, p.b);
    rs.apply_qotp(corr, dk0);
    rs.apply_qotp(corr, dk1);
    auto prefix_clear = [&](const std::vector<int>& dk) {
      int ok = 1;
      for (int i = 0; i < lay.cfg.lambda_prefix; ++i) {
        ok &= (rs.measure(dk[static_cast<std::size_t>(i)], rng) == 0);
      }
      return ok != 0;
    };
    auto payload = [&](const std::vector<int>& dk) {
      return std::vector<int>(dk.begin() + lay.cfg.lambda_prefix, dk.end());
    };

    std::vector<int> dk_star;
    if (prefix_clear(dk0)) {
      dk_star = payload(dk0);
      rs.trace_out(dk1);
    } else if (prefix_clear(dk1)) {
      dk_star = payload(dk1);
      rs.trace_out(payload(dk0));
    } else {
      rs.trace_out(payload(dk0));
      rs.trace_out(payload(dk1));
      rs.trace_out(m0);
      rs.trace_out(m1);
      rs.trace_out(ue);
      return finish(
          1, rs.add_bits(std::vector<std::uint8_t>(
                 static_cast<std::size_t>(out_w), 0)));
    }

    const int sel = ueq_dec(rs, dk_star, ue, rng);
    rs.trace_out(sel == 0 ? m1 : m0);
    return finish(0, evaluate_on(p.c, rs, sel == 0 ? m0 : m1, {}));
  };
  return ch;
}

/**
 * Run the two-mode program on a joint input state and collect the exact
 * classical-quantum output: label "ok" carries C's output, label "bot" the
 * rejection branch.  The message width is inferred from the state.
 */
inline CQState u_circuit_apply(const UParams& p, const UfeConfig& cfg,
                               const DensityMatrix& joint) {
  UfeLayout lay{0, cfg};
  const int fixed = lay.total();
  const int width = joint.qubits();
  if (width < fixed + 2 || (width - fixed) % 2 != 0) {
    throw std::invalid_argument(
        "u_circuit_apply: register width does not match any layout");
  }
  lay.n = (width - fixed) / 2;
  const Channel ch = u_channel(p, lay);
  const auto outcomes = enumerate_outcomes([&](RandomSource& rng) {
    RegisterState rs;
    const auto ws = rs.add_state(joint);
    auto out = ch.apply(rs, ws, rng);
    const int status = rs.measure(out[0], rng);
    const std::vector<int> rest(out.begin() + 1, out.end());
    return std::make_pair(status ? std::string("bot") : std::string("ok"),
                          rs.dense(rest));
  });
  CQState cq;
  for (const auto& o : outcomes) {
    cq.add(o.value.first, o.probability, o.value.second);
  }
  return cq;
}

struct UfeCiphertext {
  std::vector<int> wires;  // padded layout wires (message order), in rs
};

struct UfeKey {
  UParams params;
};

/**
 * Dealer-backed scheme instance.  `pad` is the backend's master secret; it
 * is applied by Enc and removed inside Dec, and must not be read by callers
 * that want the hiding story to mean anything.
 */
struct UfeScheme {
  UfeLayout layout;
  PauliKey pad;
};

inline UfeScheme ufe_setup(int n, const UfeConfig& cfg, RandomSource& rng) {
  if (n <= 0) throw std::invalid_argument("ufe_setup: need n >= 1");
  UfeScheme s;
  s.layout = UfeLayout{n, cfg};
  s.pad = PauliKey::random(static_cast<std::size_t>(s.layout.total()), rng);
  return s;
}

/** Key with caller-chosen corrections (used for teleport-derived keys). */
inline UfeKey ufe_keygen_with(const UfeScheme& s, const CircuitDesc& c,
                              std::vector<std::uint8_t> a,
                              std::vector<std::uint8_t> b) {
  require_valid(c);
  if (c.quantum_inputs != s.layout.n || c.classical_inputs != 0) {
    throw std::invalid_argument("ufe_keygen: circuit does not fit the scheme");
  }
  if (static_cast<int>(a.size()) != s.layout.slot() ||
      static_cast<int>(b.size()) != s.layout.slot()) {
    throw std::invalid_argument("ufe_keygen: correction length mismatch");
  }
  return UfeKey{UParams{c, std::move(a), std::move(b)}};
}

/** Honest key: fresh uniform corrections.  Any number of keys may issue. */
inline UfeKey ufe_keygen(const UfeScheme& s, const CircuitDesc& c,
                         RandomSource& rng) {
  auto a = rng.bits(static_cast<std::size_t>(s.layout.slot()));
  auto b = rng.bits(static_cast<std::size_t>(s.layout.slot()));
  return ufe_keygen_with(s, c, std::move(a), std::move(b));
}

/**
 * Encrypt an n-qubit message: pad the layout with zeros (flag 0) and apply
 * the dealer pad.  The message wires are consumed into the ciphertext.
 */
inline UfeCiphertext ufe_enc(const UfeScheme& s, RegisterState& rs,
                             const std::vector<int>& msg_wires) {
  if (static_cast<int>(msg_wires.size()) != s.layout.n) {
    throw std::invalid_argument("ufe_enc: message width mismatch");
  }
  std::vector<int> ws = msg_wires;
  const auto zeros = rs.add_bits(std::vector<std::uint8_t>(
      static_cast<std::size_t>(s.layout.total() - s.layout.n), 0));
  ws.insert(ws.end(), zeros.begin(), zeros.end());
  rs.apply_qotp(s.pad, ws);
  return UfeCiphertext{std::move(ws)};
}

struct UfeDecOutput {
  int status = 0;          // 0 = value, 1 = reject
  std::vector<int> wires;  // C's output (zeroed basis bits on reject)
};

/** Remove the dealer pad and run the keyed two-mode program. */
inline UfeDecOutput ufe_dec(const UfeScheme& s, const UfeKey& sk,
                            RegisterState& rs, const UfeCiphertext& ct,
                            RandomSource& rng) {
  if (static_cast<int>(ct.wires.size()) != s.layout.total()) {
    throw std::invalid_argument("ufe_dec: ciphertext width mismatch");
  }
  rs.apply_qotp(s.pad, ct.wires);  // the pad is its own inverse
  const Channel ch = u_channel(sk.params, s.layout);
  auto out = ch.apply(rs, ct.wires, rng);
  UfeDecOutput res;
  res.status = rs.measure(out[0], rng);
  res.wires.assign(out.begin() + 1, out.end());
  return res;
}

/** Everything the mode-1 ciphertext builder hands back to the challenger. */
struct UfeEncStar {
  UfeCiphertext ct;
  PauliKey key0, key1;  // teleport corrections, one valid key slot each
  int b = 0;            // selector encrypted in the ue slot
  UeqKeys ueq;          // regenerated single-bit keys
};

/**
 * Build the mode-1 challenge ciphertext.  The single-bit scheme's keys are
 * minted twice from `ueq_seed` (regeneration), the dk slots are filled with
 * halves of two EPR banks, the ue slot encrypts a fresh selector bit, and
 * the flag is set to 1.  After encryption, a zero-prefixed dk copy is
 * teleported through each retained bank; the Bell corrections key0/key1
 * each turn the ciphertext into one that decrypts to C(m_b) under
 * ufe_keygen_with(s, C, key.a, key.b).
 */
inline UfeEncStar ufe_enc_star(const UfeScheme& s, RegisterState& rs,
                               const std::vector<int>& m0_wires,
                               const std::vector<int>& m1_wires,
                               std::uint64_t ueq_seed, RandomSource& rng) {
  const auto& lay = s.layout;
  if (static_cast<int>(m0_wires.size()) != lay.n ||
      static_cast<int>(m1_wires.size()) != lay.n) {
    throw std::invalid_argument("ufe_enc_star: message width mismatch");
  }
  const UeqKeys k0 = ueq_keygen(lay.cfg.ue_qubits, ueq_seed);
  const UeqKeys k1 = ueq_keygen(lay.cfg.ue_qubits, ueq_seed);

  const auto bank0 = rs.add_epr_pairs(static_cast<std::size_t>(lay.slot()));
  const auto bank1 = rs.add_epr_pairs(static_cast<std::size_t>(lay.slot()));
  std::vector<int> enc0, held0, enc1, held1;
  for (int i = 0; i < lay.slot(); ++i) {
    enc0.push_back(bank0[static_cast<std::size_t>(2 * i)]);
    held0.push_back(bank0[static_cast<std::size_t>(2 * i + 1)]);
    enc1.push_back(bank1[static_cast<std::size_t>(2 * i)]);
    held1.push_back(bank1[static_cast<std::size_t>(2 * i + 1)]);
  }

  UfeEncStar res;
  res.b = rng.bit();
  res.ueq = k0;

  std::vector<int> ws = m0_wires;
  ws.insert(ws.end(), m1_wires.begin(), m1_wires.end());
  ws.insert(ws.end(), enc0.begin(), enc0.end());
  ws.insert(ws.end(), enc1.begin(), enc1.end());
  const auto ue = rs.add_state(ueq_enc(k0, res.b, rng));
  ws.insert(ws.end(), ue.begin(), ue.end());
  ws.push_back(rs.add_bits({1})[0]);
  rs.apply_qotp(s.pad, ws);
  res.ct = UfeCiphertext{std::move(ws)};

  auto teleport_dk = [&](const UeqKeys& k, const std::vector<int>& held) {
    std::vector<int> payload = rs.add_bits(std::vector<std::uint8_t>(
        static_cast<std::size_t>(lay.cfg.lambda_prefix), 0));
    const auto dk = rs.add_state(ueq_dk_state(k));
    payload.insert(payload.end(), dk.begin(), dk.end());
    return rs.teleport(payload, held, rng);
  };
  res.key0 = teleport_dk(k0, held0);
  res.key1 = teleport_dk(k1, held1);
  return res;
}

/**
 * The flag-0 specialization of the two-mode program as a garbleable
 * circuit class over the full layout, for use with the garbled-circuit
 * functional encryption scheme.  Restricted to Clifford circuits without
 * classical inputs or ancillas; every non-message slot is traced out.
 */
inline PolyQfeClass ufe_flag0_class(const CircuitDesc& c,
                                    const UfeConfig& cfg) {
  require_valid(c);
  if (c.classical_inputs != 0 || c.ancillas != 0) {
    throw std::invalid_argument(
        "ufe_flag0_class: circuit must be ancilla-free with no classical "
        "inputs");
  }
  const UfeLayout lay{c.quantum_inputs, cfg};
  CircuitDesc u;
  u.quantum_inputs = lay.total();
  u.gates = c.gates;
  u.trace_out = c.trace_out;
  for (int w = lay.n; w < lay.total(); ++w) u.trace_out.push_back(w);
  return poly_class(u);
}

/**
 * Public-key-style encryption of classical strings with variable keys,
 * derived by pinning C to the identity circuit.  KeyGen takes a shared
 * seed r plus a per-key seed r'; keys from the same r but different r'
 * carry different (a, b) yet decrypt the same ciphertexts.
 */
struct PkeueScheme {
  UfeScheme fe;
  CircuitDesc identity;
};

inline PkeueScheme pkeue_setup(int n_bits, const UfeConfig& cfg,
                               RandomSource& rng) {
  PkeueScheme s;
  s.fe = ufe_setup(n_bits, cfg, rng);
  s.identity.quantum_inputs = n_bits;
  return s;
}

inline UfeKey pkeue_keygen(const PkeueScheme& s, std::uint64_t r,
                           std::uint64_t r_prime) {
  RandomSource src = RandomSource(r).fork(r_prime);
  return ufe_keygen(s.fe, s.identity, src);
}

inline UfeCiphertext pkeue_enc(const PkeueScheme& s, RegisterState& rs,
                               const std::vector<std::uint8_t>& m) {
  if (static_cast<int>(m.size()) != s.fe.layout.n) {
    throw std::invalid_argument("pkeue_enc: message length mismatch");
  }
  return ufe_enc(s.fe, rs, rs.add_bits(m));
}

inline std::vector<std::uint8_t> pkeue_dec(const PkeueScheme& s,
                                           const UfeKey& sk,
                                           RegisterState& rs,
                                           const UfeCiphertext& ct,
                                           RandomSource& rng) {
  const auto out = ufe_dec(s.fe, sk, rs, ct, rng);
  if (out.status != 0) {
    throw std::logic_error("pkeue_dec: honest ciphertext was rejected");
  }
  return rs.measure_bits(out.wires, rng);
}

}  // namespace qfe
