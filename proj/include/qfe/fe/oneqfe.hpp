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
 * Quantum functional encryption for a family consisting of one fixed
 * function ("OneQFE").
 *
 * The scheme is disarmingly simple: Enc applies the fixed channel f to the
 * message register, one-time-pads the output with a fresh Pauli key (a, b),
 * and encrypts (a, b) under an identity-circuit classical FE instance.  The
 * single function key is that classical key; Dec strips the pad.  Because
 * the quantum one-time pad is perfectly hiding and the classical layer is
 * perfectly simulatable, the whole scheme admits *exact* single-query
 * simulation:
 *
 *  - Non-adaptive (key issued before the challenge): the simulator holds
 *    f(message) and simply re-runs the honest padding on it.
 *  - Adaptive (challenge first): the simulator sends EPR halves as the
 *    quantum ciphertext plus a fake classical ciphertext; on the later key
 *    query it teleports f(message) into the halves already given out and
 *    programs the classical key to reveal the teleportation corrections.
 *
 * The fixed function is held as a width-declared channel object rather
 * than a gate list, so instantiations may include measurements (the
 * poly-circuit construction layers two such instances over channels that
 * Bell-measure and emit classical bits).
 *
 * Ciphertexts address wires inside a caller-owned RegisterState, so
 * correctness holds jointly with any spectator registers the message was
 * entangled with.
 */

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qfe/cfe.hpp"
#include "qfe/circuit.hpp"
#include "qfe/core.hpp"

namespace qfe {

enum class QfeSimMode { non_adaptive, adaptive };

/** Scheme instance: the fixed channel plus the classical FE pads. */
struct OneQfeScheme {
  Channel f;
  CircuitDesc circuit;         // set when the scheme was built from a circuit
  bool circuit_known = false;  // (the general form is any channel)
  IdFeKeys idfe;               // sized for the 2 * f.n_out pad bits
};

struct OneQfeCiphertext {
  std::vector<int> ct0;  // padded output wires, inside the shared register
  CfeCiphertext ct1;     // IdFE encryption of the pad bits
};

struct OneQfeKey {
  IdFeKey idfe;
};

inline OneQfeScheme oneqfe_setup(Channel f, RandomSource& rng) {
  if (!f.apply || f.n_in < 0 || f.n_out < 0) {
    throw std::invalid_argument("oneqfe_setup: malformed channel");
  }
  const std::size_t d = static_cast<std::size_t>(f.n_out);
  OneQfeScheme s;
  s.f = std::move(f);
  s.idfe = idfe_setup(2 * d, rng);
  return s;
}

inline OneQfeScheme oneqfe_setup(const CircuitDesc& circuit,
                                 RandomSource& rng) {
  if (circuit.classical_inputs != 0) {
    throw std::invalid_argument(
        "oneqfe_setup: classical inputs must be bound first");
  }
  OneQfeScheme s = oneqfe_setup(circuit_channel(circuit), rng);
  s.circuit = circuit;
  s.circuit_known = true;
  return s;
}

/** Encrypt with an explicit pad; exposed so tests can pin the randomness. */
inline OneQfeCiphertext oneqfe_enc_with(const OneQfeScheme& s,
                                        RegisterState& rs,
                                        const std::vector<int>& msg_wires,
                                        const PauliKey& ab,
                                        RandomSource& rng) {
  if (static_cast<int>(msg_wires.size()) != s.f.n_in) {
    throw std::invalid_argument("oneqfe_enc: message width mismatch");
  }
  if (ab.size() != static_cast<std::size_t>(s.f.n_out)) {
    throw std::invalid_argument("oneqfe_enc: pad width mismatch");
  }
  auto out = s.f.apply(rs, msg_wires, rng);
  if (static_cast<int>(out.size()) != s.f.n_out) {
    throw std::runtime_error("oneqfe_enc: channel output width mismatch");
  }
  rs.apply_qotp(ab, out);
  return {out, idfe_enc(s.idfe, ab.to_bits())};
}

inline OneQfeCiphertext oneqfe_enc(const OneQfeScheme& s, RegisterState& rs,
                                   const std::vector<int>& msg_wires,
                                   RandomSource& rng) {
  const PauliKey ab =
      PauliKey::random(static_cast<std::size_t>(s.f.n_out), rng);
  return oneqfe_enc_with(s, rs, msg_wires, ab, rng);
}

inline OneQfeKey oneqfe_keygen(OneQfeScheme& s) {
  return {idfe_keygen(s.idfe)};
}

inline std::vector<int> oneqfe_dec(const OneQfeKey& sk, RegisterState& rs,
                                   const OneQfeCiphertext& ct) {
  const PauliKey ab = PauliKey::from_bits(idfe_dec(sk.idfe, ct.ct1));
  if (ab.size() != ct.ct0.size()) {
    throw std::invalid_argument("oneqfe_dec: ciphertext width mismatch");
  }
  rs.apply_qotp(ab, ct.ct0);  // the pad is self-inverse
  return ct.ct0;
}

// --- Simulators ------------------------------------------------------------

/**
 * Non-adaptive simulator: given the function output (as wires), re-run the
 * honest padding on it.  Keys may already have been issued; the simulator
 * shares them, exactly like the honest encryptor.
 */
inline OneQfeCiphertext oneqfe_sim_nonadaptive(const OneQfeScheme& s,
                                               RegisterState& rs,
                                               const std::vector<int>& out,
                                               RandomSource& rng) {
  if (static_cast<int>(out.size()) != s.f.n_out) {
    throw std::invalid_argument("oneqfe_sim_nonadaptive: width mismatch");
  }
  const PauliKey ab = PauliKey::random(out.size(), rng);
  rs.apply_qotp(ab, out);
  return {out, idfe_enc(s.idfe, ab.to_bits())};
}

struct OneQfeSimState {
  std::vector<int> retained;  // simulator-side EPR halves (adaptive mode)
  CfeSimState idfe_st;
};

/**
 * Adaptive simulator, challenge side: the quantum ciphertext is one half of
 * each of d EPR pairs; the classical ciphertext is simulated.  Nothing
 * message-dependent is committed yet (only the output width d is used, so
 * no scheme object is needed).
 */
inline std::pair<OneQfeCiphertext, OneQfeSimState> oneqfe_sim_adaptive_ct(
    int d, RegisterState& rs, RandomSource& rng) {
  if (d < 0) throw std::invalid_argument("oneqfe_sim_adaptive_ct: width");
  OneQfeCiphertext ct;
  OneQfeSimState st;
  const auto ids = rs.add_epr_pairs(d);
  for (int i = 0; i < d; ++i) {
    ct.ct0.push_back(ids[static_cast<std::size_t>(2 * i)]);
    st.retained.push_back(ids[static_cast<std::size_t>(2 * i + 1)]);
  }
  auto [ct1, ist] = idfe_sim_ct(2 * static_cast<std::size_t>(d), rng);
  ct.ct1 = std::move(ct1);
  st.idfe_st = std::move(ist);
  return {std::move(ct), std::move(st)};
}

/**
 * Adaptive simulator, key side: teleport the function output into the
 * halves already sent and program the classical key to the corrections.
 */
inline OneQfeKey oneqfe_sim_adaptive_key(OneQfeSimState& st, RegisterState& rs,
                                         const std::vector<int>& out,
                                         RandomSource& rng) {
  if (out.size() != st.retained.size()) {
    throw std::invalid_argument("oneqfe_sim_adaptive_key: width mismatch");
  }
  if (st.idfe_st.used) {
    throw std::logic_error("oneqfe_sim_adaptive_key: state reuse");
  }
  PauliKey corr(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto [a, b] = rs.bell_measure(out[i], st.retained[i], rng);
    corr.a[i] = static_cast<std::uint8_t>(a);
    corr.b[i] = static_cast<std::uint8_t>(b);
  }
  return {idfe_sim_key(st.idfe_st, corr.to_bits())};
}

/** Key-first simulation, for the non-adaptive query order. */
inline std::pair<OneQfeKey, OneQfeSimState> oneqfe_sim_key_first(
    int n_out, RandomSource& rng) {
  if (n_out < 0) throw std::invalid_argument("oneqfe_sim_key_first: width");
  auto [sk, ist] = idfe_sim_key_first(2 * static_cast<std::size_t>(n_out),
                                      rng);
  OneQfeSimState st;
  st.idfe_st = std::move(ist);
  return {OneQfeKey{std::move(sk)}, std::move(st)};
}

inline OneQfeCiphertext oneqfe_sim_ct_after_key(OneQfeSimState& st,
                                                RegisterState& rs,
                                                const std::vector<int>& out,
                                                RandomSource& rng) {
  const PauliKey ab = PauliKey::random(out.size(), rng);
  auto ct1 = idfe_sim_ct_after_key(st.idfe_st, ab.to_bits());
  rs.apply_qotp(ab, out);
  return {out, std::move(ct1)};
}

/**
 * Multi-message wrapper: one key, many ciphertexts, simulated by invoking
 * the single-message non-adaptive simulator per message.  The adaptive
 * argument does not carry over to many messages, so requesting it errors.
 */
inline std::vector<OneQfeCiphertext> oneqfe_multi_message_sim(
    const OneQfeScheme& s, QfeSimMode mode, RegisterState& rs,
    const std::vector<std::vector<int>>& per_message_out, RandomSource& rng) {
  if (mode == QfeSimMode::adaptive) {
    throw std::logic_error(
        "multi-message simulation is only supported non-adaptively");
  }
  std::vector<OneQfeCiphertext> cts;
  cts.reserve(per_message_out.size());
  for (const auto& out : per_message_out) {
    cts.push_back(oneqfe_sim_nonadaptive(s, rs, out, rng));
  }
  return cts;
}

}  // namespace qfe
