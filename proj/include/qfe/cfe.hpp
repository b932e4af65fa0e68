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
 * Classical single-query functional encryption building blocks, in an
 * information-theoretically secure secret-key instantiation:
 *
 *  - IdFE: FE for the identity function.  The master secret is a uniform
 *    pad k; Enc(m) = m xor k; the (single) function key for the identity
 *    is k itself.
 *  - TwoFE: FE for a family of exactly two functions {f_0, f_1}.  The
 *    master secret is an independent pad per slot; Enc(x) publishes
 *    (f_0(x) xor k_0, f_1(x) xor k_1); the function key for index b opens
 *    only slot b.  The unopened slot stays one-time-padded, so the view
 *    excluding the key is exactly independent of x.
 *
 * Both schemes admit *perfect* single-query simulation in either query
 * order.  A simulator that must commit to the ciphertext first emits
 * uniform slots and later programs the key as slot xor value; one that
 * must commit to the key first emits a uniform pad and later programs the
 * opened slot.  Each (ciphertext, key) pair in the real scheme maps
 * bijectively onto a simulated pair, so the joint views are equal, not
 * merely close.
 *
 * Single-query discipline is enforced with a consumed-flag on the key
 * bundle (and on simulator states): a second KeyGen throws.  Key objects
 * are therefore single-owner; everything else here is pure data.
 */

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfe/core.hpp"

namespace qfe {

/** Ciphertext of either scheme: one XOR-padded bit-string per slot. */
struct CfeCiphertext {
  std::vector<std::vector<std::uint8_t>> slots;
};

/**
 * Simulator state: the uniform strings already shown to the adversary,
 * retained so the remaining piece can be programmed against them.  One
 * state per simulated ciphertext (or key), single use.
 */
struct CfeSimState {
  std::vector<std::vector<std::uint8_t>> strings;
  int b = -1;  // TwoFE key-first order: the index already committed to
  bool used = false;
};

namespace cfe_detail {

inline int next_handle() {
  static int counter = 0;
  return ++counter;
}

inline void check_len(const std::vector<std::uint8_t>& v, std::size_t len,
                      const char* what) {
  if (v.size() != len) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (got " +
                                std::to_string(v.size()) + ", expected " +
                                std::to_string(len) + ")");
  }
}

inline void consume(bool& flag, const char* what) {
  if (flag) {
    throw std::logic_error(std::string(what) +
                           ": single-query instance already consumed");
  }
  flag = true;
}

}  // namespace cfe_detail

// --- IdFE ------------------------------------------------------------------

struct IdFeKeys {
  std::vector<std::uint8_t> msk;  // the pad k
  int mpk = 0;                    // opaque instance handle
  bool key_consumed = false;
};

/** Function key for the identity circuit: the pad itself. */
struct IdFeKey {
  std::vector<std::uint8_t> pad;
};

inline IdFeKeys idfe_setup(std::size_t len, RandomSource& rng) {
  IdFeKeys keys;
  keys.msk = rng.bits(len);
  keys.mpk = cfe_detail::next_handle();
  return keys;
}

inline CfeCiphertext idfe_enc(const IdFeKeys& keys,
                              const std::vector<std::uint8_t>& m) {
  cfe_detail::check_len(m, keys.msk.size(), "idfe_enc");
  return CfeCiphertext{{xor_bits(m, keys.msk)}};
}

inline IdFeKey idfe_keygen(IdFeKeys& keys) {
  cfe_detail::consume(keys.key_consumed, "idfe_keygen");
  return IdFeKey{keys.msk};
}

inline std::vector<std::uint8_t> idfe_dec(const IdFeKey& sk,
                                          const CfeCiphertext& ct) {
  if (ct.slots.size() != 1) {
    throw std::invalid_argument("idfe_dec: expected a one-slot ciphertext");
  }
  cfe_detail::check_len(ct.slots[0], sk.pad.size(), "idfe_dec");
  return xor_bits(ct.slots[0], sk.pad);
}

/** Ciphertext-first simulation: emit a uniform slot, program the key later. */
inline std::pair<CfeCiphertext, CfeSimState> idfe_sim_ct(std::size_t len,
                                                         RandomSource& rng) {
  CfeSimState st;
  st.strings = {rng.bits(len)};
  return {CfeCiphertext{{st.strings[0]}}, st};
}

inline IdFeKey idfe_sim_key(CfeSimState& st,
                            const std::vector<std::uint8_t>& m) {
  cfe_detail::check_len(m, st.strings.at(0).size(), "idfe_sim_key");
  cfe_detail::consume(st.used, "idfe_sim_key");
  return IdFeKey{xor_bits(st.strings[0], m)};
}

/** Key-first simulation: emit a uniform pad, program the ciphertext later. */
inline std::pair<IdFeKey, CfeSimState> idfe_sim_key_first(std::size_t len,
                                                          RandomSource& rng) {
  CfeSimState st;
  st.strings = {rng.bits(len)};
  return {IdFeKey{st.strings[0]}, st};
}

inline CfeCiphertext idfe_sim_ct_after_key(CfeSimState& st,
                                           const std::vector<std::uint8_t>& m) {
  cfe_detail::check_len(m, st.strings.at(0).size(), "idfe_sim_ct_after_key");
  cfe_detail::consume(st.used, "idfe_sim_ct_after_key");
  return CfeCiphertext{{xor_bits(st.strings[0], m)}};
}

// --- TwoFE -----------------------------------------------------------------

/** A member of a TwoFE function family: bit-vector map with declared shape. */
struct ClassicalFn {
  std::size_t in_len = 0;
  std::size_t out_len = 0;
  std::function<std::vector<std::uint8_t>(const std::vector<std::uint8_t>&)>
      eval;

  std::vector<std::uint8_t> operator()(
      const std::vector<std::uint8_t>& x) const {
    cfe_detail::check_len(x, in_len, "ClassicalFn input");
    auto y = eval(x);
    cfe_detail::check_len(y, out_len, "ClassicalFn output");
    return y;
  }
};

struct TwoFeKeys {
  std::vector<std::uint8_t> msk0, msk1;  // independent slot pads
  ClassicalFn f0, f1;                    // family fixed at setup
  int mpk = 0;
  bool key_consumed = false;
};

/** Function key for index b: opens slot b only. */
struct TwoFeKey {
  int b = 0;
  std::vector<std::uint8_t> pad;
};

inline TwoFeKeys twofe_setup(ClassicalFn f0, ClassicalFn f1,
                             RandomSource& rng) {
  if (f0.in_len != f1.in_len) {
    throw std::invalid_argument("twofe_setup: family input lengths differ");
  }
  TwoFeKeys keys;
  keys.msk0 = rng.bits(f0.out_len);
  keys.msk1 = rng.bits(f1.out_len);
  keys.f0 = std::move(f0);
  keys.f1 = std::move(f1);
  keys.mpk = cfe_detail::next_handle();
  return keys;
}

inline CfeCiphertext twofe_enc(const TwoFeKeys& keys,
                               const std::vector<std::uint8_t>& x) {
  return CfeCiphertext{
      {xor_bits(keys.f0(x), keys.msk0), xor_bits(keys.f1(x), keys.msk1)}};
}

inline TwoFeKey twofe_keygen(TwoFeKeys& keys, int b) {
  if (b != 0 && b != 1) {
    throw std::invalid_argument("twofe_keygen: index must be 0 or 1");
  }
  cfe_detail::consume(keys.key_consumed, "twofe_keygen");
  return TwoFeKey{b, b == 0 ? keys.msk0 : keys.msk1};
}

inline std::vector<std::uint8_t> twofe_dec(const TwoFeKey& sk,
                                           const CfeCiphertext& ct) {
  if (ct.slots.size() != 2) {
    throw std::invalid_argument("twofe_dec: expected a two-slot ciphertext");
  }
  const auto& slot = ct.slots[static_cast<std::size_t>(sk.b)];
  cfe_detail::check_len(slot, sk.pad.size(), "twofe_dec");
  return xor_bits(slot, sk.pad);
}

/** Ciphertext-first simulation: both slots uniform; key programs slot b. */
inline std::pair<CfeCiphertext, CfeSimState> twofe_sim_ct(std::size_t len0,
                                                          std::size_t len1,
                                                          RandomSource& rng) {
  CfeSimState st;
  st.strings = {rng.bits(len0), rng.bits(len1)};
  return {CfeCiphertext{{st.strings[0], st.strings[1]}}, st};
}

inline TwoFeKey twofe_sim_key(CfeSimState& st, int b,
                              const std::vector<std::uint8_t>& y) {
  if (b != 0 && b != 1) {
    throw std::invalid_argument("twofe_sim_key: index must be 0 or 1");
  }
  const auto& slot = st.strings.at(static_cast<std::size_t>(b));
  cfe_detail::check_len(y, slot.size(), "twofe_sim_key");
  cfe_detail::consume(st.used, "twofe_sim_key");
  return TwoFeKey{b, xor_bits(slot, y)};
}

/** Key-first simulation: uniform pad now, program slot b of the ct later. */
inline std::pair<TwoFeKey, CfeSimState> twofe_sim_key_first(int b,
                                                            std::size_t len_b,
                                                            RandomSource& rng) {
  if (b != 0 && b != 1) {
    throw std::invalid_argument("twofe_sim_key_first: index must be 0 or 1");
  }
  CfeSimState st;
  st.strings = {rng.bits(len_b)};
  st.b = b;
  return {TwoFeKey{b, st.strings[0]}, st};
}

inline CfeCiphertext twofe_sim_ct_after_key(CfeSimState& st,
                                            const std::vector<std::uint8_t>& y,
                                            std::size_t len_other,
                                            RandomSource& rng) {
  cfe_detail::check_len(y, st.strings.at(0).size(), "twofe_sim_ct_after_key");
  cfe_detail::consume(st.used, "twofe_sim_ct_after_key");
  const std::vector<std::uint8_t> opened = xor_bits(st.strings[0], y);
  const std::vector<std::uint8_t> other = rng.bits(len_other);
  CfeCiphertext ct;
  if (st.b == 0) {
    ct.slots = {opened, other};
  } else {
    ct.slots = {other, opened};
  }
  return ct;
}

}  // namespace qfe
