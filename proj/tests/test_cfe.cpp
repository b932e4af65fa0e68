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

#include <catch2/catch_amalgamated.hpp>

#include "qfe/cfe.hpp"
#include "qfe/core.hpp"

namespace {

using namespace qfe;

std::string bits_str(const std::vector<std::uint8_t>& v) {
  std::string s;
  for (auto b : v) s += static_cast<char>('0' + (b & 1));
  return s;
}

std::vector<std::uint8_t> bits_of(std::uint64_t x, std::size_t n) {
  std::vector<std::uint8_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<std::uint8_t>((x >> i) & 1u);
  }
  return out;
}

/** Classical distribution over view labels as a CQState with no qubits. */
CQState classical_dist(const std::function<std::string(RandomSource&)>& fn) {
  CQState cq;
  for (const auto& br : enumerate_outcomes(fn)) {
    cq.add(br.value, br.probability, DensityMatrix{});
  }
  return cq;
}

// --- IdFE ------------------------------------------------------------------

TEST_CASE("IdFE: pinned XOR fixture") {
  IdFeKeys keys;
  keys.msk = {0, 1, 1, 0};
  auto ct = idfe_enc(keys, {1, 0, 1, 0});
  CHECK(ct.slots[0] == std::vector<std::uint8_t>{1, 1, 0, 0});
  auto sk = idfe_keygen(keys);
  CHECK(idfe_dec(sk, ct) == std::vector<std::uint8_t>{1, 0, 1, 0});
}

TEST_CASE("IdFE: encrypting the zero string reveals the pad") {
  RandomSource rng(1);
  IdFeKeys keys = idfe_setup(8, rng);
  auto ct = idfe_enc(keys, std::vector<std::uint8_t>(8, 0));
  CHECK(ct.slots[0] == keys.msk);
}

TEST_CASE("IdFE: random 32-bit round-trip matches the XOR oracle") {
  RandomSource rng(2);
  IdFeKeys keys = idfe_setup(32, rng);
  const auto m = rng.bits(32);
  auto ct = idfe_enc(keys, m);
  for (std::size_t i = 0; i < 32; ++i) {
    CHECK(ct.slots[0][i] == ((m[i] + keys.msk[i]) % 2));  // independent oracle
  }
  auto sk = idfe_keygen(keys);
  CHECK(idfe_dec(sk, ct) == m);
}

TEST_CASE("IdFE: misuse errors") {
  RandomSource rng(3);
  IdFeKeys keys = idfe_setup(4, rng);
  CHECK_THROWS_AS(idfe_enc(keys, {1, 0}), std::invalid_argument);
  (void)idfe_keygen(keys);
  CHECK_THROWS_AS(idfe_keygen(keys), std::logic_error);

  auto [ct, st] = idfe_sim_ct(4, rng);
  (void)idfe_sim_key(st, {1, 1, 1, 1});
  CHECK_THROWS_AS(idfe_sim_key(st, {1, 1, 1, 1}), std::logic_error);
}

TEST_CASE("IdFE: simulated pairs always decrypt to the programmed value") {
  RandomSource rng(4);
  for (std::uint64_t mv = 0; mv < 8; ++mv) {
    const auto m = bits_of(mv, 3);
    auto [ct, st] = idfe_sim_ct(3, rng);
    auto sk = idfe_sim_key(st, m);
    CHECK(idfe_dec(sk, ct) == m);

    auto [sk2, st2] = idfe_sim_key_first(3, rng);
    auto ct2 = idfe_sim_ct_after_key(st2, m);
    CHECK(idfe_dec(sk2, ct2) == m);
  }
}

TEST_CASE("IdFE: simulated ciphertext marginal is exactly uniform") {
  auto dist = classical_dist([](RandomSource& rng) {
    return bits_str(idfe_sim_ct(3, rng).first.slots[0]);
  });
  REQUIRE(dist.blocks().size() == 8);
  for (const auto& [label, block] : dist.blocks()) {
    CHECK(block.weight == Catch::Approx(1.0 / 8.0).margin(1e-15));
  }
}

TEST_CASE("IdFE: real and simulated joint views are equal, both orders") {
  for (std::uint64_t mv : {0ull, 5ull, 7ull}) {
    const auto m = bits_of(mv, 3);

    CQState real = classical_dist([&](RandomSource& rng) {
      IdFeKeys keys = idfe_setup(3, rng);
      auto ct = idfe_enc(keys, m);
      auto sk = idfe_keygen(keys);
      return bits_str(ct.slots[0]) + "/" + bits_str(sk.pad);
    });
    CQState ideal_ct_first = classical_dist([&](RandomSource& rng) {
      auto [ct, st] = idfe_sim_ct(3, rng);
      auto sk = idfe_sim_key(st, m);
      return bits_str(ct.slots[0]) + "/" + bits_str(sk.pad);
    });
    CQState ideal_key_first = classical_dist([&](RandomSource& rng) {
      auto [sk, st] = idfe_sim_key_first(3, rng);
      auto ct = idfe_sim_ct_after_key(st, m);
      return bits_str(ct.slots[0]) + "/" + bits_str(sk.pad);
    });
    CHECK(trace_distance(real, ideal_ct_first) == 0.0);
    CHECK(trace_distance(real, ideal_key_first) == 0.0);
  }
}

// --- TwoFE -----------------------------------------------------------------

ClassicalFn const_fn(std::size_t in_len, std::vector<std::uint8_t> value) {
  ClassicalFn f;
  f.in_len = in_len;
  f.out_len = value.size();
  f.eval = [value](const std::vector<std::uint8_t>&) { return value; };
  return f;
}

ClassicalFn xor_const_fn(std::vector<std::uint8_t> mask) {
  ClassicalFn f;
  f.in_len = mask.size();
  f.out_len = mask.size();
  f.eval = [mask](const std::vector<std::uint8_t>& x) {
    return xor_bits(x, mask);
  };
  return f;
}

TEST_CASE("TwoFE: constant family, key index selects the function") {
  RandomSource rng(5);
  TwoFeKeys keys =
      twofe_setup(const_fn(2, {0, 0}), const_fn(2, {1, 1}), rng);
  auto ct = twofe_enc(keys, {1, 0});
  auto sk = twofe_keygen(keys, 1);
  CHECK(twofe_dec(sk, ct) == std::vector<std::uint8_t>{1, 1});
}

TEST_CASE("TwoFE: XOR-mask family round-trips against the oracle") {
  RandomSource rng(6);
  const std::vector<std::uint8_t> x = {1, 0, 1, 1};
  for (int b = 0; b < 2; ++b) {
    TwoFeKeys keys = twofe_setup(xor_const_fn({0, 0, 0, 0}),
                                 xor_const_fn({1, 1, 1, 1}), rng);
    auto ct = twofe_enc(keys, x);
    auto sk = twofe_keygen(keys, b);
    std::vector<std::uint8_t> expect(4);
    for (std::size_t i = 0; i < 4; ++i) {
      expect[i] = static_cast<std::uint8_t>((x[i] + (b ? 1 : 0)) % 2);
    }
    CHECK(twofe_dec(sk, ct) == expect);
  }
}

TEST_CASE("TwoFE: misuse errors") {
  RandomSource rng(7);
  TwoFeKeys keys =
      twofe_setup(xor_const_fn({0, 0}), xor_const_fn({1, 1}), rng);
  CHECK_THROWS_AS(twofe_enc(keys, {1, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(twofe_keygen(keys, 2), std::invalid_argument);
  (void)twofe_keygen(keys, 0);
  CHECK_THROWS_AS(twofe_keygen(keys, 1), std::logic_error);

  CHECK_THROWS_AS(twofe_setup(const_fn(2, {0}), const_fn(3, {0}), rng),
                  std::invalid_argument);

  auto [ct, st] = twofe_sim_ct(2, 2, rng);
  CHECK_THROWS_AS(twofe_sim_key(st, 0, {1}), std::invalid_argument);
  (void)twofe_sim_key(st, 0, {1, 1});
  CHECK_THROWS_AS(twofe_sim_key(st, 1, {1, 1}), std::logic_error);
}

TEST_CASE("TwoFE: real and simulated joint views are equal, both orders") {
  const std::vector<std::uint8_t> x = {1, 0};
  const ClassicalFn f0 = xor_const_fn({0, 1});
  const ClassicalFn f1 = xor_const_fn({1, 1});
  for (int b = 0; b < 2; ++b) {
    const auto y = (b == 0 ? f0 : f1)(x);

    CQState real = classical_dist([&](RandomSource& rng) {
      TwoFeKeys keys = twofe_setup(f0, f1, rng);
      auto ct = twofe_enc(keys, x);
      auto sk = twofe_keygen(keys, b);
      return bits_str(ct.slots[0]) + "," + bits_str(ct.slots[1]) + "/" +
             std::to_string(sk.b) + ":" + bits_str(sk.pad);
    });
    CQState ideal_ct_first = classical_dist([&](RandomSource& rng) {
      auto [ct, st] = twofe_sim_ct(2, 2, rng);
      auto sk = twofe_sim_key(st, b, y);
      return bits_str(ct.slots[0]) + "," + bits_str(ct.slots[1]) + "/" +
             std::to_string(sk.b) + ":" + bits_str(sk.pad);
    });
    CQState ideal_key_first = classical_dist([&](RandomSource& rng) {
      auto [sk, st] = twofe_sim_key_first(b, 2, rng);
      auto ct = twofe_sim_ct_after_key(st, y, 2, rng);
      return bits_str(ct.slots[0]) + "," + bits_str(ct.slots[1]) + "/" +
             std::to_string(sk.b) + ":" + bits_str(sk.pad);
    });
    CHECK(trace_distance(real, ideal_ct_first) == 0.0);
    CHECK(trace_distance(real, ideal_key_first) == 0.0);
  }
}

TEST_CASE("TwoFE: the keyless view is independent of the message") {
  const ClassicalFn f0 = xor_const_fn({0, 1});
  const ClassicalFn f1 = xor_const_fn({1, 1});
  auto view_of = [&](std::vector<std::uint8_t> x) {
    return classical_dist([&, x](RandomSource& rng) {
      TwoFeKeys keys = twofe_setup(f0, f1, rng);
      auto ct = twofe_enc(keys, x);
      return bits_str(ct.slots[0]) + "," + bits_str(ct.slots[1]);
    });
  };
  CHECK(trace_distance(view_of({0, 0}), view_of({1, 1})) == 0.0);
  CHECK(trace_distance(view_of({0, 0}), view_of({0, 1})) == 0.0);
}

TEST_CASE("TwoFE: the unopened slot stays uniform given the opened one") {
  // Joint view with the key: conditioned on any (opened slot, key) value,
  // the unopened slot is uniform.
  const ClassicalFn f0 = xor_const_fn({0, 1});
  const ClassicalFn f1 = xor_const_fn({1, 1});
  CQState joint = classical_dist([&](RandomSource& rng) {
    TwoFeKeys keys = twofe_setup(f0, f1, rng);
    auto ct = twofe_enc(keys, {1, 1});
    auto sk = twofe_keygen(keys, 0);
    return bits_str(ct.slots[0]) + ":" + bits_str(sk.pad) + "|" +
           bits_str(ct.slots[1]);
  });
  // The opened slot is determined by the pad (x is fixed), so the label
  // space is 2^2 pads x 2^2 unopened-slot values, all equal mass.
  REQUIRE(joint.blocks().size() == 16);
  for (const auto& [label, block] : joint.blocks()) {
    CHECK(block.weight == Catch::Approx(1.0 / 16.0).margin(1e-15));
  }
}

}  // namespace
