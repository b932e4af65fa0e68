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

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qfe/core.hpp"
#include "qfe/fe/polyqfe.hpp"
#include "qfe/ufe.hpp"
#include "test_helpers.hpp"

namespace {

using namespace qfe;

constexpr double kTol = 1e-9;
constexpr double kExact = 1e-12;

CircuitDesc identity_circuit(int n) {
  CircuitDesc c;
  c.quantum_inputs = n;
  return c;
}

CircuitDesc h_circuit() {
  CircuitDesc c;
  c.quantum_inputs = 1;
  c.gates = {{GateKind::H, {0}}};
  return c;
}

/** Exact classical-quantum output of the keyed program on a built input. */
CQState run_program(
    const UParams& p, const UfeLayout& lay,
    const std::function<std::vector<int>(RegisterState&)>& build) {
  const Channel ch = u_channel(p, lay);
  const auto outcomes = enumerate_outcomes([&](RandomSource& rng) {
    RegisterState rs;
    const auto ws = build(rs);
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

}  // namespace

TEST_CASE("conjugate coding round trips exactly for both bits") {
  for (int t : {1, 2, 3}) {
    const auto k = ueq_keygen(t, 77 + static_cast<std::uint64_t>(t));
    for (int bit : {0, 1}) {
      // Every branch of encryption randomness and decryption measurement
      // must return the encrypted bit.
      const auto outcomes = enumerate_outcomes([&](RandomSource& rng) {
        const auto ct = ueq_enc(k, bit, rng);
        return ueq_dec(ueq_dk_state(k), ct, rng);
      });
      double total = 0.0;
      for (const auto& o : outcomes) {
        REQUIRE(o.value == bit);
        total += o.probability;
      }
      REQUIRE(total == Catch::Approx(1.0).margin(kExact));
    }
  }
}

TEST_CASE("conjugate-coding ciphertexts match the basis-rotation mixture") {
  // Independent oracle: the average ciphertext for bit v must equal the
  // uniform mixture of H^theta |x><x| H^theta over x of parity v xor pad.
  const int t = 3;
  const auto k = ueq_keygen(t, 5);
  for (int bit : {0, 1}) {
    Mat expect = Mat::Zero(1 << t, 1 << t);
    int count = 0;
    for (std::size_t x = 0; x < (1u << t); ++x) {
      std::vector<std::uint8_t> xs;
      int parity = 0;
      for (int i = 0; i < t; ++i) {
        const int v = static_cast<int>(x >> (t - 1 - i)) & 1;
        xs.push_back(static_cast<std::uint8_t>(v));
        parity ^= v;
      }
      if (parity != (bit ^ k.pad)) continue;
      DensityMatrix s = DensityMatrix::basis(xs);
      for (int i = 0; i < t; ++i) {
        if (k.theta[static_cast<std::size_t>(i)]) {
          s = apply_gate(s, GateKind::H, {i});
        }
      }
      expect += s.mat();
      ++count;
    }
    expect /= count;

    Mat got = Mat::Zero(1 << t, 1 << t);
    const auto outcomes = enumerate_outcomes(
        [&](RandomSource& rng) { return ueq_enc(k, bit, rng); });
    for (const auto& o : outcomes) got += o.probability * o.value.mat();
    REQUIRE(trace_distance(DensityMatrix::from_matrix(got),
                           DensityMatrix::from_matrix(expect)) < kExact);
  }
}

TEST_CASE("the decryption key regenerates identically from its seed") {
  const auto k1 = ueq_keygen(2, 31);
  const auto k2 = ueq_keygen(2, 31);
  REQUIRE(k1.theta == k2.theta);
  REQUIRE(k1.pad == k2.pad);
  REQUIRE(trace_distance(ueq_dk_state(k1), ueq_dk_state(k2)) == 0.0);

  bool differs = false;
  for (std::uint64_t seed = 0; seed < 8 && !differs; ++seed) {
    const auto other = ueq_keygen(2, 100 + seed);
    differs = other.dk_bits() != k1.dk_bits();
  }
  REQUIRE(differs);
}

TEST_CASE("an independently drawn key decrypts correctly exactly half the "
          "time") {
  for (int t : {1, 2, 3}) {
    const auto k = ueq_keygen(t, 9);
    for (int bit : {0, 1}) {
      const auto outcomes = enumerate_outcomes([&](RandomSource& rng) {
        const auto ct = ueq_enc(k, bit, rng);
        const auto wrong = DensityMatrix::basis(
            rng.bits(static_cast<std::size_t>(t) + 1));
        return ueq_dec(wrong, ct, rng) == bit ? 1 : 0;
      });
      double hit = 0.0;
      for (const auto& o : outcomes) hit += o.probability * o.value;
      REQUIRE(hit == Catch::Approx(0.5).margin(kExact));
    }
  }
}

TEST_CASE("mode 0 runs the circuit on the first slot and ignores the rest") {
  const UfeConfig cfg{1, 1};  // slot = 3, layout total = 2n + 8
  UParams p;
  p.c = h_circuit();
  p.a = {1, 0, 1};
  p.b = {0, 1, 1};

  // Junk in every non-message slot, flag 0.
  DensityMatrix joint = DensityMatrix::zero();                     // m0
  joint = tensor(joint, DensityMatrix::one());                     // m1
  joint = tensor(joint, DensityMatrix::basis({1, 0, 1}));          // dk0
  joint = tensor(joint, DensityMatrix::maximally_mixed(3));        // dk1
  joint = tensor(joint, DensityMatrix::plus());                    // ue
  joint = tensor(joint, DensityMatrix::zero());                    // flag

  const auto cq = u_circuit_apply(p, cfg, joint);
  REQUIRE(cq.blocks().size() == 1);
  REQUIRE(cq.blocks().at("ok").weight == Catch::Approx(1.0).margin(kExact));
  REQUIRE(trace_distance(cq.conditional("ok"), DensityMatrix::plus()) <
          kExact);

  // Same layout, identity circuit, arbitrary pure message.
  RandomSource mk(4);
  const auto psi = qfe::test::random_pure_state(1, mk);
  UParams pid;
  pid.c = identity_circuit(1);
  pid.a = {0, 0, 0};
  pid.b = {0, 0, 0};
  DensityMatrix j2 = psi;
  j2 = tensor(j2, DensityMatrix::maximally_mixed(1));
  j2 = tensor(j2, DensityMatrix::basis({1, 1, 1}));
  j2 = tensor(j2, DensityMatrix::maximally_mixed(3));
  j2 = tensor(j2, DensityMatrix::one());
  j2 = tensor(j2, DensityMatrix::zero());
  const auto cq2 = u_circuit_apply(pid, cfg, j2);
  REQUIRE(cq2.blocks().at("ok").weight ==
          Catch::Approx(1.0).margin(kExact));
  REQUIRE(trace_distance(cq2.conditional("ok"), psi) < kExact);
}

TEST_CASE("mode 1 with a pre-padded key slot selects the encrypted message") {
  const UfeConfig cfg{1, 1};
  const auto k = ueq_keygen(cfg.ue_qubits, 12);
  RandomSource pin(0);
  for (int sel : {0, 1}) {
    for (std::uint64_t kv = 0; kv < 3; ++kv) {
      RandomSource kr(50 + kv);
      const auto a = kr.bits(static_cast<std::size_t>(cfg.key_slot()));
      const auto b = kr.bits(static_cast<std::size_t>(cfg.key_slot()));

      // Slot 0 carries X^a Z^b (0^lambda, dk); the program's own X^a Z^b
      // cancels it, so the prefix check passes and dk decrypts the ue slot.
      std::vector<std::uint8_t> content(
          static_cast<std::size_t>(cfg.lambda_prefix), 0);
      for (auto v : k.dk_bits()) content.push_back(v);
      DensityMatrix dk0 = DensityMatrix::basis(content);
      dk0 = qotp_apply(dk0, PauliKey(a, b));

      for (bool use_h : {false, true}) {
        UParams p;
        p.c = use_h ? h_circuit() : identity_circuit(1);
        p.a = a;
        p.b = b;
        DensityMatrix joint = DensityMatrix::zero();               // m0
        joint = tensor(joint, DensityMatrix::one());               // m1
        joint = tensor(joint, dk0);
        joint = tensor(joint, DensityMatrix::basis({1, 0, 1}));    // junk dk1
        joint = tensor(joint, ueq_enc(k, sel, pin));
        joint = tensor(joint, DensityMatrix::one());               // flag

        const auto cq = u_circuit_apply(p, cfg, joint);
        REQUIRE(cq.blocks().at("ok").weight ==
                Catch::Approx(1.0).margin(kExact));
        DensityMatrix want =
            sel == 0 ? DensityMatrix::zero() : DensityMatrix::one();
        if (use_h) want = apply_gate(want, GateKind::H, {0});
        REQUIRE(trace_distance(cq.conditional("ok"), want) < kExact);
      }
    }
  }
}

TEST_CASE("two garbage key slots reject with the exact two-miss probability") {
  const UfeConfig cfg{4, 2};  // slot = 7
  const UfeLayout lay{1, cfg};
  const auto k = ueq_keygen(cfg.ue_qubits, 21);
  RandomSource pin(0);
  const auto ue = ueq_enc(k, 1, pin);

  RandomSource kr(6);
  UParams p;
  p.c = identity_circuit(1);
  p.a = kr.bits(static_cast<std::size_t>(lay.slot()));
  p.b = kr.bits(static_cast<std::size_t>(lay.slot()));

  const auto cq = run_program(p, lay, [&](RegisterState& rs) {
    std::vector<int> ws = rs.add_bits({0});                        // m0
    const auto m1 = rs.add_bits({1});
    ws.insert(ws.end(), m1.begin(), m1.end());
    for (int i = 0; i < 2; ++i) {
      const auto dk =
          rs.add_state(DensityMatrix::maximally_mixed(lay.slot()));
      ws.insert(ws.end(), dk.begin(), dk.end());
    }
    const auto ue_ws = rs.add_state(ue);
    ws.insert(ws.end(), ue_ws.begin(), ue_ws.end());
    ws.push_back(rs.add_bits({1})[0]);
    return ws;
  });

  const double miss = 1.0 - 1.0 / 16.0;
  REQUIRE(cq.blocks().at("bot").weight ==
          Catch::Approx(miss * miss).margin(kExact));
  REQUIRE(cq.blocks().at("bot").weight >= 1.0 - 2.0 / 16.0);
  REQUIRE(cq.total_weight() == Catch::Approx(1.0).margin(kExact));
}

TEST_CASE("a uniformly random key slot passes the prefix check with "
          "probability exactly two to the minus lambda") {
  for (int lambda : {2, 5}) {
    const UfeConfig cfg{lambda, 1};
    const UfeLayout lay{1, cfg};
    const auto k = ueq_keygen(cfg.ue_qubits, 33);
    RandomSource pin(0);
    const auto ue = ueq_enc(k, 0, pin);

    // Zero corrections leave slot 1's all-ones prefix failing for sure, so
    // acceptance happens exactly when the random slot 0 clears the check.
    UParams p;
    p.c = identity_circuit(1);
    p.a.assign(static_cast<std::size_t>(lay.slot()), 0);
    p.b.assign(static_cast<std::size_t>(lay.slot()), 0);

    const auto cq = run_program(p, lay, [&](RegisterState& rs) {
      std::vector<int> ws = rs.add_bits({1});                      // m0
      const auto m1 = rs.add_bits({0});
      ws.insert(ws.end(), m1.begin(), m1.end());
      const auto dk0 =
          rs.add_state(DensityMatrix::maximally_mixed(lay.slot()));
      ws.insert(ws.end(), dk0.begin(), dk0.end());
      const auto dk1 = rs.add_bits(std::vector<std::uint8_t>(
          static_cast<std::size_t>(lay.slot()), 1));
      ws.insert(ws.end(), dk1.begin(), dk1.end());
      const auto ue_ws = rs.add_state(ue);
      ws.insert(ws.end(), ue_ws.begin(), ue_ws.end());
      ws.push_back(rs.add_bits({1})[0]);
      return ws;
    });

    const double pass = 1.0 / static_cast<double>(1 << lambda);
    REQUIRE(cq.blocks().at("ok").weight ==
            Catch::Approx(pass).margin(kExact));
    REQUIRE(cq.blocks().at("bot").weight ==
            Catch::Approx(1.0 - pass).margin(kExact));
  }
}

TEST_CASE("independently issued keys decrypt honest ciphertexts "
          "identically") {
  RandomSource rng(11);
  const UfeConfig cfg{2, 1};
  const auto s = ufe_setup(1, cfg, rng);

  const auto sk1 = ufe_keygen(s, h_circuit(), rng);
  const auto sk2 = ufe_keygen(s, h_circuit(), rng);
  REQUIRE((sk1.params.a != sk2.params.a || sk1.params.b != sk2.params.b));

  RandomSource mk(8);
  const auto psi = qfe::test::random_pure_state(1, mk);
  const auto want = apply_gate(psi, GateKind::H, {0});
  for (const auto* sk : {&sk1, &sk2}) {
    RegisterState rs;
    const auto msg = rs.add_state(psi);
    const auto ct = ufe_enc(s, rs, msg);
    const auto out = ufe_dec(s, *sk, rs, ct, rng);
    REQUIRE(out.status == 0);
    REQUIRE(trace_distance(rs.dense(out.wires), want) < kExact);
  }

  // Identity fixture round trip.
  const auto skid = ufe_keygen(s, identity_circuit(1), rng);
  RegisterState rs;
  const auto msg = rs.add_state(psi);
  const auto ct = ufe_enc(s, rs, msg);
  const auto out = ufe_dec(s, skid, rs, ct, rng);
  REQUIRE(out.status == 0);
  REQUIRE(trace_distance(rs.dense(out.wires), psi) < kExact);
}

TEST_CASE("the mode-1 ciphertext decrypts to the selected message under "
          "both teleport keys") {
  const UfeConfig cfg{4, 2};
  for (bool use_h : {false, true}) {
    for (int which : {0, 1}) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        RandomSource rng(seed);
        const auto s = ufe_setup(1, cfg, rng);
        RegisterState rs;
        const auto m0 = rs.add_bits({0});
        const auto m1 = rs.add_bits({1});
        const auto star = ufe_enc_star(s, rs, m0, m1, 42 + seed, rng);

        const auto& key = which == 0 ? star.key0 : star.key1;
        if (which == 1) {
          // Key 1 reaches slot 1 only when slot 0's prefix misses under
          // its corrections; these seeds avoid the 2^-4 collision.
          bool collide = true;
          for (int i = 0; i < cfg.lambda_prefix; ++i) {
            collide = collide && (star.key0.a[static_cast<std::size_t>(i)] ==
                                  star.key1.a[static_cast<std::size_t>(i)]);
          }
          REQUIRE_FALSE(collide);
        }
        const auto c = use_h ? h_circuit() : identity_circuit(1);
        const auto sk = ufe_keygen_with(s, c, key.a, key.b);
        const auto out = ufe_dec(s, sk, rs, star.ct, rng);
        REQUIRE(out.status == 0);
        DensityMatrix want = star.b == 0 ? DensityMatrix::zero()
                                         : DensityMatrix::one();
        if (use_h) want = apply_gate(want, GateKind::H, {0});
        REQUIRE(trace_distance(rs.dense(out.wires), want) < kTol);
      }
    }
  }
}

TEST_CASE("teleport correction keys are uniform with the exact prefix "
          "collision rate") {
  // Small layout so the full Bell-outcome space enumerates: slot = 2, so
  // each key carries 4 bits and the joint key space has 2^8 points.
  const UfeConfig cfg{1, 1};
  RandomSource setup_rng(2);
  const auto s = ufe_setup(1, cfg, setup_rng);
  const int slot = s.layout.slot();
  REQUIRE(slot == 3);

  std::vector<double> weight(1 << (4 * slot), 0.0);
  double collision = 0.0;
  const auto outcomes = enumerate_outcomes([&](RandomSource& rng) {
    RegisterState rs;
    const auto m0 = rs.add_bits({0});
    const auto m1 = rs.add_bits({1});
    const auto star = ufe_enc_star(s, rs, m0, m1, 7, rng);
    std::size_t idx = 0;
    for (const auto* k : {&star.key0, &star.key1}) {
      for (int i = 0; i < slot; ++i) {
        idx = idx * 2 + k->a[static_cast<std::size_t>(i)];
        idx = idx * 2 + k->b[static_cast<std::size_t>(i)];
      }
    }
    const bool collide = star.key0.a[0] == star.key1.a[0];
    return std::make_pair(idx, collide);
  });
  for (const auto& o : outcomes) {
    weight[o.value.first] += o.probability;
    if (o.value.second) collision += o.probability;
  }

  const double each = 1.0 / static_cast<double>(1 << (4 * slot));
  for (double w : weight) REQUIRE(w == Catch::Approx(each).margin(kExact));
  REQUIRE(collision == Catch::Approx(0.5).margin(kExact));
}

TEST_CASE("the derived classical scheme accepts either variable key") {
  RandomSource rng(19);
  const UfeConfig cfg{2, 1};
  const auto s = pkeue_setup(2, cfg, rng);

  const auto k1 = pkeue_keygen(s, 10, 1);
  const auto k2 = pkeue_keygen(s, 10, 2);
  REQUIRE((k1.params.a != k2.params.a || k1.params.b != k2.params.b));

  // Shared seed plus the same per-key seed reproduces the identical key.
  const auto k1_again = pkeue_keygen(s, 10, 1);
  REQUIRE(k1.params.a == k1_again.params.a);
  REQUIRE(k1.params.b == k1_again.params.b);

  const std::vector<std::uint8_t> m = {1, 0};
  for (const auto* k : {&k1, &k2}) {
    RegisterState rs;
    const auto ct = pkeue_enc(s, rs, m);
    REQUIRE(pkeue_dec(s, *k, rs, ct, rng) == m);
  }
}

TEST_CASE("the mode-0 path runs under the garbled-circuit scheme") {
  const UfeConfig cfg{1, 1};
  const auto cls = ufe_flag0_class(h_circuit(), cfg);
  const UfeLayout lay{1, cfg};
  REQUIRE(cls.n() == lay.total());
  REQUIRE(cls.l() == 0);

  RandomSource rng(23);
  auto keys = polyqfe_setup(cls, rng);
  const auto sk = polyqfe_keygen(keys, std::vector<std::uint8_t>{});

  RegisterState rs;
  std::vector<int> msg = rs.add_bits({0});  // message |0>, zero padding
  const auto pad = rs.add_bits(std::vector<std::uint8_t>(
      static_cast<std::size_t>(cls.n() - 1), 0));
  msg.insert(msg.end(), pad.begin(), pad.end());
  const auto ct = polyqfe_enc(keys, rs, msg, rng);
  const auto out = polyqfe_dec(sk, rs, ct, rng);
  REQUIRE(out.size() == 1);
  REQUIRE(trace_distance(rs.dense(out), DensityMatrix::plus()) < kTol);
}

TEST_CASE("shape violations are rejected") {
  RandomSource rng(3);
  const UfeConfig cfg{2, 1};
  const auto s = ufe_setup(1, cfg, rng);

  SECTION("single-bit scheme") {
    REQUIRE_THROWS_AS(ueq_keygen(0, 1), std::invalid_argument);
    const auto k = ueq_keygen(2, 1);
    REQUIRE_THROWS_AS(ueq_enc(k, 2, rng), std::invalid_argument);
    RegisterState rs;
    const auto dk = rs.add_bits({0, 0});
    const auto ct = rs.add_bits({0, 0});
    REQUIRE_THROWS_AS(ueq_dec(rs, dk, ct, rng), std::invalid_argument);
  }
  SECTION("program shape") {
    UParams p;
    p.c = identity_circuit(1);
    p.a = {0, 0};  // one bit short of the slot
    p.b = {0, 0};
    REQUIRE_THROWS_AS(u_channel(p, s.layout), std::invalid_argument);
    p.a = {0, 0, 0, 0};
    p.b = {0, 0, 0, 0};
    p.c.classical_inputs = 1;
    REQUIRE_THROWS_AS(u_channel(p, s.layout), std::invalid_argument);
  }
  SECTION("joint state width") {
    UParams p;
    p.c = identity_circuit(1);
    p.a.assign(3, 0);
    p.b.assign(3, 0);
    REQUIRE_THROWS_AS(
        u_circuit_apply(p, UfeConfig{1, 1},
                        DensityMatrix::maximally_mixed(9)),
        std::invalid_argument);
  }
  SECTION("scheme operations") {
    REQUIRE_THROWS_AS(ufe_setup(0, cfg, rng), std::invalid_argument);
    REQUIRE_THROWS_AS(ufe_keygen(s, identity_circuit(2), rng),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(
        ufe_keygen_with(s, identity_circuit(1), {0}, {0}),
        std::invalid_argument);
    RegisterState rs;
    const auto two = rs.add_bits({0, 0});
    REQUIRE_THROWS_AS(ufe_enc(s, rs, two), std::invalid_argument);
    const auto sk = ufe_keygen(s, identity_circuit(1), rng);
    UfeCiphertext bad{{0, 1, 2}};
    REQUIRE_THROWS_AS(ufe_dec(s, sk, rs, bad, rng), std::invalid_argument);
    const auto one = rs.add_bits({0});
    REQUIRE_THROWS_AS(ufe_enc_star(s, rs, two, one, 1, rng),
                      std::invalid_argument);
  }
  SECTION("garbled-circuit specialization") {
    CircuitDesc with_anc;
    with_anc.quantum_inputs = 1;
    with_anc.ancillas = 1;
    REQUIRE_THROWS_AS(ufe_flag0_class(with_anc, cfg),
                      std::invalid_argument);
  }
  SECTION("derived classical scheme") {
    const auto ps = pkeue_setup(2, cfg, rng);
    RegisterState rs;
    REQUIRE_THROWS_AS(pkeue_enc(ps, rs, {1}), std::invalid_argument);
  }
}
