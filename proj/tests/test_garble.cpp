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

#include "qfe/circuit.hpp"
#include "qfe/core.hpp"
#include "qfe/garble.hpp"
#include "test_helpers.hpp"

namespace {

using namespace qfe;

constexpr double kTol = 1e-9;

// --- Fixtures --------------------------------------------------------------

CircuitDesc fix_h() {  // 1 wire, H
  CircuitDesc c;
  c.quantum_inputs = 1;
  c.gates = {{GateKind::H, {0}, -1}};
  return c;
}

CircuitDesc fix_controlled_x() {  // 1 wire, X controlled by bit 0
  CircuitDesc c;
  c.quantum_inputs = 1;
  c.classical_inputs = 1;
  c.gates = {{GateKind::X, {0}, 0}};
  return c;
}

CircuitDesc fix_hp() {  // 1 wire, H then P
  CircuitDesc c;
  c.quantum_inputs = 1;
  c.gates = {{GateKind::H, {0}, -1}, {GateKind::P, {0}, -1}};
  return c;
}

CircuitDesc fix_h_traced() {  // 1 wire, H, output discarded
  CircuitDesc c = fix_h();
  c.trace_out = {0};
  return c;
}

CircuitDesc fix_cnot() {  // 2 wires, CNOT
  CircuitDesc c;
  c.quantum_inputs = 2;
  c.gates = {{GateKind::CNOT, {0, 1}, -1}};
  return c;
}

CircuitDesc fix_ancilla() {  // 1 input + ancilla: CNOT into ancilla, H, trace
  CircuitDesc c;
  c.quantum_inputs = 1;
  c.ancillas = 1;
  c.gates = {{GateKind::CNOT, {0, 1}, -1}, {GateKind::H, {0}, -1}};
  c.trace_out = {0};
  return c;
}

CircuitDesc fix_controlled_h_then_x() {  // 1 wire: H (controlled), then X
  CircuitDesc c;
  c.quantum_inputs = 1;
  c.classical_inputs = 1;
  c.gates = {{GateKind::H, {0}, 0}, {GateKind::X, {0}, -1}};
  return c;
}

CircuitDesc fix_identity() {  // 1 wire, no gates
  CircuitDesc c;
  c.quantum_inputs = 1;
  return c;
}

CircuitDesc fix_four_gates() {  // 2 wires, 4 slots incl. a controlled SWAP
  CircuitDesc c;
  c.quantum_inputs = 2;
  c.classical_inputs = 1;
  c.gates = {{GateKind::H, {0}, -1},
             {GateKind::CNOT, {0, 1}, -1},
             {GateKind::P, {1}, -1},
             {GateKind::SWAP, {0, 1}, 0}};
  return c;
}

// --- Harness helpers -------------------------------------------------------

// `joint` covers the circuit's quantum inputs first, then spectator qubits.

DensityMatrix expected_output(const CircuitDesc& desc,
                              const std::vector<std::uint8_t>& c_bits,
                              const DensityMatrix& joint) {
  RegisterState rs;
  auto ids = rs.add_state(joint);
  std::vector<int> x(ids.begin(), ids.begin() + desc.quantum_inputs);
  std::vector<int> spect(ids.begin() + desc.quantum_inputs, ids.end());
  auto out = evaluate_on(desc, rs, x, c_bits);
  out.insert(out.end(), spect.begin(), spect.end());
  return rs.dense(out);
}

// Exact per-branch correctness of decode(encode(.)) with frozen classical
// randomness: only the Bell measurements branch.
void check_correct_fixed_r(const CircuitDesc& desc,
                           const std::vector<std::uint8_t>& c_bits,
                           const DensityMatrix& joint, std::uint64_t seed) {
  RandomSource seed_src(seed);
  const EncodingRandomness r = sample_randomness(desc, seed_src);
  const DensityMatrix expect = expected_output(desc, c_bits, joint);
  auto branches = enumerate_outcomes([&](RandomSource& rng) {
    RegisterState rs;
    auto ids = rs.add_state(joint);
    std::vector<int> x(ids.begin(), ids.begin() + desc.quantum_inputs);
    std::vector<int> spect(ids.begin() + desc.quantum_inputs, ids.end());
    EprPool pool = make_epr_pool(rs, desc);
    auto bundle = encode(rs, desc, x, c_bits, r, pool, rng);
    auto out = decode(rs, bundle, desc, rng);
    out.insert(out.end(), spect.begin(), spect.end());
    return rs.dense(out);
  });
  double total = 0.0;
  for (const auto& br : branches) {
    total += br.probability;
    REQUIRE(trace_distance(br.value, expect) < kTol);
  }
  CHECK(total == Catch::Approx(1.0).margin(1e-12));
}

CQState real_view(const CircuitDesc& desc,
                  const std::vector<std::uint8_t>& c_bits,
                  const DensityMatrix& joint) {
  auto branches = enumerate_outcomes([&](RandomSource& rng) {
    RegisterState rs;
    auto ids = rs.add_state(joint);
    std::vector<int> x(ids.begin(), ids.begin() + desc.quantum_inputs);
    std::vector<int> spect(ids.begin() + desc.quantum_inputs, ids.end());
    EprPool pool = make_epr_pool(rs, desc);
    const EncodingRandomness r = sample_randomness(desc, rng);
    auto bundle = encode(rs, desc, x, c_bits, r, pool, rng);
    auto order = bundle_wires(bundle);
    order.insert(order.end(), spect.begin(), spect.end());
    return std::make_pair(bundle_label(bundle), rs.dense(order));
  });
  CQState cq;
  for (const auto& br : branches) {
    cq.add(br.value.first, br.probability, br.value.second);
  }
  return cq;
}

CQState sim_view(const CircuitDesc& desc,
                 const std::vector<std::uint8_t>& c_bits,
                 const DensityMatrix& joint) {
  auto branches = enumerate_outcomes([&](RandomSource& rng) {
    RegisterState rs;
    auto ids = rs.add_state(joint);
    std::vector<int> x(ids.begin(), ids.begin() + desc.quantum_inputs);
    std::vector<int> spect(ids.begin() + desc.quantum_inputs, ids.end());
    auto f_out = evaluate_on(desc, rs, x, c_bits);
    auto bundle = simulate(rs, f_out, desc, c_bits, rng);
    auto order = bundle_wires(bundle);
    order.insert(order.end(), spect.begin(), spect.end());
    return std::make_pair(bundle_label(bundle), rs.dense(order));
  });
  CQState cq;
  for (const auto& br : branches) {
    cq.add(br.value.first, br.probability, br.value.second);
  }
  return cq;
}

void check_privacy_full(const CircuitDesc& desc,
                        const std::vector<std::uint8_t>& c_bits,
                        const DensityMatrix& joint) {
  const CQState real = real_view(desc, c_bits, joint);
  const CQState sim = sim_view(desc, c_bits, joint);
  CHECK(trace_distance(real, sim) < kTol);
}

// Conditional machinery: rebuild encode randomness from free bits plus a
// target set of published values, so large fixtures can be compared one
// published fiber at a time.

struct FreeBits {
  std::vector<std::uint8_t> bits;
  std::size_t at = 0;

  std::vector<std::uint8_t> take(std::size_t n) {
    std::vector<std::uint8_t> out(bits.begin() + static_cast<long>(at),
                                  bits.begin() + static_cast<long>(at + n));
    at += n;
    return out;
  }
  PauliKey take_key(std::size_t n) {
    auto a = take(n);
    auto b = take(n);
    return PauliKey(std::move(a), std::move(b));
  }
};

std::size_t free_bit_count(const CircuitDesc& desc,
                           const std::vector<std::uint8_t>& c_bits) {
  std::size_t n = 2 * static_cast<std::size_t>(desc.wires());
  for (std::size_t j = 0; j < desc.gates.size(); ++j) {
    n += 2 * slot_wires(desc, static_cast<int>(j)).size();
    if (slot_controlled(desc, static_cast<int>(j))) {
      n += 2 * slot_wires(desc, static_cast<int>(j)).size();
    }
  }
  (void)c_bits;
  return n;
}

EncodingRandomness build_r(const CircuitDesc& desc,
                           const std::vector<std::uint8_t>& c_bits,
                           const PublishedValues& pub, FreeBits& fb) {
  const int wires = desc.wires();
  const auto outs = desc.output_wires();
  EncodingRandomness r;
  r.m0 = fb.take_key(static_cast<std::size_t>(wires));
  for (std::size_t j = 0; j < desc.gates.size(); ++j) {
    r.m.push_back(fb.take_key(slot_wires(desc, static_cast<int>(j)).size()));
  }
  PauliKey mask = r.m0;
  for (std::size_t j = 0; j < desc.gates.size(); ++j) {
    const int jj = static_cast<int>(j);
    const auto& sw = slot_wires(desc, jj);
    const int v_ch = chosen_variant(desc, jj, c_bits);
    r.c.emplace_back(static_cast<std::size_t>(slot_variants(desc, jj)));
    r.pads.emplace_back(
        slot_controlled(desc, jj) ? 2u : 0u);
    for (int v = 0; v < slot_variants(desc, jj); ++v) {
      PauliKey pushed = mask;
      const GateKind kind = variant_kind(desc, jj, v);
      if (kind != GateKind::I) pauli_update_gate(kind, sw, pushed);
      const PauliKey lin = key_on(pushed, sw);
      auto& c_slot = r.c[j][static_cast<std::size_t>(v)];
      if (v == v_ch) {
        std::vector<std::uint8_t> row_t =
            pub.rows[j][static_cast<std::size_t>(v)];
        if (slot_controlled(desc, jj)) {
          row_t = xor_bits(row_t, pub.online_pads[j]);
          r.pads[j][static_cast<std::size_t>(v)] = pub.online_pads[j];
        }
        c_slot = PauliKey::from_bits(row_t) ^ lin ^ r.m[j];
      } else {
        c_slot = fb.take_key(sw.size());
        const PauliKey t_u = lin ^ c_slot ^ r.m[j];
        r.pads[j][static_cast<std::size_t>(v)] =
            xor_bits(pub.rows[j][static_cast<std::size_t>(v)], t_u.to_bits());
      }
    }
    for (std::size_t p = 0; p < sw.size(); ++p) {
      const auto w = static_cast<std::size_t>(sw[p]);
      mask.a[w] = r.m[j].a[p];
      mask.b[w] = r.m[j].b[p];
    }
  }
  r.anc_mask = PauliKey(static_cast<std::size_t>(desc.ancillas));
  for (int k = 0; k < desc.ancillas; ++k) {
    const auto w = static_cast<std::size_t>(desc.quantum_inputs + k);
    r.anc_mask.a[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(
        pub.kappa0[2 * w] ^ r.m0.a[w]);
    r.anc_mask.b[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(
        pub.kappa0[2 * w + 1] ^ r.m0.b[w]);
  }
  r.c_final = PauliKey(static_cast<std::size_t>(wires));
  const PauliKey rec = PauliKey::from_bits(pub.final_record);
  for (std::size_t idx = 0; idx < outs.size(); ++idx) {
    const auto w = static_cast<std::size_t>(outs[idx]);
    if (!c_final_applicable(desc, static_cast<int>(w))) continue;
    r.c_final.a[w] = static_cast<std::uint8_t>(rec.a[idx] ^ mask.a[w]);
    r.c_final.b[w] = static_cast<std::uint8_t>(rec.b[idx] ^ mask.b[w]);
  }
  return r;
}

std::string label_of_pub(const CircuitDesc& desc,
                         const std::vector<std::uint8_t>& c_bits,
                         const PublishedValues& pub) {
  RegisterState rs;
  std::vector<int> f_out;
  for (std::size_t i = 0; i < desc.output_wires().size(); ++i) {
    f_out.push_back(rs.add_qubit(DensityMatrix::maximally_mixed(1)));
  }
  RandomSource rng(0);
  return bundle_label(simulate_conditional(rs, f_out, desc, c_bits, pub, rng));
}

struct CondResult {
  DensityMatrix state;
  double weight = 0.0;
};

CondResult real_conditional(const CircuitDesc& desc,
                            const std::vector<std::uint8_t>& c_bits,
                            const DensityMatrix& joint,
                            const PublishedValues& pub) {
  const std::string target = label_of_pub(desc, c_bits, pub);
  const std::size_t free_n = free_bit_count(desc, c_bits);
  Mat acc;
  double wsum = 0.0;
  bool first = true;
  for (std::uint64_t ctr = 0; ctr < (1ull << free_n); ++ctr) {
    FreeBits fb;
    for (std::size_t i = 0; i < free_n; ++i) {
      fb.bits.push_back(static_cast<std::uint8_t>((ctr >> i) & 1u));
    }
    const EncodingRandomness r = build_r(desc, c_bits, pub, fb);
    auto branches = enumerate_outcomes([&](RandomSource& rng) {
      RegisterState rs;
      auto ids = rs.add_state(joint);
      std::vector<int> x(ids.begin(), ids.begin() + desc.quantum_inputs);
      std::vector<int> spect(ids.begin() + desc.quantum_inputs, ids.end());
      EprPool pool = make_epr_pool(rs, desc);
      auto bundle = encode(rs, desc, x, c_bits, r, pool, rng);
      auto order = bundle_wires(bundle);
      order.insert(order.end(), spect.begin(), spect.end());
      return std::make_pair(bundle_label(bundle), rs.dense(order));
    });
    for (const auto& br : branches) {
      if (br.value.first != target) continue;
      if (first) {
        acc = br.probability * br.value.second.mat();
        first = false;
      } else {
        acc += br.probability * br.value.second.mat();
      }
      wsum += br.probability;
    }
  }
  REQUIRE(wsum > 0.0);
  CondResult res;
  res.state = DensityMatrix::from_matrix(acc / wsum);
  res.weight = wsum / static_cast<double>(1ull << free_n);
  return res;
}

DensityMatrix sim_conditional_state(const CircuitDesc& desc,
                                    const std::vector<std::uint8_t>& c_bits,
                                    const DensityMatrix& joint,
                                    const PublishedValues& pub) {
  auto branches = enumerate_outcomes([&](RandomSource& rng) {
    RegisterState rs;
    auto ids = rs.add_state(joint);
    std::vector<int> x(ids.begin(), ids.begin() + desc.quantum_inputs);
    std::vector<int> spect(ids.begin() + desc.quantum_inputs, ids.end());
    auto f_out = evaluate_on(desc, rs, x, c_bits);
    auto bundle = simulate_conditional(rs, f_out, desc, c_bits, pub, rng);
    auto order = bundle_wires(bundle);
    order.insert(order.end(), spect.begin(), spect.end());
    return rs.dense(order);
  });
  Mat acc;
  bool first = true;
  for (const auto& br : branches) {
    if (first) {
      acc = br.probability * br.value.mat();
      first = false;
    } else {
      acc += br.probability * br.value.mat();
    }
  }
  return DensityMatrix::from_matrix(std::move(acc));
}

double check_privacy_conditional(const CircuitDesc& desc,
                                 const std::vector<std::uint8_t>& c_bits,
                                 const DensityMatrix& joint,
                                 std::uint64_t pub_seed) {
  RandomSource pub_src(pub_seed);
  const PublishedValues pub = sample_published(desc, pub_src);
  const CondResult real = real_conditional(desc, c_bits, joint, pub);
  const DensityMatrix sim = sim_conditional_state(desc, c_bits, joint, pub);
  CHECK(trace_distance(real.state, sim) < kTol);
  return real.weight;
}

// --- Tests -----------------------------------------------------------------

TEST_CASE("offline EPR pair counts follow the gadget layout") {
  CHECK(offline_epr_count(topology_of(fix_identity())) == 0);
  CHECK(offline_epr_count(topology_of(fix_h())) == 1);
  CHECK(offline_epr_count(topology_of(fix_controlled_x())) == 2);
  // H:1 + CNOT:2 + P:1 + controlled SWAP: 2 variants x 2 pairs = 4.
  CHECK(offline_epr_count(topology_of(fix_four_gates())) == 8);
}

TEST_CASE("garbling rejects non-Clifford circuits and bad shapes") {
  CircuitDesc with_t;
  with_t.quantum_inputs = 1;
  with_t.gates = {{GateKind::T, {0}, -1}};
  CHECK_THROWS_AS(garble_check(with_t), std::invalid_argument);

  RegisterState rs;
  RandomSource rng(1);
  const CircuitDesc desc = fix_h();
  EprPool pool = make_epr_pool(rs, desc);
  const EncodingRandomness r = sample_randomness(desc, rng);
  const int x = rs.add_qubit(DensityMatrix::zero());
  CHECK_THROWS_AS(encode(rs, desc, {x, x}, {}, r, pool, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(encode(rs, desc, {x}, {1}, r, pool, rng),
                  std::invalid_argument);
}

TEST_CASE("round-trip identity: no gates, state passes through") {
  RandomSource rng(2);
  check_correct_fixed_r(fix_identity(), {}, qfe::test::random_state(1, rng),
                        11);
}

TEST_CASE("round-trip: single H, including full randomness enumeration") {
  // Frozen randomness, every Bell branch.
  RandomSource rng(3);
  check_correct_fixed_r(fix_h(), {}, qfe::test::random_state(1, rng), 12);

  // Full enumeration including the randomness draw: every branch decodes to
  // H(rho).
  const CircuitDesc desc = fix_h();
  const DensityMatrix rho = qfe::test::random_state(1, rng);
  const DensityMatrix expect = expected_output(desc, {}, rho);
  auto branches = enumerate_outcomes([&](RandomSource& r2) {
    RegisterState rs;
    auto ids = rs.add_state(rho);
    EprPool pool = make_epr_pool(rs, desc);
    const EncodingRandomness r = sample_randomness(desc, r2);
    auto bundle = encode(rs, desc, ids, {}, r, pool, r2);
    auto out = decode(rs, bundle, desc, r2);
    return rs.dense(out);
  });
  for (const auto& br : branches) {
    REQUIRE(trace_distance(br.value, expect) < kTol);
  }
}

TEST_CASE("round-trip: X-gate circuit maps |0> to |1>") {
  CircuitDesc c;
  c.quantum_inputs = 1;
  c.gates = {{GateKind::X, {0}, -1}};
  RandomSource rng(4);
  const EncodingRandomness r = sample_randomness(c, rng);
  auto branches = enumerate_outcomes([&](RandomSource& r2) {
    RegisterState rs;
    const int x = rs.add_qubit(DensityMatrix::zero());
    EprPool pool = make_epr_pool(rs, c);
    auto bundle = encode(rs, c, {x}, {}, r, pool, r2);
    auto out = decode(rs, bundle, c, r2);
    return rs.dense(out);
  });
  for (const auto& br : branches) {
    REQUIRE(trace_distance(br.value, DensityMatrix::one()) < kTol);
  }
}

TEST_CASE("round-trip: entangled input, H on the encoded half") {
  // Joint (decode output, spectator) must equal (H (x) I) applied to the
  // EPR pair, exactly, on every branch.
  const DensityMatrix joint = epr_pair();
  const CircuitDesc desc = fix_h();
  const DensityMatrix expect = expected_output(desc, {}, joint);
  const Mat hi = linalg::kron(gate_matrix(GateKind::H), Mat::Identity(2, 2));
  CHECK((expect.mat() - (hi * epr_pair().mat() * hi.adjoint()))
            .cwiseAbs()
            .maxCoeff() < kTol);
  check_correct_fixed_r(desc, {}, joint, 13);
}

TEST_CASE("round-trip: controlled gate follows its bit") {
  const CircuitDesc desc = fix_controlled_x();
  RandomSource rng(5);
  const DensityMatrix rho = qfe::test::random_state(1, rng);
  check_correct_fixed_r(desc, {0}, rho, 14);
  check_correct_fixed_r(desc, {1}, rho, 15);
}

TEST_CASE("round-trip: trace-out of one EPR half leaves I/2 exactly") {
  check_correct_fixed_r(fix_h_traced(), {}, epr_pair(), 16);
}

TEST_CASE("round-trip: CNOT with entangled spectator") {
  RandomSource rng(6);
  const DensityMatrix joint = qfe::test::random_state(3, rng);
  check_correct_fixed_r(fix_cnot(), {}, joint, 17);
}

TEST_CASE("round-trip: ancilla plus trace-out fixture") {
  RandomSource rng(7);
  check_correct_fixed_r(fix_ancilla(), {}, qfe::test::random_state(1, rng),
                        18);
}

TEST_CASE("round-trip: controlled-H then X, both settings") {
  RandomSource rng(8);
  const DensityMatrix rho = qfe::test::random_state(1, rng);
  check_correct_fixed_r(fix_controlled_h_then_x(), {0}, rho, 19);
  check_correct_fixed_r(fix_controlled_h_then_x(), {1}, rho, 20);
}

TEST_CASE("round-trip: four-gate fixture, both control settings") {
  RandomSource rng(9);
  const DensityMatrix rho = qfe::test::random_state(2, rng);
  check_correct_fixed_r(fix_four_gates(), {0}, rho, 21);
  check_correct_fixed_r(fix_four_gates(), {1}, rho, 22);
}

TEST_CASE("decode recovers the simulator's output state") {
  // Consistency: bundles built by the simulator decode to exactly the
  // state handed to the simulator.
  for (auto& [desc, bits] :
       std::vector<std::pair<CircuitDesc, std::vector<std::uint8_t>>>{
           {fix_cnot(), {}},
           {fix_controlled_h_then_x(), {1}},
           {fix_ancilla(), {}}}) {
    RandomSource pub_src(23);
    const PublishedValues pub = sample_published(desc, pub_src);
    RandomSource in_src(24);
    const DensityMatrix joint =
        qfe::test::random_state(desc.quantum_inputs, in_src);
    const DensityMatrix expect = expected_output(desc, bits, joint);
    auto branches = enumerate_outcomes([&](RandomSource& rng) {
      RegisterState rs;
      auto ids = rs.add_state(joint);
      auto f_out = evaluate_on(desc, rs, ids, bits);
      auto bundle = simulate_conditional(rs, f_out, desc, bits, pub, rng);
      auto out = decode(rs, bundle, desc, rng);
      return rs.dense(out);
    });
    for (const auto& br : branches) {
      REQUIRE(trace_distance(br.value, expect) < kTol);
    }
  }
}

TEST_CASE("privacy: single-H bundle ensemble equals the simulation") {
  RandomSource rng(25);
  check_privacy_full(fix_h(), {}, qfe::test::random_state(1, rng));
}

TEST_CASE("privacy: entangled spectator rides along unchanged") {
  check_privacy_full(fix_h(), {}, epr_pair());
}

TEST_CASE("privacy: controlled-X bundle, both bit values") {
  RandomSource rng(26);
  const DensityMatrix rho = qfe::test::random_state(1, rng);
  check_privacy_full(fix_controlled_x(), {0}, rho);
  check_privacy_full(fix_controlled_x(), {1}, rho);
}

TEST_CASE("privacy: two-gate chain H then P") {
  RandomSource rng(27);
  check_privacy_full(fix_hp(), {}, qfe::test::random_state(1, rng));
}

TEST_CASE("privacy: non-invertible circuit (trace-out), entangled input") {
  check_privacy_full(fix_h_traced(), {}, epr_pair());
}

TEST_CASE("privacy: empty circuit (simulator pads with the output itself)") {
  RandomSource rng(28);
  check_privacy_full(fix_identity(), {}, qfe::test::random_state(1, rng));
}

TEST_CASE("privacy: CNOT fixture, conditioned on published fibers") {
  RandomSource rng(29);
  const DensityMatrix joint = qfe::test::random_state(3, rng);  // +spectator
  const double w1 = check_privacy_conditional(fix_cnot(), {}, joint, 30);
  const double w2 = check_privacy_conditional(fix_cnot(), {}, joint, 31);
  const double w3 = check_privacy_conditional(fix_cnot(), {}, joint, 32);
  // Every published fiber carries the same probability mass: uniformity.
  CHECK(w1 == Catch::Approx(w2).margin(1e-12));
  CHECK(w2 == Catch::Approx(w3).margin(1e-12));
}

TEST_CASE("privacy: ancilla/trace fixture, conditioned on published fibers") {
  RandomSource rng(33);
  const DensityMatrix joint = qfe::test::random_state(2, rng);  // +spectator
  check_privacy_conditional(fix_ancilla(), {}, joint, 34);
  check_privacy_conditional(fix_ancilla(), {}, joint, 35);
}

TEST_CASE("privacy: controlled-H then X, conditioned on published fibers") {
  RandomSource rng(36);
  const DensityMatrix rho = qfe::test::random_state(1, rng);
  check_privacy_conditional(fix_controlled_h_then_x(), {0}, rho, 37);
  check_privacy_conditional(fix_controlled_h_then_x(), {1}, rho, 38);
}

TEST_CASE("published strings are exactly jointly uniform") {
  RandomSource rng(39);
  const CQState real = real_view(fix_h(), {}, qfe::test::random_state(1, rng));
  // kappa (2 bits), one offset row (2), final record (2): 64 labels, each
  // carrying exactly 1/64 of the mass.
  REQUIRE(real.blocks().size() == 64);
  for (const auto& [label, block] : real.blocks()) {
    CHECK(block.weight == Catch::Approx(1.0 / 64.0).margin(1e-12));
  }
}

TEST_CASE("encode emits a faithful dependency manifest") {
  const CircuitDesc desc = fix_four_gates();
  RegisterState rs;
  RandomSource rng(40);
  auto ids = rs.add_state(DensityMatrix::maximally_mixed(2));
  EprPool pool = make_epr_pool(rs, desc);
  const EncodingRandomness r = sample_randomness(desc, rng);
  auto bundle = encode(rs, desc, ids, {1}, r, pool, rng);

  REQUIRE(bundle.manifest.online_quantum.size() == 2);
  CHECK(bundle.manifest.online_quantum[0] ==
        std::vector<std::string>{"x[0]", "e2[0]", "m0[0]"});
  CHECK(bundle.manifest.online_quantum[1] ==
        std::vector<std::string>{"x[1]", "e2[1]", "m0[1]"});

  REQUIRE(bundle.manifest.online_classical.size() == 1);
  const auto& cdeps = bundle.manifest.online_classical[0];
  CHECK(std::find(cdeps.begin(), cdeps.end(), "c_bits[0]") != cdeps.end());
  CHECK(std::find(cdeps.begin(), cdeps.end(), "pad[3][1]") != cdeps.end());
  for (const auto& dep : cdeps) {
    CHECK((dep == "c_bits[0]" || dep.rfind("pad[3]", 0) == 0));
  }
  for (const auto& dep : bundle.manifest.offline) {
    CHECK(dep.rfind("x[", 0) != 0);
    CHECK(dep.rfind("c_bits[", 0) != 0);
  }
}

TEST_CASE("decode rejects corrupt bundles") {
  const CircuitDesc desc = fix_controlled_x();
  RandomSource rng(41);

  auto make_bundle = [&](RegisterState& rs) {
    const int x = rs.add_qubit(DensityMatrix::zero());
    EprPool pool = make_epr_pool(rs, desc);
    const EncodingRandomness r = sample_randomness(desc, rng);
    return encode(rs, desc, {x}, {1}, r, pool, rng);
  };

  SECTION("missing online classical piece") {
    RegisterState rs;
    auto bundle = make_bundle(rs);
    bundle.online_c.clear();
    CHECK_THROWS_AS(decode(rs, bundle, desc, rng), std::invalid_argument);
  }
  SECTION("row pad width mismatch") {
    RegisterState rs;
    auto bundle = make_bundle(rs);
    bundle.online_c[0].pads[0].second.pop_back();
    CHECK_THROWS_AS(decode(rs, bundle, desc, rng), std::invalid_argument);
  }
  SECTION("final record width mismatch") {
    RegisterState rs;
    auto bundle = make_bundle(rs);
    bundle.offline.final_record.pop_back();
    CHECK_THROWS_AS(decode(rs, bundle, desc, rng), std::invalid_argument);
  }
}

TEST_CASE("simulator checks published-value shapes") {
  const CircuitDesc desc = fix_h();
  RandomSource rng(42);
  PublishedValues pub;
  pub.kappa0 = {0, 0};
  pub.rows = {{{0, 0}}};
  pub.online_pads = {{}};
  pub.final_record = {0};  // wrong width
  RegisterState rs;
  const int f = rs.add_qubit(DensityMatrix::zero());
  CHECK_THROWS_AS(simulate_conditional(rs, {f}, desc, {}, pub, rng),
                  std::invalid_argument);
}

}  // namespace
