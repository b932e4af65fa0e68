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

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qfe/core/density_matrix.hpp"
#include "qfe/core/gates.hpp"
#include "qfe/core/linalg.hpp"
#include "qfe/core/ops.hpp"
#include "qfe/core/pauli.hpp"
#include "qfe/core/random.hpp"

namespace qfe {

/**
 * A register of qubits held as a tensor product of small dense factors.
 *
 * Protocol states routinely span 15-20 wires (EPR pools, gadget registers,
 * padded payloads), far past any dense 2^n budget — but every physical
 * operation touches only a few wires at a time, and independence is the norm.
 * RegisterState tracks the product structure explicitly: factors are merged
 * lazily when an operation genuinely entangles them, and an operation whose
 * merged support would exceed the qubit cap throws instead of thrashing.
 *
 * Wires carry stable integer ids for their lifetime.  Measurements are
 * destructive reads: the measured wire leaves the register and the
 * post-measurement state is renormalized, with the branch probability
 * reported through RandomSource::choose — so the same protocol code serves
 * both seeded sampling and exact branch enumeration (enumerate.hpp).
 *
 * A RegisterState with all wires merged into one factor is exactly a dense
 * DensityMatrix, which is how the dense wrappers below are implemented.
 */
class RegisterState {
 public:
  RegisterState() = default;

  /** Append a (possibly multi-wire, possibly entangled) state; returns ids. */
  std::vector<int> add_state(const DensityMatrix& state) {
    std::vector<int> ids;
    for (int i = 0; i < state.qubits(); ++i) ids.push_back(next_wire_++);
    if (state.qubits() > 0) {
      factors_.push_back(Factor{ids, state.mat()});
    }
    return ids;
  }

  int add_qubit(const DensityMatrix& q) {
    if (q.qubits() != 1) throw std::invalid_argument("add_qubit: width != 1");
    return add_state(q)[0];
  }

  /** Classical bits as computational-basis wires, one factor each. */
  std::vector<int> add_bits(const std::vector<std::uint8_t>& bits) {
    std::vector<int> ids;
    for (auto b : bits) {
      ids.push_back(add_qubit(b != 0 ? DensityMatrix::one()
                                     : DensityMatrix::zero()));
    }
    return ids;
  }

  /** k fresh EPR pairs; returns 2k ids, pair i at (out[2i], out[2i+1]). */
  std::vector<int> add_epr_pairs(int k) {
    std::vector<int> ids;
    for (int i = 0; i < k; ++i) {
      auto pair = add_state(epr_pair());
      ids.push_back(pair[0]);
      ids.push_back(pair[1]);
    }
    return ids;
  }

  int num_wires() const {
    int n = 0;
    for (const auto& f : factors_) n += static_cast<int>(f.wires.size());
    return n;
  }

  bool has_wire(int id) const { return find_factor(id) >= 0; }

  std::vector<int> wires() const {
    std::vector<int> out;
    for (const auto& f : factors_) {
      out.insert(out.end(), f.wires.begin(), f.wires.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  void apply_unitary(const Mat& u, const std::vector<int>& ws) {
    const int f = merge_for(ws);
    linalg::apply_unitary_inplace(factors_[f].m,
                                  static_cast<int>(factors_[f].wires.size()),
                                  u, positions_in(f, ws));
  }

  void apply_gate(GateKind k, const std::vector<int>& ws) {
    if (static_cast<int>(ws.size()) != gate_arity(k)) {
      throw std::invalid_argument("apply_gate: wrong wire count");
    }
    apply_unitary(gate_matrix(k), ws);
  }

  /** X^a Z^b on a single wire. */
  void apply_pauli_bit(int wire, int a, int b) {
    if (a == 0 && b == 0) return;
    apply_unitary(pauli_xz_matrix(a, b), {wire});
  }

  void apply_qotp(const PauliKey& key, const std::vector<int>& ws) {
    if (key.size() != ws.size()) {
      throw std::invalid_argument("apply_qotp: key/wire count mismatch");
    }
    for (std::size_t i = 0; i < ws.size(); ++i) {
      apply_pauli_bit(ws[i], key.a[i], key.b[i]);
    }
  }

  /**
   * Destructive computational measurement.  The outcome is drawn through
   * rng.choose (hence interceptable); the wire is removed from the register.
   */
  int measure(int wire, RandomSource& rng) {
    const int f = require_factor(wire);
    const int n = static_cast<int>(factors_[f].wires.size());
    const int pos = positions_in(f, {wire})[0];
    const Mat m0 = linalg::project_bit(factors_[f].m, n, pos, 0);
    const Mat m1 = linalg::project_bit(factors_[f].m, n, pos, 1);
    double p0 = m0.trace().real();
    double p1 = m1.trace().real();
    p0 = std::max(p0, 0.0);
    p1 = std::max(p1, 0.0);
    const double total = p0 + p1;
    const int bit =
        static_cast<int>(rng.choose({p0 / total, p1 / total}));
    const Mat& sel = bit == 0 ? m0 : m1;
    const double p = bit == 0 ? p0 : p1;
    replace_factor(f, erase_wire(factors_[f].wires, wire),
                   sel / std::max(p, 1e-300));
    return bit;
  }

  std::vector<std::uint8_t> measure_bits(const std::vector<int>& ws,
                                         RandomSource& rng) {
    std::vector<std::uint8_t> out;
    for (int w : ws) out.push_back(static_cast<std::uint8_t>(measure(w, rng)));
    return out;
  }

  /**
   * Destructive Bell measurement of (w1, w2); outcome (a, b) means the pair
   * was projected onto (Z^b X^a ⊗ I)|Phi+>.  If w2 was half of an EPR pair
   * whose partner is elsewhere in the register, the partner is left holding
   * X^a Z^b applied to whatever state w1 carried.
   */
  std::pair<int, int> bell_measure(int w1, int w2, RandomSource& rng) {
    apply_gate(GateKind::CNOT, {w1, w2});
    apply_gate(GateKind::H, {w1});
    const int b = measure(w1, rng);
    const int a = measure(w2, rng);
    return {a, b};
  }

  /**
   * Teleport payload wire i through EPR half halves[i] (pairwise Bell
   * measurements; all 2k measured wires are consumed).  Returns the
   * correction key: the partner of halves[i] now holds X^{a_i} Z^{b_i}
   * applied to the old payload state.  No correction is applied here — in
   * the protocols the key itself is the secret being managed.
   */
  PauliKey teleport(const std::vector<int>& payload,
                    const std::vector<int>& halves, RandomSource& rng) {
    if (payload.size() != halves.size()) {
      throw std::invalid_argument("teleport: payload/halves length mismatch");
    }
    PauliKey key(payload.size());
    for (std::size_t i = 0; i < payload.size(); ++i) {
      auto [a, b] = bell_measure(payload[i], halves[i], rng);
      key.a[i] = static_cast<std::uint8_t>(a);
      key.b[i] = static_cast<std::uint8_t>(b);
    }
    return key;
  }

  void trace_out(const std::vector<int>& ws) {
    for (int w : ws) {
      const int f = require_factor(w);
      const int n = static_cast<int>(factors_[f].wires.size());
      const int pos = positions_in(f, {w})[0];
      replace_factor(f, erase_wire(factors_[f].wires, w),
                     linalg::partial_trace(factors_[f].m, n, {pos}));
    }
  }

  /** Reduced state over `order` (everything else traced out). */
  DensityMatrix dense(const std::vector<int>& order) const {
    RegisterState copy = *this;
    std::vector<int> involved;  // factor indices touching the request
    for (int w : order) copy.require_factor(w);
    const int f = copy.merge_for(order);
    // Trace out unrequested wires living in the merged factor.
    std::vector<int> extra;
    for (int w : copy.factors_[f].wires) {
      if (std::find(order.begin(), order.end(), w) == order.end()) {
        extra.push_back(w);
      }
    }
    copy.trace_out(extra);
    const auto& fac = copy.factors_[copy.require_factor(order[0])];
    // Permute so position p carries order[p].
    std::vector<int> perm;
    for (int w : order) {
      perm.push_back(copy.positions_in(copy.require_factor(w), {w})[0]);
    }
    return DensityMatrix::from_matrix(linalg::permute_wires(
        fac.m, static_cast<int>(fac.wires.size()), perm));
  }

  /** Joint state over every live wire, ascending id order. */
  DensityMatrix dense_all() const { return dense(wires()); }

  /** Current partition into independent factors (for structure tests). */
  std::vector<std::vector<int>> factor_partition() const {
    std::vector<std::vector<int>> out;
    for (const auto& f : factors_) out.push_back(f.wires);
    return out;
  }

 private:
  struct Factor {
    std::vector<int> wires;  // global ids in tensor position order
    Mat m;
  };

  int find_factor(int wire) const {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const auto& ws = factors_[i].wires;
      if (std::find(ws.begin(), ws.end(), wire) != ws.end()) {
        return static_cast<int>(i);
      }
    }
    return -1;
  }

  int require_factor(int wire) const {
    const int f = find_factor(wire);
    if (f < 0) throw std::invalid_argument("unknown or consumed wire id");
    return f;
  }

  std::vector<int> positions_in(int f, const std::vector<int>& ws) const {
    std::vector<int> out;
    for (int w : ws) {
      const auto& fw = factors_[f].wires;
      auto it = std::find(fw.begin(), fw.end(), w);
      if (it == fw.end()) throw std::logic_error("wire not in factor");
      out.push_back(static_cast<int>(it - fw.begin()));
    }
    return out;
  }

  /** Merge all factors containing `ws` into one; returns its index. */
  int merge_for(const std::vector<int>& ws) {
    std::vector<int> involved;
    for (int w : ws) {
      const int f = require_factor(w);
      if (std::find(involved.begin(), involved.end(), f) == involved.end()) {
        involved.push_back(f);
      }
    }
    if (involved.size() == 1) return involved[0];
    std::sort(involved.begin(), involved.end());
    int width = 0;
    for (int f : involved) width += static_cast<int>(factors_[f].wires.size());
    if (width > max_qubits()) {
      throw std::runtime_error(
          "RegisterState: merge would exceed the qubit cap");
    }
    Factor merged;
    merged.m = Mat::Ones(1, 1);
    for (int f : involved) {
      merged.wires.insert(merged.wires.end(), factors_[f].wires.begin(),
                          factors_[f].wires.end());
      merged.m = linalg::kron(merged.m, factors_[f].m);
    }
    for (auto it = involved.rbegin(); it != involved.rend(); ++it) {
      factors_.erase(factors_.begin() + *it);
    }
    factors_.push_back(std::move(merged));
    return static_cast<int>(factors_.size()) - 1;
  }

  static std::vector<int> erase_wire(std::vector<int> ws, int w) {
    ws.erase(std::find(ws.begin(), ws.end(), w));
    return ws;
  }

  void replace_factor(int f, std::vector<int> wires, Mat m) {
    if (wires.empty()) {
      factors_.erase(factors_.begin() + f);
      return;
    }
    factors_[f].wires = std::move(wires);
    factors_[f].m = std::move(m);
  }

  std::vector<Factor> factors_;
  int next_wire_ = 0;
};

// ---------------------------------------------------------------------------
// Dense single-state wrappers around the register machinery.
// ---------------------------------------------------------------------------

struct MeasureOutcome {
  int bit;
  double prob;
  DensityMatrix post;  // measured wire removed
};

struct BellOutcome {
  int a;
  int b;
  double prob;
  DensityMatrix post;  // both measured wires removed
};

struct TeleportResult {
  PauliKey key;
  DensityMatrix post;
};

namespace detail {
inline std::pair<RegisterState, std::vector<int>> to_register(
    const DensityMatrix& rho) {
  RegisterState rs;
  auto ids = rs.add_state(rho);
  return {std::move(rs), std::move(ids)};
}

inline DensityMatrix dense_without(const RegisterState& rs,
                                   const std::vector<int>& all,
                                   const std::vector<int>& gone) {
  std::vector<int> order;
  for (int w : all) {
    if (std::find(gone.begin(), gone.end(), w) == gone.end()) {
      order.push_back(w);
    }
  }
  if (order.empty()) return DensityMatrix();
  return rs.dense(order);
}
}  // namespace detail

/** Sampled computational measurement of one wire. */
inline MeasureOutcome measure_computational(const DensityMatrix& rho, int wire,
                                            RandomSource& rng) {
  const Mat m0 = linalg::project_bit(rho.mat(), rho.qubits(), wire, 0);
  const Mat m1 = linalg::project_bit(rho.mat(), rho.qubits(), wire, 1);
  const double p0 = std::max(m0.trace().real(), 0.0);
  const double p1 = std::max(m1.trace().real(), 0.0);
  const int bit = static_cast<int>(rng.choose({p0 / (p0 + p1), p1 / (p0 + p1)}));
  const Mat& sel = bit == 0 ? m0 : m1;
  const double p = bit == 0 ? p0 : p1;
  return {bit, p,
          DensityMatrix::from_matrix(sel / std::max(p, 1e-300))};
}

/** Enumerated twin: both outcomes with exact probabilities. */
inline std::vector<MeasureOutcome> measure_computational_all(
    const DensityMatrix& rho, int wire) {
  std::vector<MeasureOutcome> out;
  for (int bit = 0; bit < 2; ++bit) {
    Mat m = linalg::project_bit(rho.mat(), rho.qubits(), wire, bit);
    const double p = std::max(m.trace().real(), 0.0);
    if (p > 1e-300) m /= p;
    out.push_back({bit, p, DensityMatrix::from_matrix(std::move(m))});
  }
  return out;
}

/** Sampled Bell measurement of a wire pair. */
inline BellOutcome bell_measure(const DensityMatrix& rho, int w1, int w2,
                                RandomSource& rng) {
  auto [rs, ids] = detail::to_register(rho);
  auto [a, b] = rs.bell_measure(ids[w1], ids[w2], rng);
  // Probability of the realized outcome, recomputed from the projector.
  Mat proj = bell_projector(a, b);
  const double p =
      (apply_unitary(rho, proj, {w1, w2})).mat().trace().real();
  return {a, b, std::max(p, 0.0),
          detail::dense_without(rs, ids, {ids[w1], ids[w2]})};
}

/** Enumerated twin: all four Bell outcomes with exact probabilities. */
inline std::vector<BellOutcome> bell_measure_all(const DensityMatrix& rho,
                                                 int w1, int w2) {
  std::vector<BellOutcome> out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      DensityMatrix projected = apply_unitary(rho, bell_projector(a, b),
                                              {w1, w2});
      const double p = std::max(projected.mat().trace().real(), 0.0);
      Mat reduced =
          linalg::partial_trace(projected.mat(), rho.qubits(), {w1, w2});
      if (p > 1e-300) reduced /= p;
      out.push_back({a, b, p, DensityMatrix::from_matrix(std::move(reduced))});
    }
  }
  return out;
}

/**
 * Teleport the payload wires through the listed EPR halves.  Partner wires
 * (wherever they live in rho) end up holding X^a Z^b of the payload; the
 * caller applies corrections, typically after learning the key through a
 * protocol.  Zero-length payloads are legal: empty key, state unchanged.
 */
inline TeleportResult teleport(const DensityMatrix& rho,
                               const std::vector<int>& payload,
                               const std::vector<int>& halves,
                               RandomSource& rng) {
  auto [rs, ids] = detail::to_register(rho);
  std::vector<int> p_ids, h_ids, gone;
  for (int w : payload) p_ids.push_back(ids[w]);
  for (int w : halves) h_ids.push_back(ids[w]);
  PauliKey key = rs.teleport(p_ids, h_ids, rng);
  gone = p_ids;
  gone.insert(gone.end(), h_ids.begin(), h_ids.end());
  return {std::move(key), detail::dense_without(rs, ids, gone)};
}

}  // namespace qfe
