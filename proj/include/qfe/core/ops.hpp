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

#include <cmath>
#include <vector>

#include "qfe/core/density_matrix.hpp"
#include "qfe/core/gates.hpp"
#include "qfe/core/linalg.hpp"
#include "qfe/core/pauli.hpp"
#include "qfe/core/random.hpp"
#include "qfe/core/tolerances.hpp"

namespace qfe {

/** Tensor product; wires of `a` come first. */
inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.qubits() + b.qubits() > max_qubits()) {
    throw std::invalid_argument("tensor: result exceeds the qubit cap");
  }
  return DensityMatrix::from_matrix(linalg::kron(a.mat(), b.mat()));
}

/** Trace out the listed wires; the rest keep their relative order. */
inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   const std::vector<int>& discard) {
  return DensityMatrix::from_matrix(
      linalg::partial_trace(rho.mat(), rho.qubits(), discard));
}

/** Trace down to exactly the listed wires (in their current order). */
inline DensityMatrix partial_trace_keep(const DensityMatrix& rho,
                                        const std::vector<int>& keep) {
  return partial_trace(rho,
                       linalg::complement_positions(rho.qubits(), keep));
}

inline DensityMatrix apply_unitary(const DensityMatrix& rho, const Mat& u,
                                   const std::vector<int>& wires) {
  Mat m = rho.mat();
  linalg::apply_unitary_inplace(m, rho.qubits(), u, wires);
  return DensityMatrix::from_matrix(std::move(m));
}

inline DensityMatrix apply_gate(const DensityMatrix& rho, GateKind k,
                                const std::vector<int>& wires) {
  if (static_cast<int>(wires.size()) != gate_arity(k)) {
    throw std::invalid_argument("apply_gate: wrong wire count");
  }
  return apply_unitary(rho, gate_matrix(k), wires);
}

/**
 * Quantum one-time pad: conjugate wire i by X^{a_i} Z^{b_i}.  Applying the
 * same key twice is the identity (the pad is its own inverse on density
 * matrices, phases cancelling).
 */
inline DensityMatrix qotp_apply(const DensityMatrix& rho, const PauliKey& key,
                                const std::vector<int>& wires) {
  if (key.size() != wires.size()) {
    throw std::invalid_argument("qotp_apply: key/wire count mismatch");
  }
  Mat m = rho.mat();
  for (std::size_t i = 0; i < wires.size(); ++i) {
    if (key.a[i] == 0 && key.b[i] == 0) continue;
    linalg::apply_unitary_inplace(m, rho.qubits(),
                                  pauli_xz_matrix(key.a[i], key.b[i]),
                                  {wires[i]});
  }
  return DensityMatrix::from_matrix(std::move(m));
}

inline DensityMatrix qotp_apply(const DensityMatrix& rho, const PauliKey& key) {
  std::vector<int> wires(static_cast<std::size_t>(rho.qubits()));
  for (std::size_t i = 0; i < wires.size(); ++i) wires[i] = static_cast<int>(i);
  return qotp_apply(rho, key, wires);
}

/** |Phi+> = (|00> + |11>)/sqrt(2) on two wires. */
inline DensityMatrix epr_pair() {
  Vec v = Vec::Zero(4);
  v(0) = v(3) = 0.7071067811865475244;
  return DensityMatrix::pure(v);
}

/**
 * k EPR pairs; pair i occupies wires (2i, 2i+1) = (A_i, B_i).  The
 * interleaved A,B layout is the documented convention everywhere a pool of
 * pairs is created.
 */
inline DensityMatrix make_epr(int k) {
  DensityMatrix out;  // zero-qubit identity
  for (int i = 0; i < k; ++i) out = tensor(out, epr_pair());
  return out;
}

/** T(rho, sigma) = 0.5 || rho - sigma ||_1 for equal-width states. */
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return linalg::trace_distance_mats(a.mat(), b.mat());
}

/** Bell state (Z^b X^a tensor I)|Phi+>; the outcome-(a,b) measurement vector. */
inline Vec bell_vector(int a, int b) {
  Vec v = Vec::Zero(4);
  v(0) = v(3) = 0.7071067811865475244;
  Mat op = pauli_xz_matrix(a, b);
  Mat full = linalg::kron(op, Mat::Identity(2, 2));
  return full * v;
}

/** Rank-1 projector onto bell_vector(a, b). */
inline Mat bell_projector(int a, int b) {
  Vec v = bell_vector(a, b);
  return v * v.adjoint();
}

/** Haar-ish random n-qubit unitary (QR of a complex Gaussian matrix). */
inline Mat random_unitary(int qubits, RandomSource& rng) {
  const auto d = static_cast<Eigen::Index>(linalg::dim_of(qubits));
  Mat g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      // Box-Muller from the portable uniform stream.
      const double u1 = std::max(rng.real(), 1e-300);
      const double u2 = rng.real();
      const double r = std::sqrt(-2.0 * std::log(u1));
      g(i, j) = Cplx(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
    }
  }
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  // Fix the phase ambiguity so the result is reproducible.
  Mat rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    Cplx diag = rmat(i, i);
    if (std::abs(diag) > 0) q.col(i) *= diag / std::abs(diag);
  }
  return q;
}

}  // namespace qfe
