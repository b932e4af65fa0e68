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

namespace qfe {

/**
 * Central numeric-tolerance policy.
 *
 * Every equality assertion in the library and its test suite goes through one
 * of these two knobs; nothing hard-codes its own epsilon.
 *
 *  - `algebraic` guards identities that are exact up to floating-point
 *    round-off (trace preservation, Pauli involutions, XOR bookkeeping).
 *  - `eigen` guards quantities that pass through an eigensolver (trace
 *    distance, PSD checks), which accumulate slightly more error.
 */
struct Tolerances {
  double algebraic = 1e-9;
  double eigen = 1e-8;
};

inline const Tolerances& default_tols() {
  static const Tolerances tols{};
  return tols;
}

namespace detail {
inline int& max_qubits_slot() {
  static int cap = 12;
  return cap;
}
}  // namespace detail

/** Largest joint system (in qubits) any dense matrix is allowed to reach. */
inline int max_qubits() { return detail::max_qubits_slot(); }

/** Reconfigure the dense-size cap. Intended to be set once at startup. */
inline void set_max_qubits(int cap) { detail::max_qubits_slot() = cap; }

}  // namespace qfe
