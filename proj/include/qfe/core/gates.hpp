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

#include <stdexcept>
#include <string>

#include "qfe/core/linalg.hpp"

namespace qfe {

/**
 * The library's gate alphabet: the Clifford generators used by every
 * protocol layer, plus T.  T is representable in circuit descriptions but
 * rejected by the Pauli-frame tracker and the garbler, whose Clifford-only
 * domain is part of their contract.
 */
enum class GateKind { I, X, Z, H, P, T, CNOT, SWAP };

inline int gate_arity(GateKind k) {
  switch (k) {
    case GateKind::CNOT:
    case GateKind::SWAP:
      return 2;
    default:
      return 1;
  }
}

inline bool gate_is_clifford(GateKind k) { return k != GateKind::T; }

inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::I: return "I";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::P: return "P";
    case GateKind::T: return "T";
    case GateKind::CNOT: return "CNOT";
    case GateKind::SWAP: return "SWAP";
  }
  throw std::logic_error("unknown gate kind");
}

inline GateKind gate_from_name(const std::string& name) {
  if (name == "I") return GateKind::I;
  if (name == "X") return GateKind::X;
  if (name == "Z") return GateKind::Z;
  if (name == "H") return GateKind::H;
  if (name == "P") return GateKind::P;
  if (name == "T") return GateKind::T;
  if (name == "CNOT") return GateKind::CNOT;
  if (name == "SWAP") return GateKind::SWAP;
  throw std::invalid_argument("unknown gate name: " + name);
}

/** Unitary matrix of a gate; CNOT is (control, target) = (wire 0, wire 1). */
inline Mat gate_matrix(GateKind k) {
  using namespace std::complex_literals;
  const double s = 0.7071067811865475244;  // 1/sqrt(2)
  switch (k) {
    case GateKind::I:
      return Mat::Identity(2, 2);
    case GateKind::X: {
      Mat m(2, 2);
      m << 0, 1, 1, 0;
      return m;
    }
    case GateKind::Z: {
      Mat m(2, 2);
      m << 1, 0, 0, -1;
      return m;
    }
    case GateKind::H: {
      Mat m(2, 2);
      m << s, s, s, -s;
      return m;
    }
    case GateKind::P: {
      Mat m = Mat::Zero(2, 2);
      m(0, 0) = 1.0;
      m(1, 1) = 1i;
      return m;
    }
    case GateKind::T: {
      Mat m = Mat::Zero(2, 2);
      m(0, 0) = 1.0;
      m(1, 1) = std::exp(1i * (3.14159265358979323846 / 4.0));
      return m;
    }
    case GateKind::CNOT: {
      Mat m = Mat::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
      return m;
    }
    case GateKind::SWAP: {
      Mat m = Mat::Zero(4, 4);
      m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
      return m;
    }
  }
  throw std::logic_error("unknown gate kind");
}

/** X^a Z^b as a matrix (phase irrelevant under conjugation). */
inline Mat pauli_xz_matrix(int a, int b) {
  Mat m = Mat::Identity(2, 2);
  if (b != 0) m = gate_matrix(GateKind::Z) * m;
  if (a != 0) m = gate_matrix(GateKind::X) * m;
  return m;
}

}  // namespace qfe
