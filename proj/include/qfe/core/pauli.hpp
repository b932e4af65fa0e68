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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfe/core/random.hpp"

namespace qfe {

/**
 * A per-qubit Pauli mask X^{a_i} Z^{b_i}.
 *
 * Used both as the quantum one-time-pad key and as the symbolic Pauli frame
 * tracked through Clifford conjugation.  Phases are deliberately untracked:
 * all consumers conjugate density matrices, where global phase cancels.
 */
struct PauliKey {
  std::vector<std::uint8_t> a;  // X exponents
  std::vector<std::uint8_t> b;  // Z exponents

  PauliKey() = default;
  explicit PauliKey(std::size_t n) : a(n, 0), b(n, 0) {}
  PauliKey(std::vector<std::uint8_t> xs, std::vector<std::uint8_t> zs)
      : a(std::move(xs)), b(std::move(zs)) {
    if (a.size() != b.size()) {
      throw std::invalid_argument("PauliKey: a/b length mismatch");
    }
  }

  std::size_t size() const { return a.size(); }

  static PauliKey random(std::size_t n, RandomSource& rng) {
    PauliKey k(n);
    k.a = rng.bits(n);
    k.b = rng.bits(n);
    return k;
  }

  PauliKey operator^(const PauliKey& o) const {
    if (size() != o.size()) throw std::invalid_argument("PauliKey xor size");
    PauliKey out(size());
    for (std::size_t i = 0; i < size(); ++i) {
      out.a[i] = a[i] ^ o.a[i];
      out.b[i] = b[i] ^ o.b[i];
    }
    return out;
  }

  PauliKey& operator^=(const PauliKey& o) { return *this = *this ^ o; }

  bool operator==(const PauliKey& o) const { return a == o.a && b == o.b; }

  bool is_zero() const {
    for (std::size_t i = 0; i < size(); ++i) {
      if (a[i] != 0 || b[i] != 0) return false;
    }
    return true;
  }

  /** Concatenate two keys (slot-wise layouts). */
  static PauliKey concat(const PauliKey& x, const PauliKey& y) {
    PauliKey out = x;
    out.a.insert(out.a.end(), y.a.begin(), y.a.end());
    out.b.insert(out.b.end(), y.b.begin(), y.b.end());
    return out;
  }

  PauliKey slice(std::size_t from, std::size_t len) const {
    PauliKey out(len);
    for (std::size_t i = 0; i < len; ++i) {
      out.a[i] = a.at(from + i);
      out.b[i] = b.at(from + i);
    }
    return out;
  }

  /** Flat bit serialization a_0..a_{n-1} b_0..b_{n-1}. */
  std::vector<std::uint8_t> to_bits() const {
    std::vector<std::uint8_t> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
  }

  static PauliKey from_bits(const std::vector<std::uint8_t>& bits) {
    if (bits.size() % 2 != 0) {
      throw std::invalid_argument("PauliKey::from_bits: odd length");
    }
    const std::size_t n = bits.size() / 2;
    PauliKey out(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.a[i] = bits[i];
      out.b[i] = bits[n + i];
    }
    return out;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < size(); ++i) {
      s += a[i] != 0 ? '1' : '0';
      s += b[i] != 0 ? '1' : '0';
    }
    return s;
  }
};

/** XOR two bit-vectors of equal length. */
inline std::vector<std::uint8_t> xor_bits(const std::vector<std::uint8_t>& x,
                                          const std::vector<std::uint8_t>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("xor_bits: size");
  std::vector<std::uint8_t> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = static_cast<std::uint8_t>((x[i] ^ y[i]) & 1u);
  }
  return out;
}

inline std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s += b != 0 ? '1' : '0';
  return s;
}

}  // namespace qfe
