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

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qfe {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Bit/index conventions used throughout the library:
//   - An n-wire system has basis index x in [0, 2^n).
//   - Wire position 0 is the MOST significant bit of x (leftmost tensor
//     factor), matching the visual order |b_0 b_1 ... b_{n-1}>.
namespace linalg {

inline std::size_t dim_of(int wires) { return std::size_t{1} << wires; }

inline int bit_at(std::size_t index, int wires, int pos) {
  return static_cast<int>((index >> (wires - 1 - pos)) & 1u);
}

/** Scatter the k bits of `packed` into the listed positions of an n-wire index. */
inline std::size_t scatter_bits(std::size_t packed, int wires,
                                const std::vector<int>& positions) {
  std::size_t out = 0;
  const int k = static_cast<int>(positions.size());
  for (int i = 0; i < k; ++i) {
    const std::size_t bit = (packed >> (k - 1 - i)) & 1u;
    out |= bit << (wires - 1 - positions[i]);
  }
  return out;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/** Positions (ascending) not listed in `chosen` within an n-wire system. */
inline std::vector<int> complement_positions(int wires,
                                             const std::vector<int>& chosen) {
  std::vector<bool> used(wires, false);
  for (int p : chosen) {
    if (p < 0 || p >= wires) throw std::out_of_range("wire position");
    if (used[p]) throw std::invalid_argument("duplicate wire position");
    used[p] = true;
  }
  std::vector<int> rest;
  for (int p = 0; p < wires; ++p) {
    if (!used[p]) rest.push_back(p);
  }
  return rest;
}

/**
 * Conjugate an n-wire density matrix by a k-qubit unitary acting on the
 * listed positions: rho -> U rho U^dagger.  `positions[0]` is qubit 0 (most
 * significant index bit) of U.
 */
inline void apply_unitary_inplace(Mat& rho, int wires, const Mat& u,
                                  const std::vector<int>& positions) {
  const int k = static_cast<int>(positions.size());
  const std::size_t local = dim_of(k);
  if (static_cast<std::size_t>(u.rows()) != local ||
      static_cast<std::size_t>(u.cols()) != local) {
    throw std::invalid_argument("unitary size does not match wire count");
  }
  const auto rest = complement_positions(wires, positions);
  const std::size_t nrest = dim_of(static_cast<int>(rest.size()));
  std::vector<std::size_t> idx(local);
  Vec scratch(local);
  const Mat u_conj = u.conjugate();
  for (std::size_t r = 0; r < nrest; ++r) {
    const std::size_t base = scatter_bits(r, wires, rest);
    for (std::size_t l = 0; l < local; ++l) {
      idx[l] = base | scatter_bits(l, wires, positions);
    }
    // Left multiply by U on every column.
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      for (std::size_t l = 0; l < local; ++l) scratch(l) = rho(idx[l], c);
      Vec v = u * scratch;
      for (std::size_t l = 0; l < local; ++l) rho(idx[l], c) = v(l);
    }
    // Right multiply by U^dagger on every row.
    for (Eigen::Index rr = 0; rr < rho.rows(); ++rr) {
      for (std::size_t l = 0; l < local; ++l) scratch(l) = rho(rr, idx[l]);
      Vec v = u_conj * scratch;
      for (std::size_t l = 0; l < local; ++l) rho(rr, idx[l]) = v(l);
    }
  }
}

/** Trace out the listed positions; remaining wires keep their relative order. */
inline Mat partial_trace(const Mat& rho, int wires,
                         const std::vector<int>& discard) {
  const auto keep = complement_positions(wires, discard);
  const std::size_t kd = dim_of(static_cast<int>(keep.size()));
  const std::size_t td = dim_of(static_cast<int>(discard.size()));
  Mat out = Mat::Zero(kd, kd);
  for (std::size_t x = 0; x < kd; ++x) {
    const std::size_t xs = scatter_bits(x, wires, keep);
    for (std::size_t y = 0; y < kd; ++y) {
      const std::size_t ys = scatter_bits(y, wires, keep);
      Cplx acc = 0;
      for (std::size_t t = 0; t < td; ++t) {
        const std::size_t ts = scatter_bits(t, wires, discard);
        acc += rho(xs | ts, ys | ts);
      }
      out(x, y) = acc;
    }
  }
  return out;
}

/**
 * Project wire `pos` onto computational value `bit` and drop the wire.
 * The result is unnormalized; its trace is the outcome probability.
 */
inline Mat project_bit(const Mat& rho, int wires, int pos, int bit) {
  const std::size_t half = dim_of(wires - 1);
  Mat out(half, half);
  std::vector<int> keep = complement_positions(wires, {pos});
  for (std::size_t x = 0; x < half; ++x) {
    const std::size_t xs =
        scatter_bits(x, wires, keep) | scatter_bits(bit, wires, {pos});
    for (std::size_t y = 0; y < half; ++y) {
      const std::size_t ys =
          scatter_bits(y, wires, keep) | scatter_bits(bit, wires, {pos});
      out(x, y) = rho(xs, ys);
    }
  }
  return out;
}

/**
 * Reorder wires: new position p carries what was at position `order[p]`.
 * `order` must be a permutation of [0, wires).
 */
inline Mat permute_wires(const Mat& rho, int wires,
                         const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != wires) {
    throw std::invalid_argument("permutation size mismatch");
  }
  const std::size_t d = dim_of(wires);
  std::vector<std::size_t> map(d);
  for (std::size_t x = 0; x < d; ++x) {
    std::size_t ox = 0;
    for (int p = 0; p < wires; ++p) {
      ox |= static_cast<std::size_t>(bit_at(x, wires, p))
            << (wires - 1 - order[p]);
    }
    map[x] = ox;
  }
  Mat out(d, d);
  for (std::size_t x = 0; x < d; ++x) {
    for (std::size_t y = 0; y < d; ++y) out(x, y) = rho(map[x], map[y]);
  }
  return out;
}

/** 0.5 * sum of |eigenvalues| of the Hermitian difference a - b. */
inline double trace_distance_mats(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("trace distance: dimension mismatch");
  }
  Mat diff = a - b;
  // Symmetrize to absorb round-off before the self-adjoint solve.
  diff = (diff + diff.adjoint().eval()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat> solver(diff, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace linalg
}  // namespace qfe
