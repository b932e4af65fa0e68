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
#include <vector>

#include "qfe/core/linalg.hpp"
#include "qfe/core/tolerances.hpp"

namespace qfe {

/**
 * Exact dense density matrix over n qubits (dimension 2^n).
 *
 * This is a value type: operations in ops.hpp return new instances.  The
 * zero-qubit state (the 1x1 matrix [1]) is a legal value and acts as the
 * tensor-product identity, which lets protocol code treat "no quantum
 * payload" uniformly.
 */
class DensityMatrix {
 public:
  DensityMatrix() : qubits_(0), mat_(Mat::Ones(1, 1)) {}

  static DensityMatrix from_matrix(Mat m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
      throw std::invalid_argument("density matrix must be square");
    }
    int q = 0;
    Eigen::Index d = m.rows();
    while (d > 1) {
      if (d % 2 != 0) throw std::invalid_argument("dimension not a power of 2");
      d /= 2;
      ++q;
    }
    if (q > max_qubits()) {
      throw std::invalid_argument("density matrix exceeds the qubit cap");
    }
    DensityMatrix out;
    out.qubits_ = q;
    out.mat_ = std::move(m);
    return out;
  }

  static DensityMatrix pure(const Vec& amps) {
    return from_matrix(amps * amps.adjoint());
  }

  /** |bits><bits| with bits[0] as the leftmost (most significant) qubit. */
  static DensityMatrix basis(const std::vector<std::uint8_t>& bits) {
    const int n = static_cast<int>(bits.size());
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
      idx = (idx << 1) | (bits[static_cast<std::size_t>(i)] & 1u);
    }
    return basis_index(n, idx);
  }

  static DensityMatrix basis_index(int qubits, std::size_t index) {
    Vec v = Vec::Zero(static_cast<Eigen::Index>(linalg::dim_of(qubits)));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return pure(v);
  }

  static DensityMatrix maximally_mixed(int qubits) {
    const auto d = static_cast<Eigen::Index>(linalg::dim_of(qubits));
    return from_matrix(Mat::Identity(d, d) / static_cast<double>(d));
  }

  // Handy single-qubit states.
  static DensityMatrix zero() { return basis({0}); }
  static DensityMatrix one() { return basis({1}); }
  static DensityMatrix plus() {
    Vec v(2);
    v << 0.7071067811865475244, 0.7071067811865475244;
    return pure(v);
  }
  static DensityMatrix minus() {
    Vec v(2);
    v << 0.7071067811865475244, -0.7071067811865475244;
    return pure(v);
  }

  int qubits() const { return qubits_; }
  std::size_t dim() const { return linalg::dim_of(qubits_); }
  const Mat& mat() const { return mat_; }
  Mat& mat() { return mat_; }

  double trace() const { return mat_.trace().real(); }
  double purity() const { return (mat_ * mat_).trace().real(); }

  bool is_hermitian(double tol) const {
    return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() <= tol;
  }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> solver(
        ((mat_ + mat_.adjoint()) / 2.0).eval(), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

  /** Hermitian, unit trace, and PSD up to the eigen tolerance. */
  bool is_valid_state(const Tolerances& tols = default_tols()) const {
    return is_hermitian(tols.algebraic) &&
           std::abs(trace() - 1.0) <= tols.algebraic &&
           min_eigenvalue() >= -tols.eigen;
  }

 private:
  int qubits_;
  Mat mat_;
};

}  // namespace qfe
