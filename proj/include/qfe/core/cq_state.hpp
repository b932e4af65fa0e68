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

#include <map>
#include <stdexcept>
#include <string>

#include "qfe/core/density_matrix.hpp"
#include "qfe/core/linalg.hpp"

namespace qfe {

/**
 * A classical-quantum state: a probability-weighted family of quantum blocks
 * keyed by classical labels.  Branches added under the same label accumulate
 * (the quantum part becomes their weighted mixture), so feeding every
 * enumerated branch of an experiment into add() builds the exact view state.
 *
 * Trace distance between two CQStates is the blockwise label-aligned trace
 * norm: (1/2) sum_label || w_a rho_a - w_b rho_b ||_1, with absent labels
 * treated as weight zero.  This equals the trace distance of the embedded
 * joint classical ⊗ quantum states.
 */
class CQState {
 public:
  struct Block {
    double weight = 0.0;
    Mat sum;  // weighted, unnormalized: trace(sum) == weight
    int qubits = 0;
  };

  void add(const std::string& label, double weight,
           const DensityMatrix& state) {
    if (weight < 0) throw std::invalid_argument("CQState: negative weight");
    auto it = blocks_.find(label);
    if (it == blocks_.end()) {
      Block b;
      b.weight = weight;
      b.sum = weight * state.mat();
      b.qubits = state.qubits();
      blocks_.emplace(label, std::move(b));
      return;
    }
    if (it->second.qubits != state.qubits()) {
      throw std::invalid_argument(
          "CQState: mixed quantum widths under one label");
    }
    it->second.weight += weight;
    it->second.sum += weight * state.mat();
  }

  const std::map<std::string, Block>& blocks() const { return blocks_; }

  double total_weight() const {
    double w = 0.0;
    for (const auto& [label, b] : blocks_) w += b.weight;
    return w;
  }

  /** Normalized quantum part of one label (throws if absent). */
  DensityMatrix conditional(const std::string& label) const {
    auto it = blocks_.find(label);
    if (it == blocks_.end()) throw std::out_of_range("CQState: no such label");
    return DensityMatrix::from_matrix(it->second.sum / it->second.weight);
  }

 private:
  std::map<std::string, Block> blocks_;
};

inline double trace_distance(const CQState& a, const CQState& b) {
  double total = 0.0;
  auto ia = a.blocks().begin();
  auto ib = b.blocks().begin();
  auto half_norm = [](const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(
        ((m + m.adjoint()) / 2.0).eval(), Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
  };
  while (ia != a.blocks().end() || ib != b.blocks().end()) {
    if (ib == b.blocks().end() ||
        (ia != a.blocks().end() && ia->first < ib->first)) {
      total += 0.5 * ia->second.weight;  // ||w rho||_1 = w for states
      ++ia;
    } else if (ia == a.blocks().end() || ib->first < ia->first) {
      total += 0.5 * ib->second.weight;
      ++ib;
    } else {
      if (ia->second.qubits != ib->second.qubits) {
        throw std::invalid_argument(
            "CQState distance: width mismatch under label '" + ia->first + "'");
      }
      total += half_norm(ia->second.sum - ib->second.sum);
      ++ia;
      ++ib;
    }
  }
  return total;
}

}  // namespace qfe
