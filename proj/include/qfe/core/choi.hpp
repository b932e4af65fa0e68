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

#include <functional>
#include <stdexcept>
#include <vector>

#include "qfe/core/density_matrix.hpp"
#include "qfe/core/enumerate.hpp"
#include "qfe/core/ops.hpp"
#include "qfe/core/register_state.hpp"

namespace qfe {

/**
 * A CPTP map as protocol code sees it: consumes `n_in` wires of a register
 * (which may be entangled with spectators), leaves `n_out` output wires.
 * Internal randomness and measurements go through the RandomSource, so a
 * channel is enumerable like everything else.
 */
struct Channel {
  int n_in = 0;
  int n_out = 0;
  std::function<std::vector<int>(RegisterState&, const std::vector<int>&,
                                 RandomSource&)>
      apply;
};

/** Wrap a fixed unitary as a channel. */
inline Channel channel_from_unitary(const Mat& u, int qubits) {
  Channel ch;
  ch.n_in = qubits;
  ch.n_out = qubits;
  ch.apply = [u](RegisterState& rs, const std::vector<int>& ws,
                 RandomSource&) {
    rs.apply_unitary(u, ws);
    return ws;
  };
  return ch;
}

/**
 * Choi state of a channel: the channel applied to the first halves of n_in
 * EPR pairs.  Output wire order is [channel outputs][untouched halves].
 * Channels with internal randomness are averaged exactly over all branches.
 */
struct ChoiMatrix {
  int n_in = 0;
  int n_out = 0;
  DensityMatrix state;
};

inline ChoiMatrix choi_of(const Channel& ch,
                          std::size_t max_branches = (1u << 20)) {
  auto branches = enumerate_outcomes(
      [&ch](RandomSource& rng) {
        RegisterState rs;
        std::vector<int> a_ws, b_ws;
        for (int i = 0; i < ch.n_in; ++i) {
          auto pair = rs.add_state(epr_pair());
          a_ws.push_back(pair[0]);
          b_ws.push_back(pair[1]);
        }
        std::vector<int> out_ws = ch.apply(rs, a_ws, rng);
        if (static_cast<int>(out_ws.size()) != ch.n_out) {
          throw std::runtime_error(
              "choi_of: channel output width inconsistent with declaration");
        }
        std::vector<int> order = out_ws;
        order.insert(order.end(), b_ws.begin(), b_ws.end());
        return rs.dense(order);
      },
      max_branches);
  const int width = ch.n_out + ch.n_in;
  Mat acc = Mat::Zero(static_cast<Eigen::Index>(linalg::dim_of(width)),
                      static_cast<Eigen::Index>(linalg::dim_of(width)));
  for (const auto& br : branches) {
    if (br.value.qubits() != width) {
      throw std::runtime_error("choi_of: branch width mismatch");
    }
    acc += br.probability * br.value.mat();
  }
  return {ch.n_in, ch.n_out, DensityMatrix::from_matrix(std::move(acc))};
}

/**
 * Trace distance between Choi states: an exact stand-in for diamond-norm
 * separation at desk scale — it is zero iff the channels are equal, and any
 * nonzero value witnesses inequality.
 */
inline double choi_distance(const ChoiMatrix& a, const ChoiMatrix& b) {
  if (a.n_in != b.n_in || a.n_out != b.n_out) {
    throw std::invalid_argument("choi_distance: signature mismatch");
  }
  return trace_distance(a.state, b.state);
}

/**
 * Apply a channel to the given wires of a dense state, averaging exactly
 * over the channel's internal branches.  Output wire order: channel outputs
 * first, then surviving spectators in their original relative order.
 */
inline DensityMatrix channel_apply(const Channel& ch, const DensityMatrix& rho,
                                   const std::vector<int>& in_wires,
                                   std::size_t max_branches = (1u << 20)) {
  auto branches = enumerate_outcomes(
      [&](RandomSource& rng) {
        RegisterState rs;
        auto ids = rs.add_state(rho);
        std::vector<int> sel;
        for (int w : in_wires) sel.push_back(ids[w]);
        std::vector<int> out_ws = ch.apply(rs, sel, rng);
        std::vector<int> order = out_ws;
        for (std::size_t i = 0; i < ids.size(); ++i) {
          const int w = ids[i];
          if (std::find(sel.begin(), sel.end(), w) == sel.end()) {
            order.push_back(w);
          }
        }
        return rs.dense(order);
      },
      max_branches);
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

}  // namespace qfe
