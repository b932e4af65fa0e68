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

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qfe/core/random.hpp"

namespace qfe {

/** One fully resolved run of a randomized procedure. */
template <typename T>
struct WeightedOutcome {
  double probability;
  T value;
};

namespace detail {

/** Replays a fixed choice prefix, then extends it with first open branches. */
class ReplayInterceptor final : public ChoiceInterceptor {
 public:
  explicit ReplayInterceptor(double prob_floor) : prob_floor_(prob_floor) {}

  std::size_t choose(const std::vector<double>& probs) override {
    if (depth_ == path_.size()) {
      // New decision point: start at the first branch with nonzero weight.
      std::size_t first = 0;
      while (first + 1 < probs.size() && probs[first] <= prob_floor_) ++first;
      path_.push_back(first);
      arity_.push_back(probs);
    }
    const std::size_t idx = path_[depth_];
    if (idx >= probs.size()) {
      throw std::logic_error("enumerate_outcomes: procedure is not replayable");
    }
    weight_ *= probs[idx];
    ++depth_;
    return idx;
  }

  void begin_run() {
    depth_ = 0;
    weight_ = 1.0;
  }

  double weight() const { return weight_; }

  /** Advance to the next unexplored path; false when exhausted. */
  bool advance() {
    while (!path_.empty()) {
      std::size_t last = path_.size() - 1;
      std::size_t next = path_[last] + 1;
      const auto& probs = arity_[last];
      while (next < probs.size() && probs[next] <= prob_floor_) ++next;
      if (next < probs.size()) {
        path_[last] = next;
        return true;
      }
      path_.pop_back();
      arity_.pop_back();
    }
    return false;
  }

 private:
  double prob_floor_;
  std::vector<std::size_t> path_;
  std::vector<std::vector<double>> arity_;
  std::size_t depth_ = 0;
  double weight_ = 1.0;
};

}  // namespace detail

/**
 * Exhaustively enumerate every discrete branch a randomized procedure can
 * take, returning one entry per branch together with its exact probability.
 *
 * `fn` must be a pure function of its RandomSource draws: called repeatedly,
 * it is steered down each root-to-leaf path of its decision tree in turn.
 * Branches of probability <= prob_floor are pruned (their weight is exactly
 * zero in the intended uses: impossible measurement outcomes).
 *
 * Throws if the tree exceeds `max_branches` leaves, which keeps "exact mode"
 * honest about what it can enumerate.
 */
template <typename Fn>
auto enumerate_outcomes(Fn&& fn, std::size_t max_branches = (1u << 20),
                        double prob_floor = 1e-12)
    -> std::vector<WeightedOutcome<decltype(fn(std::declval<RandomSource&>()))>> {
  using T = decltype(fn(std::declval<RandomSource&>()));
  std::vector<WeightedOutcome<T>> out;
  detail::ReplayInterceptor replay(prob_floor);
  bool more = true;
  while (more) {
    if (out.size() >= max_branches) {
      throw std::runtime_error("enumerate_outcomes: branch budget exceeded");
    }
    replay.begin_run();
    // The seed is irrelevant: every draw is intercepted.
    RandomSource rng(0);
    rng.set_interceptor(&replay);
    T value = fn(rng);
    out.push_back({replay.weight(), std::move(value)});
    more = replay.advance();
  }
  return out;
}

}  // namespace qfe
