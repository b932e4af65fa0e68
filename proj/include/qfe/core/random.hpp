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
#include <random>
#include <stdexcept>
#include <vector>

namespace qfe {

/**
 * Hook that lets a driver take over every discrete random decision made
 * through a RandomSource.  Protocol code is written once against
 * RandomSource; installing an interceptor turns a sampled run into one branch
 * of an exhaustive enumeration (see enumerate.hpp).
 */
class ChoiceInterceptor {
 public:
  virtual ~ChoiceInterceptor() = default;
  /** Pick an index into `probs` (entries sum to ~1). */
  virtual std::size_t choose(const std::vector<double>& probs) = 0;
};

/**
 * Deterministic randomness stream.
 *
 * A fixed seed reproduces the identical sequence of draws on every platform
 * (mt19937_64 output is pinned by the C++ standard; the derived draws below
 * avoid std::uniform_*_distribution, whose mapping is implementation
 * defined).
 *
 * All discrete draws funnel through choose(), so an installed interceptor
 * sees every coin flip and measurement-outcome selection the protocol makes.
 */
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /** Uniform 64-bit word.  Not interceptable; reject under enumeration. */
  std::uint64_t word() {
    if (interceptor_ != nullptr) {
      throw std::logic_error(
          "RandomSource::word is not available while an interceptor is "
          "installed; use bit()/index()/choose() draws instead");
    }
    return engine_();
  }

  /** Uniform double in [0,1).  Not interceptable (Monte-Carlo paths only). */
  double real() {
    return static_cast<double>(word() >> 11) * 0x1.0p-53;
  }

  /** Pick index according to `probs`; the single enumeration/sampling gate. */
  std::size_t choose(const std::vector<double>& probs) {
    if (interceptor_ != nullptr) return interceptor_->choose(probs);
    double r = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (r < acc) return i;
    }
    return probs.empty() ? 0 : probs.size() - 1;
  }

  /** Uniform bit. */
  int bit() { return static_cast<int>(choose({0.5, 0.5})); }

  /** `n` uniform bits. */
  std::vector<std::uint8_t> bits(std::size_t n) {
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(bit());
    return out;
  }

  /** Uniform index in [0, n). */
  std::size_t index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("RandomSource::index(0)");
    if (interceptor_ != nullptr) {
      return choose(std::vector<double>(n, 1.0 / static_cast<double>(n)));
    }
    // Rejection sampling keeps the mapping exactly uniform and portable.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t w = engine_();
    while (w >= limit) w = engine_();
    return static_cast<std::size_t>(w % n);
  }

  /** Derive an independent stream labelled by `label`. */
  RandomSource fork(std::uint64_t label) const {
    return RandomSource(splitmix(seed_ ^ (0x9e3779b97f4a7c15ULL * (label + 1))));
  }

  void set_interceptor(ChoiceInterceptor* ic) { interceptor_ = ic; }
  ChoiceInterceptor* interceptor() const { return interceptor_; }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  ChoiceInterceptor* interceptor_ = nullptr;
};

}  // namespace qfe
