// Copyright 2026 The steinrep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

#include "steinrep/numerics.hpp"

namespace steinrep {

/// Immutable token into a counter-based (Philox4x32-10) random stream.
///
/// A token is the triple (seed, stream id, draw index). Drawing never mutates
/// the token; it returns the value together with the advanced token, so equal
/// tokens always reproduce equal draws no matter which thread evaluates them.
/// `child(i)` derives an independent substream, which is how estimators give
/// every Monte-Carlo sample its own stream.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0,
                        std::uint64_t counter = 0) noexcept
      : seed_(seed), stream_(stream_id), counter_(counter) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }
  std::uint64_t counter() const noexcept { return counter_; }

  RandomStream child(std::uint64_t index) const noexcept;

  /// Raw 64 random bits at the current index.
  std::uint64_t bits() const noexcept;
  RandomStream advanced(std::uint64_t by = 1) const noexcept {
    return RandomStream(seed_, stream_, counter_ + by);
  }

  bool operator==(const RandomStream&) const = default;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_;
};

template <class T>
struct Draw {
  T value;
  RandomStream next;
};

/// Uniform on the open interval (0, 1).
Draw<double> uniform(RandomStream s);
/// Standard normal via Box-Muller (consumes two uniforms).
Draw<double> standard_normal(RandomStream s);
Draw<Vector> standard_normal_vector(std::size_t d, RandomStream s);

}  // namespace steinrep
