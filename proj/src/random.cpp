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

#include "steinrep/random.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace steinrep {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

using Block = std::array<std::uint32_t, 4>;

void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
             std::uint32_t& lo) noexcept {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

Block philox4x32_10(Block ctr, std::array<std::uint32_t, 2> key) noexcept {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, ctr[0], hi0, lo0);
    mulhilo(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

}  // namespace

RandomStream RandomStream::child(std::uint64_t index) const noexcept {
  const std::uint64_t id = splitmix64(stream_ ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
  return RandomStream(seed_, id, 0);
}

std::uint64_t RandomStream::bits() const noexcept {
  const Block ctr = {static_cast<std::uint32_t>(counter_),
                     static_cast<std::uint32_t>(counter_ >> 32),
                     static_cast<std::uint32_t>(stream_),
                     static_cast<std::uint32_t>(stream_ >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                            static_cast<std::uint32_t>(seed_ >> 32)};
  const Block out = philox4x32_10(ctr, key);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Draw<double> uniform(RandomStream s) {
  // 53 random mantissa bits, offset by half an ulp to stay inside (0, 1).
  const double u = (static_cast<double>(s.bits() >> 11) + 0.5) * 0x1.0p-53;
  return {u, s.advanced()};
}

Draw<double> standard_normal(RandomStream s) {
  const auto [u1, s1] = uniform(s);
  const auto [u2, s2] = uniform(s1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * std::numbers::pi * u2), s2};
}

Draw<Vector> standard_normal_vector(std::size_t d, RandomStream s) {
  Vector out(d);
  std::size_t i = 0;
  while (i < d) {
    const auto [u1, s1] = uniform(s);
    const auto [u2, s2] = uniform(s1);
    s = s2;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[i++] = r * std::cos(angle);
    if (i < d) out[i++] = r * std::sin(angle);
  }
  return {std::move(out), s};
}

}  // namespace steinrep
