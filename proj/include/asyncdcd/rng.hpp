/**
 * Copyright 2026 The asyncdcd authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/
#pragma once

#include <cstdint>
#include <span>

namespace dcd {

/// SplitMix64 generator. Chosen over std::mt19937 because its output is fully
/// specified here, so shuffles are bit-reproducible across standard libraries
/// and platforms, and streams are cheap to derive (splittable).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw from [0, bound) via rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  /// Finalizer used to hash components into a stream seed.
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream from (seed, thread, epoch) so that a thread's
/// permutation sequence does not depend on how many other threads exist.
inline SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t thread,
                                std::uint64_t epoch) noexcept {
  std::uint64_t h = SplitMix64::mix(seed + 0x9e3779b97f4a7c15ULL);
  h = SplitMix64::mix(h ^ (thread + 0xd1b54a32d192ed03ULL));
  h = SplitMix64::mix(h ^ (epoch + 0x2545f4914f6cdd1dULL));
  return SplitMix64(h);
}

/// In-place Fisher-Yates shuffle with a fully specified draw sequence.
template <typename T>
void fisher_yates(std::span<T> items, SplitMix64& gen) noexcept {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(gen.below(i));
    T tmp = items[i - 1];
    items[i - 1] = items[j];
    items[j] = tmp;
  }
}

}  // namespace dcd
