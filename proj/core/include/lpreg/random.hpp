#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace lpreg {

/// All randomness in the library flows from one of these, seeded explicitly.
/// Distributions are hand-rolled on top of raw engine output so that a seed
/// reproduces the same stream on every standard library.
using Rng = std::mt19937_64;

/// Uniform integer in [0, n). n must be positive.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

template <class T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace lpreg
