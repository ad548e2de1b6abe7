// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace nfis {

/// Stream tags for the per-trial random sub-streams.
enum class Stream : std::uint64_t { Target = 1, Symbols = 2, Noise = 3 };

/// Mixes a list of integers into one 64-bit seed through std::seed_seq.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::vector<std::uint32_t> words;
  words.reserve(parts.size() * 2);
  for (auto p : parts) {
    words.push_back(static_cast<std::uint32_t>(p & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

inline std::uint64_t derive_seed(std::uint64_t trial_seed, Stream stream, std::uint64_t index = 0) {
  return derive_seed({trial_seed, static_cast<std::uint64_t>(stream), index});
}

}  // namespace nfis
