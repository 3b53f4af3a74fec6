#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "heval/campaign.hpp"

namespace heval {

/// 64-bit FNV-1a; stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view bytes);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic permutation of 0..n-1 seeded by (seed, judge, sentence).
/// Only depends on its arguments, so it is stable across restarts and
/// standard library implementations.
std::vector<std::size_t> blinded_permutation(std::uint64_t seed, std::string_view judge_id,
                                             std::size_t sentence, std::size_t n);

/// Engine ids of the campaign in the order a judge sees them for one
/// sentence. Throws UnknownJudge / UnknownSentence.
std::vector<std::string> blinded_order(const Campaign& campaign, std::string_view judge_id,
                                       std::size_t sentence);

}  // namespace heval
