#include "heval/blinding.hpp"

#include <numeric>

namespace heval {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<std::size_t> blinded_permutation(std::uint64_t seed, std::string_view judge_id,
                                             std::size_t sentence, std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t state = mix64(seed ^ mix64(fnv1a64(judge_id) ^ mix64(sentence)));
  // Fisher-Yates with rejection sampling for an unbiased bounded draw.
  for (std::size_t i = n; i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      state += 0x9e3779b97f4a7c15ULL;
      r = mix64(state);
    } while (r >= limit);
    std::swap(order[i - 1], order[static_cast<std::size_t>(r % bound)]);
  }
  return order;
}

std::vector<std::string> blinded_order(const Campaign& campaign, std::string_view judge_id,
                                       std::size_t sentence) {
  campaign.judge(judge_id);
  campaign.require_sentence(sentence);
  const auto& engines = campaign.corpus().engines;
  std::vector<std::string> out;
  out.reserve(engines.size());
  for (std::size_t idx : blinded_permutation(campaign.config().rng_seed, judge_id, sentence,
                                             engines.size())) {
    out.push_back(engines[idx].id);
  }
  return out;
}

}  // namespace heval
