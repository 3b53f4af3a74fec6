#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "heval/campaign.hpp"
#include "heval/corpus.hpp"
#include "heval/rubric.hpp"

namespace heval::testing {

using Raw = std::array<std::optional<int>, rubric::kFeatureCount>;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_text(const std::filesystem::path& p);
void write_text(const std::filesystem::path& p, const std::string& text);

/// Corpus with `sentences` placeholder lines and engines E1..En.
std::shared_ptr<const corpus::Corpus> make_corpus(std::size_t sentences, std::size_t engines,
                                                  std::size_t document_size = 100);

/// In-memory campaign over make_corpus with judges J1..Jj registered.
Campaign make_campaign(std::size_t sentences, std::size_t engines, std::size_t judges,
                       std::uint64_t seed = 0, std::size_t document_size = 100);

rubric::AnnotationVector uniform_vector(int level);

/// Random valid vector: each slot NA with probability `na`, otherwise a
/// uniform level; at least one slot stays applicable.
Raw random_raw(std::mt19937_64& rng, double na = 0.2);

/// Fills every (judge, sentence, engine) cell of `campaign` with random
/// vectors. With `tie_rate` > 0, some cells copy the previous engine's
/// vector to force score ties.
void fill_random(Campaign& campaign, std::mt19937_64& rng, double tie_rate = 0.0);

/// Plain-loop reading of the scoring rule, kept deliberately naive.
double naive_score(const Raw& raw);

}  // namespace heval::testing
