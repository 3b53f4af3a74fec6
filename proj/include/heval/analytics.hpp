#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heval/campaign.hpp"
#include "heval/rational.hpp"

namespace heval::analytics {

/// A campaign restricted to an engine subset. Engines are kept in registry
/// order whatever order the caller listed them in.
class CampaignView {
 public:
  const Campaign& campaign() const noexcept { return *campaign_; }
  const std::vector<std::string>& engines() const noexcept { return engines_; }
  bool contains(std::string_view engine_id) const;

 private:
  friend CampaignView subset_view(std::shared_ptr<const Campaign>, std::span<const std::string>);
  std::shared_ptr<const Campaign> campaign_;
  std::vector<std::string> engines_;
};

/// Errors: UnknownEngine, InvalidArgument for an empty subset.
CampaignView subset_view(std::shared_ptr<const Campaign> campaign,
                         std::span<const std::string> engine_ids);
/// View over every engine.
CampaignView full_view(std::shared_ptr<const Campaign> campaign);

using CellKey = std::pair<std::size_t, std::string>;  // (sentence, engine)

struct ScoreMatrix {
  std::string judge_id;
  std::map<CellKey, rubric::SentenceScore> entries;

  const rubric::SentenceScore* find(std::size_t sentence, std::string_view engine) const;
};

/// One entry per current annotation of `judge_id` on engines in the view.
ScoreMatrix score_matrix(const CampaignView& view, std::string_view judge_id);

/// Mean over annotated sentences only; cells without annotations are absent.
std::map<std::pair<int, std::string>, Rational> document_scores(const ScoreMatrix& matrix,
                                                                const CampaignView& view);
std::map<std::string, Rational> system_scores(const ScoreMatrix& matrix,
                                              const CampaignView& view);

/// Competition ranks ("1,1,3") per sentence over a fixed engine subset.
struct RankTable {
  std::string judge_id;
  std::vector<std::string> engines;              // registry order
  std::map<std::size_t, std::vector<int>> ranks;  // sentence -> rank per engine
  std::vector<std::size_t> excluded;             // sentences lacking full coverage

  /// Throws UnknownEngine / UnknownSentence.
  int rank(std::size_t sentence, std::string_view engine_id) const;
  std::size_t engine_position(std::string_view engine_id) const;
};

std::vector<int> competition_ranks(std::span<const Rational> scores);

RankTable rank_sentences(const ScoreMatrix& matrix, std::span<const std::string> engines);

/// Index into `table.engines` of the engine credited with the top rank of
/// one sentence: the rank-1 engine, earliest in registry order on ties.
std::size_t credited_engine(const RankTable& table, std::size_t sentence);

/// Per engine (table order) the number of sentences it is credited with.
std::vector<std::pair<std::string, std::size_t>> highest_rank_counts(const RankTable& table);

}  // namespace heval::analytics
