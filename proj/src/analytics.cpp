#include "heval/analytics.hpp"

#include <algorithm>
#include <set>

#include "heval/error.hpp"

namespace heval::analytics {

bool CampaignView::contains(std::string_view engine_id) const {
  return std::find(engines_.begin(), engines_.end(), engine_id) != engines_.end();
}

CampaignView subset_view(std::shared_ptr<const Campaign> campaign,
                         std::span<const std::string> engine_ids) {
  if (!campaign) throw Error(ErrorCode::InvalidArgument, "null campaign");
  if (engine_ids.empty()) throw Error(ErrorCode::InvalidArgument, "engine subset is empty");
  std::set<std::size_t> picked;
  for (const auto& id : engine_ids) picked.insert(campaign->engine_index(id));
  CampaignView view;
  for (std::size_t idx : picked) view.engines_.push_back(campaign->corpus().engines[idx].id);
  view.campaign_ = std::move(campaign);
  return view;
}

CampaignView full_view(std::shared_ptr<const Campaign> campaign) {
  std::vector<std::string> ids;
  for (const auto& e : campaign->corpus().engines) ids.push_back(e.id);
  return subset_view(std::move(campaign), ids);
}

const rubric::SentenceScore* ScoreMatrix::find(std::size_t sentence,
                                               std::string_view engine) const {
  auto it = entries.find(CellKey{sentence, std::string(engine)});
  return it == entries.end() ? nullptr : &it->second;
}

ScoreMatrix score_matrix(const CampaignView& view, std::string_view judge_id) {
  const Campaign& campaign = view.campaign();
  campaign.judge(judge_id);
  ScoreMatrix matrix;
  matrix.judge_id = std::string(judge_id);
  // Annotation keys sort by judge first, so this judge's records are contiguous.
  const auto& all = campaign.annotations();
  for (auto it = all.lower_bound(AnnotationKey{std::string(judge_id), 0, ""});
       it != all.end() && it->first.judge_id == judge_id; ++it) {
    if (!view.contains(it->first.engine_id)) continue;
    matrix.entries.emplace(CellKey{it->first.sentence, it->first.engine_id},
                           rubric::final_score(it->second.vector));
  }
  return matrix;
}

std::map<std::pair<int, std::string>, Rational> document_scores(const ScoreMatrix& matrix,
                                                                const CampaignView& view) {
  struct Acc {
    Rational sum{0};
    std::int64_t n = 0;
  };
  std::map<std::pair<int, std::string>, Acc> acc;
  const auto& sentences = view.campaign().corpus().sentences;
  for (const auto& [key, score] : matrix.entries) {
    if (!view.contains(key.second)) continue;
    auto& a = acc[{sentences.at(key.first).document_id, key.second}];
    a.sum += score.value();
    ++a.n;
  }
  std::map<std::pair<int, std::string>, Rational> out;
  for (const auto& [key, a] : acc) out.emplace(key, a.sum / a.n);
  return out;
}

std::map<std::string, Rational> system_scores(const ScoreMatrix& matrix,
                                              const CampaignView& view) {
  std::map<std::string, std::pair<Rational, std::int64_t>> acc;
  for (const auto& [key, score] : matrix.entries) {
    if (!view.contains(key.second)) continue;
    auto& a = acc[key.second];
    a.first += score.value();
    ++a.second;
  }
  std::map<std::string, Rational> out;
  for (const auto& [engine, a] : acc) out.emplace(engine, a.first / a.second);
  return out;
}

std::vector<int> competition_ranks(std::span<const Rational> scores) {
  std::vector<int> ranks(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    int better = 0;
    for (const auto& other : scores) {
      if (other > scores[i]) ++better;
    }
    ranks[i] = better + 1;
  }
  return ranks;
}

std::size_t RankTable::engine_position(std::string_view engine_id) const {
  auto it = std::find(engines.begin(), engines.end(), engine_id);
  if (it == engines.end()) {
    Error e(ErrorCode::UnknownEngine, "engine " + std::string(engine_id) + " not in rank table");
    e.subject = std::string(engine_id);
    throw e;
  }
  return static_cast<std::size_t>(it - engines.begin());
}

int RankTable::rank(std::size_t sentence, std::string_view engine_id) const {
  const std::size_t pos = engine_position(engine_id);
  auto it = ranks.find(sentence);
  if (it == ranks.end()) {
    Error e(ErrorCode::UnknownSentence, "sentence " + std::to_string(sentence) + " not ranked");
    e.value = static_cast<std::int64_t>(sentence);
    throw e;
  }
  return it->second[pos];
}

RankTable rank_sentences(const ScoreMatrix& matrix, std::span<const std::string> engines) {
  RankTable table;
  table.judge_id = matrix.judge_id;
  table.engines.assign(engines.begin(), engines.end());

  std::set<std::size_t> sentences;
  for (const auto& [key, score] : matrix.entries) sentences.insert(key.first);

  std::vector<Rational> scores(engines.size());
  for (std::size_t s : sentences) {
    bool complete = true;
    for (std::size_t e = 0; e < engines.size() && complete; ++e) {
      const auto* cell = matrix.find(s, engines[e]);
      if (cell) {
        scores[e] = cell->value();
      } else {
        complete = false;
      }
    }
    if (complete) {
      table.ranks.emplace(s, competition_ranks(scores));
    } else {
      table.excluded.push_back(s);
    }
  }
  return table;
}

std::size_t credited_engine(const RankTable& table, std::size_t sentence) {
  auto row = table.ranks.find(sentence);
  if (row == table.ranks.end()) {
    Error e(ErrorCode::UnknownSentence, "sentence " + std::to_string(sentence) + " not ranked");
    e.value = static_cast<std::int64_t>(sentence);
    throw e;
  }
  const auto& ranks = row->second;
  // Rank 1 always exists; the first one found is the earliest registered.
  for (std::size_t e = 0; e < ranks.size(); ++e) {
    if (ranks[e] == 1) return e;
  }
  throw Error(ErrorCode::InvalidArgument, "rank table row without a rank-1 engine");
}

std::vector<std::pair<std::string, std::size_t>> highest_rank_counts(const RankTable& table) {
  std::vector<std::pair<std::string, std::size_t>> counts;
  for (const auto& e : table.engines) counts.emplace_back(e, 0);
  for (const auto& [sentence, ranks] : table.ranks) ++counts[credited_engine(table, sentence)].second;
  return counts;
}

}  // namespace heval::analytics
