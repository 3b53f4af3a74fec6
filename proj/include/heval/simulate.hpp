#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heval/campaign.hpp"
#include "heval/corpus.hpp"
#include "heval/store.hpp"

namespace heval::simulate {

/// How judges after the first relate to the first one.
struct NoiseProfile {
  enum class Kind {
    Identical,           // copies of judge 1
    IndependentUniform,  // fresh draws from the same level distribution
    Perturb,             // judge 1's levels, each moved by +/-delta with probability p
  };
  Kind kind = Kind::Identical;
  double p = 0.0;
  int delta = 0;
};

/// Accepts "identical", "independent-uniform" and "perturb(p,delta)".
NoiseProfile parse_profile(std::string_view text);
std::string profile_name(const NoiseProfile& profile);

struct SimulationOptions {
  int judges = 2;
  NoiseProfile profile;
  std::uint64_t seed = 0;
  /// Optional per-engine quality in [0,1]. Engines with a quality draw each
  /// feature level from Binomial(4, quality); others draw uniformly on 0..4.
  std::vector<std::pair<std::string, double>> quality;
  /// Probability that a feature is not applicable to a sentence (shared by
  /// all engines and judges, as a property of the source).
  double na_rate = 0.0;
  /// Also generate adequacy and fluency levels tracking judge 1's scores.
  bool external = true;
};

struct SimulationResult {
  std::vector<Judge> judges;
  std::vector<AnnotationSubmission> annotations;
  std::vector<ExternalSubmission> external;
};

/// Pure: draws synthetic judgments for every (sentence, engine) pair.
/// New judges get the next free ids "J<n>". Same campaign + options gives
/// the same result.
SimulationResult simulate(const Campaign& campaign, const SimulationOptions& options);

/// Adds the simulated judges and records to an in-memory campaign.
void apply(Campaign& campaign, const SimulationResult& result);
/// Same, through the store's journal (one flush per file).
void apply(CampaignStore& store, const SimulationResult& result);

/// A synthetic corpus with numbered placeholder sentences.
std::vector<corpus::EngineOutput> synthetic_outputs(std::size_t sentences, std::size_t engines);
std::string synthetic_source(std::size_t sentences);

/// Parses "E1=0.8,E2=0.4".
std::vector<std::pair<std::string, double>> parse_quality(std::string_view text);

}  // namespace heval::simulate
