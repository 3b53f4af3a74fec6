#include "heval/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "heval/blinding.hpp"
#include "heval/error.hpp"
#include "heval/reports.hpp"

namespace heval::simulate {

namespace {

// Draws built directly on the engine's raw output so sequences do not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  int below(int bound) {
    const auto b = static_cast<std::uint64_t>(bound);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return static_cast<int>(r % b);
  }

  bool chance(double p) { return uniform() < p; }

  double normal() {
    // Box-Muller; one value per call keeps the stream simple.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 engine_;
};

int draw_level(Rng& rng, std::optional<double> quality) {
  if (!quality) return rng.below(5);
  int level = 0;
  for (int i = 0; i < 4; ++i) level += rng.chance(*quality) ? 1 : 0;
  return level;
}

rubric::AnnotationVector make_vector(const std::array<std::optional<int>, 11>& raw) {
  return rubric::validate_vector(raw);
}

std::optional<double> quality_of(const SimulationOptions& options, std::string_view engine) {
  for (const auto& [id, q] : options.quality) {
    if (id == engine) return q;
  }
  return std::nullopt;
}

}  // namespace

NoiseProfile parse_profile(std::string_view text) {
  if (text == "identical") return {NoiseProfile::Kind::Identical, 0.0, 0};
  if (text == "independent-uniform") return {NoiseProfile::Kind::IndependentUniform, 0.0, 0};
  const std::string s(text);
  double p = 0.0;
  int delta = 0;
  char close = 0;
  if (std::sscanf(s.c_str(), "perturb(%lf,%d%c", &p, &delta, &close) == 3 && close == ')' &&
      s.back() == ')' && p >= 0.0 && p <= 1.0 && delta >= 0 && delta <= 4) {
    return {NoiseProfile::Kind::Perturb, p, delta};
  }
  throw Error(ErrorCode::InvalidArgument,
              "unknown noise profile '" + s +
                  "' (expected identical, independent-uniform or perturb(p,delta))");
}

std::string profile_name(const NoiseProfile& profile) {
  switch (profile.kind) {
    case NoiseProfile::Kind::Identical: return "identical";
    case NoiseProfile::Kind::IndependentUniform: return "independent-uniform";
    case NoiseProfile::Kind::Perturb: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "perturb(%g,%d)", profile.p, profile.delta);
      return buf;
    }
  }
  return "";
}

SimulationResult simulate(const Campaign& campaign, const SimulationOptions& options) {
  if (options.judges < 1) throw Error(ErrorCode::InvalidArgument, "need at least one judge");
  if (options.na_rate < 0.0 || options.na_rate >= 1.0) {
    throw Error(ErrorCode::InvalidArgument, "na rate must be in [0, 1)");
  }
  for (const auto& [id, q] : options.quality) {
    campaign.engine_index(id);
    if (q < 0.0 || q > 1.0) {
      throw Error(ErrorCode::InvalidArgument, "quality for " + id + " must be in [0, 1]");
    }
  }

  SimulationResult result;
  std::size_t next_id = campaign.judges().size() + 1;
  for (int j = 0; j < options.judges; ++j) {
    while (campaign.has_judge("J" + std::to_string(next_id))) ++next_id;
    result.judges.push_back(
        {"J" + std::to_string(next_id), "simulated judge " + std::to_string(j + 1)});
    ++next_id;
  }

  const auto& corpus = campaign.corpus();
  const ScaleBounds scale = campaign.config().external_scale;
  Rng rng(options.seed);
  using Raw = std::array<std::optional<int>, rubric::kFeatureCount>;

  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    std::array<bool, rubric::kFeatureCount> applicable{};
    bool any = false;
    for (auto& a : applicable) {
      a = !rng.chance(options.na_rate);
      any = any || a;
    }
    if (!any) applicable.back() = true;

    for (const auto& engine : corpus.engines) {
      const auto quality = quality_of(options, engine.id);
      Raw first{};
      for (std::size_t f = 0; f < rubric::kFeatureCount; ++f) {
        if (applicable[f]) first[f] = draw_level(rng, quality);
      }
      for (int j = 0; j < options.judges; ++j) {
        Raw levels = first;
        if (j > 0) {
          for (std::size_t f = 0; f < rubric::kFeatureCount; ++f) {
            if (!applicable[f]) continue;
            switch (options.profile.kind) {
              case NoiseProfile::Kind::Identical: break;
              case NoiseProfile::Kind::IndependentUniform:
                levels[f] = draw_level(rng, quality);
                break;
              case NoiseProfile::Kind::Perturb:
                if (rng.chance(options.profile.p)) {
                  const int sign = rng.below(2) == 0 ? -1 : 1;
                  levels[f] = std::clamp(*levels[f] + sign * options.profile.delta,
                                         rubric::kMinLevel, rubric::kMaxLevel);
                }
                break;
            }
          }
        }
        result.annotations.push_back(
            {result.judges[static_cast<std::size_t>(j)].id, s, engine.id, make_vector(levels)});
      }

      if (options.external) {
        const double score = to_double(rubric::final_score(make_vector(first)).value());
        for (Measure m : {Measure::Adequacy, Measure::Fluency}) {
          const double span = scale.max - scale.min;
          const double raw = scale.min + span * score + 0.5 * rng.normal();
          const int level = std::clamp(static_cast<int>(std::lround(raw)), scale.min, scale.max);
          result.external.push_back({s, engine.id, m, level});
        }
      }
    }
  }
  return result;
}

void apply(Campaign& campaign, const SimulationResult& result) {
  Campaign staged = campaign;
  for (const auto& j : result.judges) staged.add_judge(j);
  for (const auto& a : result.annotations) {
    staged.record_annotation(a.judge_id, a.sentence, a.engine_id, a.vector);
  }
  for (const auto& e : result.external) {
    staged.record_external_score(e.sentence, e.engine_id, e.measure, e.level);
  }
  campaign = std::move(staged);
}

void apply(CampaignStore& store, const SimulationResult& result) {
  for (const auto& j : result.judges) store.add_judge(j);
  store.record_annotations(result.annotations);
  store.record_external_scores(result.external);
}

std::string synthetic_source(std::size_t sentences) {
  std::string out;
  for (std::size_t i = 0; i < sentences; ++i) out += "source sentence " + std::to_string(i) + "\n";
  return out;
}

std::vector<corpus::EngineOutput> synthetic_outputs(std::size_t sentences, std::size_t engines) {
  std::vector<corpus::EngineOutput> out;
  for (std::size_t e = 0; e < engines; ++e) {
    corpus::EngineOutput o;
    o.engine.id = "E" + std::to_string(e + 1);
    o.engine.display_name = "synthetic engine " + std::to_string(e + 1);
    for (std::size_t i = 0; i < sentences; ++i) {
      // Per-engine text differs without naming the engine.
      const auto tag = mix64((static_cast<std::uint64_t>(e) << 32) ^ i) % 100000;
      o.text += "translation " + std::to_string(i) + " variant " + std::to_string(tag) + "\n";
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<std::pair<std::string, double>> parse_quality(std::string_view text) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& item : reports::split_list(text)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::InvalidArgument, "expected ENGINE=QUALITY, got '" + item + "'");
    }
    char* end = nullptr;
    const std::string value = item.substr(eq + 1);
    const double q = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') {
      throw Error(ErrorCode::InvalidArgument, "bad quality value '" + value + "'");
    }
    out.emplace_back(item.substr(0, eq), q);
  }
  return out;
}

}  // namespace heval::simulate
