#include "support.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace heval::testing {

TempDir::TempDir() {
  static std::mt19937_64 rng{std::random_device{}()};
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto p = fs::temp_directory_path() / ("heval-test-" + std::to_string(rng()));
    if (fs::create_directory(p)) {
      path_ = p;
      return;
    }
  }
  throw std::runtime_error("cannot create temp dir");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

std::shared_ptr<const corpus::Corpus> make_corpus(std::size_t sentences, std::size_t engines,
                                                  std::size_t document_size) {
  std::string source;
  for (std::size_t i = 0; i < sentences; ++i) source += "sentence " + std::to_string(i) + "\n";
  std::vector<corpus::EngineOutput> outputs;
  for (std::size_t e = 1; e <= engines; ++e) {
    std::string text;
    for (std::size_t i = 0; i < sentences; ++i) {
      text += "output " + std::to_string(e) + "." + std::to_string(i) + "\n";
    }
    outputs.push_back({{"E" + std::to_string(e), "Engine " + std::to_string(e)}, text});
  }
  return std::make_shared<const corpus::Corpus>(
      corpus::import_corpus(source, outputs, document_size));
}

Campaign make_campaign(std::size_t sentences, std::size_t engines, std::size_t judges,
                       std::uint64_t seed, std::size_t document_size) {
  CampaignConfig config;
  config.rng_seed = seed;
  Campaign c(config, make_corpus(sentences, engines, document_size));
  for (std::size_t j = 1; j <= judges; ++j) c.add_judge({"J" + std::to_string(j), ""});
  return c;
}

rubric::AnnotationVector uniform_vector(int level) {
  Raw raw;
  raw.fill(level);
  return rubric::validate_vector(raw);
}

Raw random_raw(std::mt19937_64& rng, double na) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> level(rubric::kMinLevel, rubric::kMaxLevel);
  Raw raw;
  bool any = false;
  for (auto& slot : raw) {
    if (u(rng) < na) {
      slot.reset();
    } else {
      slot = level(rng);
      any = true;
    }
  }
  if (!any) raw[std::uniform_int_distribution<std::size_t>(0, raw.size() - 1)(rng)] = level(rng);
  return raw;
}

void fill_random(Campaign& campaign, std::mt19937_64& rng, double tie_rate) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto& corpus = campaign.corpus();
  for (const auto& judge : campaign.judges()) {
    for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
      Raw previous{};
      for (std::size_t e = 0; e < corpus.engines.size(); ++e) {
        Raw raw = (e > 0 && u(rng) < tie_rate) ? previous : random_raw(rng);
        campaign.record_annotation(judge.id, s, corpus.engines[e].id,
                                   rubric::validate_vector(raw));
        previous = raw;
      }
    }
  }
}

double naive_score(const Raw& raw) {
  int sum = 0;
  int count = 0;
  for (const auto& slot : raw) {
    if (slot) {
      sum += *slot;
      count += 1;
    }
  }
  return static_cast<double>(sum) / (4.0 * count);
}

}  // namespace heval::testing
