#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace heval::corpus {

/// Syntactic construct categories a test sentence may be tagged with.
enum class Construct {
  Simple,
  Infinitive,
  Gerund,
  Participle,
  Appositional,
  InitialAdverb,
  InitialPP,
  Coordinate,
  Copula,
  WhStructure,
  ThatClause,
  RelativeClause,
  Discourse,
};

inline constexpr std::size_t kConstructCount = 13;

std::string_view construct_name(Construct c);
/// Accepts the display name ("Initial PP"); throws UnknownConstruct.
Construct parse_construct(std::string_view name);
const std::array<Construct, kConstructCount>& all_constructs();

struct Engine {
  std::string id;
  std::string display_name;
};

struct SentenceUnit {
  std::size_t index = 0;
  std::string source_text;
  std::optional<Construct> construct;
  int document_id = 1;  // 1-based
};

/// Immutable corpus: source sentences plus a dense engine x sentence
/// matrix of outputs. Engine order is the registry order.
struct Corpus {
  std::vector<Engine> engines;
  std::vector<SentenceUnit> sentences;
  std::vector<std::vector<std::string>> outputs;  // [engine][sentence]
  std::size_t document_size = 100;

  std::optional<std::size_t> engine_index(std::string_view id) const;
  std::size_t document_count() const;
  /// Half-open sentence range [first, last) of a 1-based document.
  std::pair<std::size_t, std::size_t> document_range(int document_id) const;
  const std::string& output(std::size_t engine, std::size_t sentence) const {
    return outputs.at(engine).at(sentence);
  }
};

struct EngineOutput {
  Engine engine;
  std::string text;  // one segment per line
};

/// Splits on LF, dropping a trailing CR from each line and the empty
/// remainder after a final newline.
std::vector<std::string> split_lines(std::string_view text);

/// Builds a corpus. Errors: EmptyCorpus, EmptySentence (line),
/// DuplicateEngine, LineCountMismatch(engine, expected, got),
/// UnknownConstruct for a bad tag count.
Corpus import_corpus(std::string_view source_text, std::span<const EngineOutput> outputs,
                     std::size_t document_size = 100,
                     std::span<const std::optional<Construct>> constructs = {});

/// Reads a constructs file: one line per sentence, empty = untagged.
std::vector<std::optional<Construct>> parse_constructs(std::string_view text);

struct CorpusStats {
  std::size_t sentences = 0;
  std::size_t words = 0;
  std::size_t unique_words = 0;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

/// Whitespace tokens of a UTF-8 string, splitting on every Unicode
/// White_Space code point. Case and punctuation are kept.
std::vector<std::string_view> whitespace_tokens(std::string_view text);

CorpusStats corpus_stats(const Corpus& corpus);

/// Identifiers used as file names and URL segments.
bool is_valid_identifier(std::string_view id);

}  // namespace heval::corpus
