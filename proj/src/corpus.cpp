#include "heval/corpus.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <unordered_set>

#include "heval/error.hpp"

namespace heval::corpus {

namespace {

constexpr std::array<Construct, kConstructCount> kConstructs{
    Construct::Simple,       Construct::Infinitive,    Construct::Gerund,
    Construct::Participle,   Construct::Appositional,  Construct::InitialAdverb,
    Construct::InitialPP,    Construct::Coordinate,    Construct::Copula,
    Construct::WhStructure,  Construct::ThatClause,    Construct::RelativeClause,
    Construct::Discourse,
};

bool is_unicode_space(char32_t cp) {
  return (cp >= 0x09 && cp <= 0x0D) || cp == 0x20 || cp == 0x85 || cp == 0xA0 ||
         cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 || cp == 0x2029 ||
         cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

// Decodes one code point at `pos`; malformed bytes decode as themselves
// with length 1 so they simply count as word characters.
char32_t decode_utf8(std::string_view s, std::size_t pos, std::size_t& len) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  auto cont = [&](std::size_t i) -> int {
    if (pos + i >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[pos + i]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    len = 1;
    return b0;
  }
  int need = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    need = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    need = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    need = 3;
    cp = b0 & 0x07;
  } else {
    len = 1;
    return b0;
  }
  for (int i = 1; i <= need; ++i) {
    const int c = cont(static_cast<std::size_t>(i));
    if (c < 0) {
      len = 1;
      return b0;
    }
    cp = (cp << 6) | static_cast<char32_t>(c);
  }
  len = static_cast<std::size_t>(need) + 1;
  return cp;
}

std::string_view trim_space(std::string_view s) {
  const auto tokens = whitespace_tokens(s);
  if (tokens.empty()) return {};
  const char* first = tokens.front().data();
  const char* last = tokens.back().data() + tokens.back().size();
  return {first, static_cast<std::size_t>(last - first)};
}

Error line_count_mismatch(const std::string& engine, std::size_t expected, std::size_t got) {
  Error e(ErrorCode::LineCountMismatch, "engine " + engine + ": expected " +
                                            std::to_string(expected) + " lines, got " +
                                            std::to_string(got));
  e.subject = engine;
  e.value = static_cast<std::int64_t>(got);
  return e;
}

}  // namespace

std::string_view construct_name(Construct c) {
  switch (c) {
    case Construct::Simple: return "Simple Construct";
    case Construct::Infinitive: return "Infinitive Construct";
    case Construct::Gerund: return "Gerund Construct";
    case Construct::Participle: return "Participle Construct";
    case Construct::Appositional: return "Appositional Construct";
    case Construct::InitialAdverb: return "Initial Adverb";
    case Construct::InitialPP: return "Initial PP";
    case Construct::Coordinate: return "Coordinate Construct";
    case Construct::Copula: return "Copula";
    case Construct::WhStructure: return "Wh Structure";
    case Construct::ThatClause: return "That Clause";
    case Construct::RelativeClause: return "Relative Clause";
    case Construct::Discourse: return "Discourse Construct";
  }
  return "";
}

Construct parse_construct(std::string_view name) {
  for (Construct c : kConstructs) {
    if (construct_name(c) == name) return c;
  }
  Error e(ErrorCode::UnknownConstruct, "unknown construct: " + std::string(name));
  e.subject = std::string(name);
  throw e;
}

const std::array<Construct, kConstructCount>& all_constructs() { return kConstructs; }

std::optional<std::size_t> Corpus::engine_index(std::string_view id) const {
  for (std::size_t i = 0; i < engines.size(); ++i) {
    if (engines[i].id == id) return i;
  }
  return std::nullopt;
}

std::size_t Corpus::document_count() const {
  return (sentences.size() + document_size - 1) / document_size;
}

std::pair<std::size_t, std::size_t> Corpus::document_range(int document_id) const {
  const auto doc = static_cast<std::size_t>(document_id - 1);
  const std::size_t first = doc * document_size;
  return {first, std::min(first + document_size, sentences.size())};
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    const bool last = end == std::string_view::npos;
    if (last) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    if (last) break;
    start = end + 1;
  }
  return lines;
}

Corpus import_corpus(std::string_view source_text, std::span<const EngineOutput> outputs,
                     std::size_t document_size,
                     std::span<const std::optional<Construct>> constructs) {
  if (document_size == 0) throw Error(ErrorCode::InvalidArgument, "document size must be > 0");
  Corpus corpus;
  corpus.document_size = document_size;

  const auto source_lines = split_lines(source_text);
  if (source_lines.empty()) throw Error(ErrorCode::EmptyCorpus, "source corpus has no lines");
  if (outputs.empty()) throw Error(ErrorCode::EmptyCorpus, "no engine outputs given");
  if (!constructs.empty() && constructs.size() != source_lines.size()) {
    Error e(ErrorCode::LineCountMismatch, "construct tags: expected " +
                                              std::to_string(source_lines.size()) +
                                              " lines, got " + std::to_string(constructs.size()));
    e.subject = "constructs";
    throw e;
  }

  corpus.sentences.reserve(source_lines.size());
  for (std::size_t i = 0; i < source_lines.size(); ++i) {
    if (trim_space(source_lines[i]).empty()) {
      Error e(ErrorCode::EmptySentence, "source line " + std::to_string(i + 1) + " is empty");
      e.line = i + 1;
      throw e;
    }
    SentenceUnit unit;
    unit.index = i;
    unit.source_text = source_lines[i];
    if (!constructs.empty()) unit.construct = constructs[i];
    unit.document_id = static_cast<int>(i / document_size) + 1;
    corpus.sentences.push_back(std::move(unit));
  }

  std::set<std::string> seen;
  for (const auto& out : outputs) {
    if (!is_valid_identifier(out.engine.id)) {
      throw Error(ErrorCode::InvalidArgument, "invalid engine id: '" + out.engine.id + "'");
    }
    if (!seen.insert(out.engine.id).second) {
      Error e(ErrorCode::DuplicateEngine, "duplicate engine " + out.engine.id);
      e.subject = out.engine.id;
      throw e;
    }
    auto lines = split_lines(out.text);
    if (lines.size() != source_lines.size()) {
      throw line_count_mismatch(out.engine.id, source_lines.size(), lines.size());
    }
    corpus.engines.push_back(out.engine);
    corpus.outputs.push_back(std::move(lines));
  }
  return corpus;
}

std::vector<std::optional<Construct>> parse_constructs(std::string_view text) {
  std::vector<std::optional<Construct>> out;
  for (const auto& line : split_lines(text)) {
    const auto trimmed = trim_space(line);
    if (trimmed.empty()) {
      out.emplace_back();
    } else {
      out.emplace_back(parse_construct(trimmed));
    }
  }
  return out;
}

std::vector<std::string_view> whitespace_tokens(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  std::size_t start = std::string_view::npos;
  while (pos < text.size()) {
    std::size_t len = 1;
    const char32_t cp = decode_utf8(text, pos, len);
    if (is_unicode_space(cp)) {
      if (start != std::string_view::npos) {
        tokens.push_back(text.substr(start, pos - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = pos;
    }
    pos += len;
  }
  if (start != std::string_view::npos) tokens.push_back(text.substr(start));
  return tokens;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.sentences = corpus.sentences.size();
  std::unordered_set<std::string_view> unique;
  for (const auto& s : corpus.sentences) {
    for (auto tok : whitespace_tokens(s.source_text)) {
      ++stats.words;
      unique.insert(tok);
    }
  }
  stats.unique_words = unique.size();
  return stats;
}

bool is_valid_identifier(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  if (id == "." || id == "..") return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.';
  });
}

}  // namespace heval::corpus
