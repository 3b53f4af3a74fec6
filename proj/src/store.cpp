#include "heval/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include <json.hpp>

#include "heval/error.hpp"
#include "heval/interchange.hpp"

namespace fs = std::filesystem;

namespace heval {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kConfigFile = "campaign.json";
constexpr const char* kSourceFile = "source.txt";
constexpr const char* kConstructsFile = "constructs.txt";
constexpr const char* kOutputsDir = "outputs";
constexpr const char* kJudgesFile = "judges.jsonl";
constexpr const char* kJournalFile = "journal.jsonl";
constexpr const char* kExternalFile = "external.jsonl";

Error io_error(const std::string& what, const fs::path& path) {
  Error e(ErrorCode::Io, what + " " + path.string() + ": " + std::strerror(errno));
  e.subject = path.string();
  return e;
}

void write_file(const fs::path& path, std::string_view content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write", tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw io_error("cannot write", tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

// Append-only line file. Each append is flushed with fsync before returning.
class AppendFile {
 public:
  AppendFile() = default;
  explicit AppendFile(const fs::path& path) : path_(path) {
    fd_ = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw io_error("cannot open", path);
  }
  AppendFile(AppendFile&& other) noexcept : path_(std::move(other.path_)), fd_(other.fd_) {
    other.fd_ = -1;
  }
  AppendFile& operator=(AppendFile&& other) noexcept {
    std::swap(path_, other.path_);
    std::swap(fd_, other.fd_);
    return *this;
  }
  AppendFile(const AppendFile&) = delete;
  AppendFile& operator=(const AppendFile&) = delete;
  ~AppendFile() {
    if (fd_ >= 0) ::close(fd_);
  }

  void append(std::string_view data) {
    if (data.empty()) return;
    const off_t start = ::lseek(fd_, 0, SEEK_END);
    if (start < 0) throw io_error("cannot seek", path_);
    std::size_t written = 0;
    while (written < data.size()) {
      const ssize_t n = ::write(fd_, data.data() + written, data.size() - written);
      if (n < 0) {
        if (errno == EINTR) continue;
        rollback(start);
        throw io_error("cannot append to", path_);
      }
      written += static_cast<std::size_t>(n);
    }
    if (::fsync(fd_) != 0) {
      rollback(start);
      throw io_error("cannot sync", path_);
    }
  }

 private:
  // Drops a partial write so the next record starts on a clean line.
  void rollback(off_t size) {
    const int saved = errno;
    [[maybe_unused]] const int rc = ::ftruncate(fd_, size);
    errno = saved;
  }

  fs::path path_;
  int fd_ = -1;
};

// Complete lines of an append-only file. A trailing fragment without a
// newline is an interrupted write: it is cut off so later appends start
// on a fresh line.
std::vector<std::string> read_complete_lines(const fs::path& path) {
  if (!fs::exists(path)) return {};
  std::string content = read_file(path);
  const auto last_nl = content.rfind('\n');
  const std::size_t keep = last_nl == std::string::npos ? 0 : last_nl + 1;
  if (keep != content.size()) {
    std::error_code ec;
    fs::resize_file(path, keep, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot truncate " + path.string() + ": " + ec.message());
    content.resize(keep);
  }
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    const auto end = content.find('\n', start);
    lines.push_back(content.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

template <typename Decode>
auto decode_lines(const fs::path& path, Decode decode) {
  std::vector<decltype(decode(std::string_view{}))> out;
  std::size_t line_no = 0;
  for (const auto& line : read_complete_lines(path)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(decode(line));
    } catch (Error& e) {
      Error wrapped(ErrorCode::SchemaViolation,
                    path.filename().string() + " line " + std::to_string(line_no) + ": " +
                        e.what());
      wrapped.line = line_no;
      wrapped.subject = path.string();
      throw wrapped;
    }
  }
  return out;
}

ojson config_json(const CampaignConfig& config, const corpus::Corpus& corpus, bool constructs) {
  ojson j;
  j["id"] = config.id;
  j["document_size"] = corpus.document_size;
  j["rng_seed"] = config.rng_seed;
  j["external_scale"] = {{"min", config.external_scale.min}, {"max", config.external_scale.max}};
  ojson engines = ojson::array();
  for (const auto& e : corpus.engines) {
    engines.push_back({{"id", e.id}, {"name", e.display_name}});
  }
  j["engines"] = std::move(engines);
  j["constructs"] = constructs;
  return j;
}

}  // namespace

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<AnnotationRecord> read_journal(const fs::path& journal_file) {
  return decode_lines(journal_file, interchange::decode_journal_line);
}

struct CampaignStore::State {
  fs::path dir;
  mutable std::shared_mutex snapshot_mu;
  std::shared_ptr<const Campaign> current;
  std::mutex write_mu;
  AppendFile judges;
  AppendFile journal;
  AppendFile external;

  std::shared_ptr<const Campaign> load() const {
    std::shared_lock lock(snapshot_mu);
    return current;
  }
  void publish(Campaign next) {
    auto ptr = std::make_shared<const Campaign>(std::move(next));
    std::unique_lock lock(snapshot_mu);
    current = std::move(ptr);
  }
};

CampaignStore::CampaignStore(std::unique_ptr<State> state) : state_(std::move(state)) {}
CampaignStore::CampaignStore(CampaignStore&&) noexcept = default;
CampaignStore& CampaignStore::operator=(CampaignStore&&) noexcept = default;
CampaignStore::~CampaignStore() = default;

bool CampaignStore::exists(const fs::path& dir) { return fs::exists(dir / kConfigFile); }

CampaignStore CampaignStore::create(const fs::path& dir, std::string_view source_text,
                                    std::span<const corpus::EngineOutput> outputs,
                                    const CreateOptions& options) {
  if (exists(dir)) {
    throw Error(ErrorCode::InvalidArgument, "campaign already exists in " + dir.string());
  }
  if (!corpus::is_valid_identifier(options.config.id)) {
    throw Error(ErrorCode::InvalidArgument, "invalid campaign id: '" + options.config.id + "'");
  }
  // Validate everything before touching the filesystem.
  const corpus::Corpus corpus =
      corpus::import_corpus(source_text, outputs, options.document_size, options.constructs);
  [[maybe_unused]] Campaign probe(options.config, std::make_shared<const corpus::Corpus>(corpus));

  std::error_code ec;
  fs::create_directories(dir / kOutputsDir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::string> source_lines;
  for (const auto& s : corpus.sentences) source_lines.push_back(s.source_text);
  write_file(dir / kSourceFile, join_lines(source_lines));
  for (std::size_t e = 0; e < corpus.engines.size(); ++e) {
    write_file(dir / kOutputsDir / (corpus.engines[e].id + ".txt"), join_lines(corpus.outputs[e]));
  }
  const bool has_constructs = !options.constructs.empty();
  if (has_constructs) {
    std::vector<std::string> tags;
    for (const auto& s : corpus.sentences) {
      tags.emplace_back(s.construct ? corpus::construct_name(*s.construct) : "");
    }
    write_file(dir / kConstructsFile, join_lines(tags));
  }
  for (const char* f : {kJudgesFile, kJournalFile, kExternalFile}) write_file(dir / f, "");
  // The config file marks the directory as a campaign, so it goes last.
  write_file(dir / kConfigFile, config_json(options.config, corpus, has_constructs).dump(2) + "\n");
  return open(dir);
}

CampaignStore CampaignStore::open(const fs::path& dir) {
  if (!exists(dir)) {
    errno = ENOENT;
    throw io_error("no campaign at", dir / kConfigFile);
  }
  ojson cfg;
  try {
    cfg = ojson::parse(read_file(dir / kConfigFile));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::SchemaViolation, std::string("campaign.json: ") + ex.what());
  }

  CampaignConfig config;
  std::vector<corpus::EngineOutput> outputs;
  std::size_t document_size = 100;
  bool has_constructs = false;
  try {
    config.id = cfg.at("id").get<std::string>();
    config.rng_seed = cfg.at("rng_seed").get<std::uint64_t>();
    config.external_scale.min = cfg.at("external_scale").at("min").get<int>();
    config.external_scale.max = cfg.at("external_scale").at("max").get<int>();
    document_size = cfg.at("document_size").get<std::size_t>();
    has_constructs = cfg.value("constructs", false);
    for (const auto& e : cfg.at("engines")) {
      corpus::Engine engine{e.at("id").get<std::string>(), e.at("name").get<std::string>()};
      if (!corpus::is_valid_identifier(engine.id)) {
        throw Error(ErrorCode::SchemaViolation, "invalid engine id '" + engine.id + "'");
      }
      outputs.push_back({engine, read_file(dir / kOutputsDir / (engine.id + ".txt"))});
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::SchemaViolation, std::string("campaign.json: ") + ex.what());
  }

  std::vector<std::optional<corpus::Construct>> constructs;
  if (has_constructs) constructs = corpus::parse_constructs(read_file(dir / kConstructsFile));
  auto corpus = std::make_shared<const corpus::Corpus>(
      corpus::import_corpus(read_file(dir / kSourceFile), outputs, document_size, constructs));

  Campaign campaign(config, corpus);
  for (auto& judge : decode_lines(dir / kJudgesFile, interchange::decode_judge_line)) {
    campaign.add_judge(std::move(judge));
  }
  std::size_t line_no = 0;
  for (const auto& rec : read_journal(dir / kJournalFile)) {
    ++line_no;
    try {
      campaign.apply(rec);
    } catch (const Error& e) {
      Error wrapped(ErrorCode::SchemaViolation,
                    std::string("journal record ") + std::to_string(line_no) + ": " + e.what());
      wrapped.line = line_no;
      throw wrapped;
    }
  }
  for (const auto& rec : decode_lines(dir / kExternalFile, interchange::decode_external_line)) {
    campaign.apply(rec);
  }

  auto state = std::make_unique<State>();
  state->dir = dir;
  state->current = std::make_shared<const Campaign>(std::move(campaign));
  state->judges = AppendFile(dir / kJudgesFile);
  state->journal = AppendFile(dir / kJournalFile);
  state->external = AppendFile(dir / kExternalFile);
  return CampaignStore(std::move(state));
}

const fs::path& CampaignStore::dir() const { return state_->dir; }

std::shared_ptr<const Campaign> CampaignStore::snapshot() const { return state_->load(); }

Judge CampaignStore::add_judge(Judge judge) {
  std::lock_guard write(state_->write_mu);
  Campaign next = *state_->load();
  const Judge added = next.add_judge(std::move(judge));
  state_->judges.append(interchange::encode_judge_line(added) + "\n");
  state_->publish(std::move(next));
  return added;
}

Judge CampaignStore::add_judge_named(std::string display_name) {
  std::lock_guard write(state_->write_mu);
  Campaign next = *state_->load();
  std::size_t n = next.judges().size() + 1;
  while (next.has_judge("J" + std::to_string(n))) ++n;
  const Judge added = next.add_judge(Judge{"J" + std::to_string(n), std::move(display_name)});
  state_->judges.append(interchange::encode_judge_line(added) + "\n");
  state_->publish(std::move(next));
  return added;
}

AnnotationRecord CampaignStore::record_annotation(std::string_view judge_id,
                                                  std::size_t sentence,
                                                  std::string_view engine_id,
                                                  const rubric::AnnotationVector& vector) {
  std::lock_guard write(state_->write_mu);
  Campaign next = *state_->load();
  auto rec = next.prepare_annotation(judge_id, sentence, engine_id, vector);
  state_->journal.append(interchange::encode_journal_line(rec) + "\n");
  next.apply(rec);
  state_->publish(std::move(next));
  return rec;
}

std::optional<AnnotationRecord> CampaignStore::record_annotation_if(
    std::string_view judge_id, std::size_t sentence, std::string_view engine_id,
    const rubric::AnnotationVector& vector, std::int64_t expected_revision) {
  std::lock_guard write(state_->write_mu);
  Campaign next = *state_->load();
  auto rec = next.prepare_annotation(judge_id, sentence, engine_id, vector);
  if (rec.revision != expected_revision + 1) return std::nullopt;
  state_->journal.append(interchange::encode_journal_line(rec) + "\n");
  next.apply(rec);
  state_->publish(std::move(next));
  return rec;
}

std::vector<AnnotationRecord> CampaignStore::record_annotations(
    std::span<const AnnotationSubmission> batch) {
  std::lock_guard write(state_->write_mu);
  Campaign next = *state_->load();
  std::vector<AnnotationRecord> records;
  records.reserve(batch.size());
  std::string lines;
  const std::string now = utc_timestamp();
  for (const auto& sub : batch) {
    auto rec = next.prepare_annotation(sub.judge_id, sub.sentence, sub.engine_id, sub.vector, now);
    next.apply(rec);
    lines += interchange::encode_journal_line(rec);
    lines += '\n';
    records.push_back(std::move(rec));
  }
  state_->journal.append(lines);
  state_->publish(std::move(next));
  return records;
}

ExternalScoreRecord CampaignStore::record_external_score(std::size_t sentence,
                                                         std::string_view engine_id,
                                                         Measure measure, int level) {
  std::lock_guard write(state_->write_mu);
  Campaign next = *state_->load();
  auto rec = next.prepare_external_score(sentence, engine_id, measure, level);
  state_->external.append(interchange::encode_external_line(rec) + "\n");
  next.apply(rec);
  state_->publish(std::move(next));
  return rec;
}

std::size_t CampaignStore::import_annotations_csv(std::string_view text) {
  std::lock_guard write(state_->write_mu);
  Campaign next = *state_->load();
  const auto rows = interchange::parse_annotations_csv(next, text);
  std::string judge_lines;
  std::string journal_lines;
  const std::string now = utc_timestamp();
  for (const auto& row : rows) {
    if (!next.has_judge(row.judge_id)) {
      judge_lines += interchange::encode_judge_line(next.add_judge({row.judge_id, row.judge_id}));
      judge_lines += '\n';
    }
    auto rec = next.prepare_annotation(row.judge_id, row.sentence, row.engine_id, row.vector, now);
    next.apply(rec);
    journal_lines += interchange::encode_journal_line(rec);
    journal_lines += '\n';
  }
  state_->judges.append(judge_lines);
  state_->journal.append(journal_lines);
  state_->publish(std::move(next));
  return rows.size();
}

std::vector<ExternalScoreRecord> CampaignStore::record_external_scores(
    std::span<const ExternalSubmission> batch) {
  std::lock_guard write(state_->write_mu);
  Campaign next = *state_->load();
  std::vector<ExternalScoreRecord> records;
  records.reserve(batch.size());
  std::string lines;
  const std::string now = utc_timestamp();
  for (const auto& row : batch) {
    auto rec = next.prepare_external_score(row.sentence, row.engine_id, row.measure, row.level, now);
    next.apply(rec);
    lines += interchange::encode_external_line(rec);
    lines += '\n';
    records.push_back(std::move(rec));
  }
  state_->external.append(lines);
  state_->publish(std::move(next));
  return records;
}

std::size_t CampaignStore::import_external_csv(std::string_view text,
                                               std::optional<Measure> measure) {
  const auto rows = interchange::parse_external_csv(*snapshot(), text, measure);
  return record_external_scores(rows).size();
}

}  // namespace heval
