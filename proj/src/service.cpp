#include "heval/service.hpp"

#include <cstdio>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>

#include <httplib.h>
#include <json.hpp>

#include "heval/blinding.hpp"
#include "heval/error.hpp"
#include "heval/interchange.hpp"
#include "heval/reports.hpp"
#include "heval/store.hpp"

namespace fs = std::filesystem;

namespace heval::service {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kJson = "application/json";

struct HttpError {
  int status;
  std::string code;
  std::string message;
};

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownJudge:
    case ErrorCode::UnknownSentence:
    case ErrorCode::UnknownEngine:
      return 404;
    case ErrorCode::Io:
      return 500;
    default:
      return 400;
  }
}

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message, const Error* detail = nullptr) {
  ojson err;
  err["code"] = code;
  err["message"] = message;
  if (detail) {
    if (detail->ordinal) err["ordinal"] = *detail->ordinal;
    if (detail->value) err["value"] = *detail->value;
    if (detail->line) err["line"] = *detail->line;
  }
  ojson body;
  body["error"] = std::move(err);
  res.status = status;
  res.set_content(body.dump() + "\n", kJson);
}

void send_json(httplib::Response& res, int status, const ojson& body) {
  res.status = status;
  res.set_content(body.dump() + "\n", kJson);
}

ojson parse_body(const httplib::Request& req) {
  try {
    auto j = ojson::parse(req.body);
    if (!j.is_object()) throw HttpError{400, "SchemaViolation", "body must be a JSON object"};
    return j;
  } catch (const nlohmann::json::exception& ex) {
    throw HttpError{400, "SchemaViolation", std::string("malformed JSON: ") + ex.what()};
  }
}

template <typename T>
T body_field(const ojson& j, const char* name, std::optional<T> fallback = std::nullopt) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) {
    if (fallback) return *fallback;
    throw HttpError{400, "SchemaViolation", std::string("missing field '") + name + "'"};
  }
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw HttpError{400, "SchemaViolation", std::string("field '") + name + "' has the wrong type"};
  }
}

ojson rubric_json() {
  ojson features = ojson::array();
  for (const auto& f : rubric::features()) {
    features.push_back(
        {{"ordinal", f.ordinal}, {"name", f.short_name}, {"description", f.description}});
  }
  ojson scale = ojson::array();
  for (int level = rubric::kMaxLevel; level >= rubric::kMinLevel; --level) {
    scale.push_back({{"level", level}, {"label", rubric::scale_label(level)}});
  }
  return {{"features", std::move(features)}, {"scale", std::move(scale)},
          {"not_applicable", "NA"}};
}

// Opaque assignment token: judge, sentence, blinded position and the
// revision the judge saw, sealed with a keyed check value. The engine is
// recovered server-side from the blinded order, so it never appears.
struct Assignment {
  std::string judge;
  std::size_t sentence = 0;
  std::size_t position = 0;
  std::int64_t base_revision = 0;
};

std::uint64_t seal(std::uint64_t seed, const Assignment& a) {
  std::uint64_t h = mix64(seed ^ 0x6865766c61737367ULL);
  h = mix64(h ^ fnv1a64(a.judge));
  h = mix64(h ^ a.sentence);
  h = mix64(h ^ a.position);
  return mix64(h ^ static_cast<std::uint64_t>(a.base_revision));
}

std::string encode_assignment(std::uint64_t seed, const Assignment& a) {
  char mac[17];
  std::snprintf(mac, sizeof mac, "%016llx", static_cast<unsigned long long>(seal(seed, a)));
  return a.judge + ":" + std::to_string(a.sentence) + ":" + std::to_string(a.position) + ":" +
         std::to_string(a.base_revision) + ":" + mac;
}

std::optional<Assignment> decode_assignment(std::uint64_t seed, const std::string& token) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto end = token.find(':', start);
    parts.push_back(token.substr(start, end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (parts.size() != 5) return std::nullopt;
  try {
    Assignment a{parts[0], std::stoull(parts[1]), std::stoull(parts[2]), std::stoll(parts[3])};
    char mac[17];
    std::snprintf(mac, sizeof mac, "%016llx", static_cast<unsigned long long>(seal(seed, a)));
    if (parts[4] != mac) return std::nullopt;
    return a;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

struct Server::Impl {
  fs::path root;
  httplib::Server http;
  mutable std::mutex campaigns_mu;
  std::map<std::string, std::unique_ptr<CampaignStore>> campaigns;

  explicit Impl(fs::path r) : root(std::move(r)) {
    if (CampaignStore::exists(root)) add(CampaignStore::open(root));
    if (fs::is_directory(root)) {
      std::vector<fs::path> dirs;
      for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory() && CampaignStore::exists(entry.path())) dirs.push_back(entry);
      }
      std::sort(dirs.begin(), dirs.end());
      for (const auto& d : dirs) add(CampaignStore::open(d));
    }
    routes();
  }

  void add(CampaignStore store) {
    const std::string id = store.snapshot()->config().id;
    std::lock_guard lock(campaigns_mu);
    if (campaigns.contains(id)) {
      std::cerr << "warning: duplicate campaign id " << id << " in " << store.dir() << "\n";
      return;
    }
    campaigns.emplace(id, std::make_unique<CampaignStore>(std::move(store)));
  }

  CampaignStore& store(const std::string& id) {
    std::lock_guard lock(campaigns_mu);
    auto it = campaigns.find(id);
    if (it == campaigns.end()) throw HttpError{404, "UnknownCampaign", "unknown campaign " + id};
    return *it->second;
  }

  // Runs a handler, mapping failures onto status codes.
  template <typename F>
  auto guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const HttpError& e) {
        send_error(res, e.status, e.code, e.message);
      } catch (const Error& e) {
        send_error(res, status_for(e.code()), error_code_name(e.code()), e.what(), &e);
      } catch (const std::exception& e) {
        send_error(res, 500, "Internal", e.what());
      }
    };
  }

  void routes() {
    http.Post("/v1/campaigns", guarded([this](const auto& req, auto& res) {
      create_campaign(req, res);
    }));
    http.Post(R"(/v1/campaigns/([^/]+)/judges)", guarded([this](const auto& req, auto& res) {
      auto& s = store(req.matches[1]);
      const ojson body = req.body.empty() ? ojson::object() : parse_body(req);
      const auto name = body_field<std::string>(body, "name", std::string());
      Judge judge;
      if (body.contains("id")) {
        judge = s.add_judge({body_field<std::string>(body, "id"), name});
      } else {
        judge = s.add_judge_named(name);
      }
      send_json(res, 201, {{"judge_id", judge.id}});
    }));
    http.Get(R"(/v1/campaigns/([^/]+)/assignments/next)",
             guarded([this](const auto& req, auto& res) { next_assignment(req, res); }));
    http.Post(R"(/v1/campaigns/([^/]+)/annotations)",
              guarded([this](const auto& req, auto& res) { submit(req, res); }));
    http.Get(R"(/v1/campaigns/([^/]+)/reports/([a-z]+))",
             guarded([this](const auto& req, auto& res) {
               auto& s = store(req.matches[1]);
               reports::ReportRequest request;
               request.kind = reports::parse_report_kind(std::string(req.matches[2]));
               if (req.has_param("judge")) request.judges = reports::split_list(req.get_param_value("judge"));
               if (req.has_param("subset")) request.subset = reports::split_list(req.get_param_value("subset"));
               res.set_content(
                   reports::render_report(s.snapshot(), request, reports::ReportFormat::Json),
                   kJson);
             }));
    http.Get(R"(/v1/campaigns/([^/]+)/export/(annotations|scores))",
             guarded([this](const auto& req, auto& res) {
               auto& s = store(req.matches[1]);
               const auto snap = s.snapshot();
               res.set_content(req.matches[2] == "annotations"
                                   ? interchange::export_annotations_csv(*snap)
                                   : interchange::export_external_csv(*snap),
                               "text/csv");
             }));
  }

  void create_campaign(const httplib::Request& req, httplib::Response& res) {
    const ojson body = parse_body(req);
    CampaignStore::CreateOptions options;
    std::string id = body_field<std::string>(body, "id", std::string());
    {
      std::lock_guard lock(campaigns_mu);
      if (id.empty()) {
        std::size_t n = campaigns.size() + 1;
        while (campaigns.contains("campaign-" + std::to_string(n)) ||
               fs::exists(root / ("campaign-" + std::to_string(n)))) {
          ++n;
        }
        id = "campaign-" + std::to_string(n);
      }
      if (campaigns.contains(id)) throw HttpError{409, "DuplicateCampaign", "campaign exists: " + id};
    }
    if (!corpus::is_valid_identifier(id)) {
      throw HttpError{400, "InvalidArgument", "invalid campaign id '" + id + "'"};
    }
    options.config.id = id;
    options.config.rng_seed = body_field<std::uint64_t>(body, "seed", std::uint64_t{0});
    options.document_size = body_field<std::size_t>(body, "document_size", std::size_t{100});
    if (body.contains("external_scale")) {
      const auto& scale = body["external_scale"];
      options.config.external_scale.min = body_field<int>(scale, "min");
      options.config.external_scale.max = body_field<int>(scale, "max");
    }
    if (body.contains("constructs")) {
      for (const auto& c : body["constructs"]) {
        if (c.is_null()) {
          options.constructs.emplace_back();
        } else {
          options.constructs.emplace_back(corpus::parse_construct(c.get<std::string>()));
        }
      }
    }
    std::vector<corpus::EngineOutput> outputs;
    auto engines = body.find("engines");
    if (engines == body.end() || !engines->is_array()) {
      throw HttpError{400, "SchemaViolation", "'engines' must be an array"};
    }
    for (const auto& e : *engines) {
      const auto eid = body_field<std::string>(e, "id");
      outputs.push_back({{eid, body_field<std::string>(e, "name", eid)},
                         body_field<std::string>(e, "output")});
    }
    const fs::path dir = root / id;
    if (CampaignStore::exists(dir)) {
      throw HttpError{409, "DuplicateCampaign", "campaign directory exists: " + id};
    }
    add(CampaignStore::create(dir, body_field<std::string>(body, "source"), outputs, options));
    send_json(res, 201, {{"campaign_id", id}});
  }

  void next_assignment(const httplib::Request& req, httplib::Response& res) {
    auto& s = store(req.matches[1]);
    if (!req.has_param("judge")) throw HttpError{400, "InvalidArgument", "missing judge parameter"};
    const std::string judge = req.get_param_value("judge");
    const auto snap = s.snapshot();
    snap->judge(judge);
    const auto& corpus = snap->corpus();
    const std::size_t engines = corpus.engines.size();
    const std::size_t total = corpus.sentences.size() * engines;

    std::size_t done = 0;
    const auto& all = snap->annotations();
    for (auto it = all.lower_bound(AnnotationKey{judge, 0, ""});
         it != all.end() && it->first.judge_id == judge; ++it) {
      ++done;
    }

    for (std::size_t sentence = 0; sentence < corpus.sentences.size() && done < total;
         ++sentence) {
      const auto order =
          blinded_permutation(snap->config().rng_seed, judge, sentence, engines);
      for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto& engine = corpus.engines[order[pos]].id;
        const AnnotationKey key{judge, sentence, engine};
        if (snap->find_annotation(key)) continue;
        const Assignment a{judge, sentence, pos, 0};
        ojson body;
        body["assignment_id"] = encode_assignment(snap->config().rng_seed, a);
        body["sentence_index"] = sentence;
        body["source_text"] = corpus.sentences[sentence].source_text;
        body["target_text"] = corpus.output(order[pos], sentence);
        body["progress"] = {{"done", done}, {"total", total}};
        body["rubric"] = rubric_json();
        send_json(res, 200, body);
        return;
      }
    }
    res.status = 204;
  }

  void submit(const httplib::Request& req, httplib::Response& res) {
    auto& s = store(req.matches[1]);
    const ojson body = parse_body(req);
    const auto snap = s.snapshot();
    const auto token = body_field<std::string>(body, "assignment_id");
    const auto assignment = decode_assignment(snap->config().rng_seed, token);
    if (!assignment) throw HttpError{404, "UnknownAssignment", "unknown assignment id"};
    snap->judge(assignment->judge);
    snap->require_sentence(assignment->sentence);
    const auto& corpus = snap->corpus();
    const auto order = blinded_permutation(snap->config().rng_seed, assignment->judge,
                                           assignment->sentence, corpus.engines.size());
    if (assignment->position >= order.size()) {
      throw HttpError{404, "UnknownAssignment", "unknown assignment id"};
    }
    const std::string engine = corpus.engines[order[assignment->position]].id;

    auto scores = body.find("scores");
    if (scores == body.end() || !scores->is_array()) {
      throw HttpError{400, "SchemaViolation", "'scores' must be an array"};
    }
    std::vector<std::optional<int>> raw;
    for (const auto& v : *scores) {
      if (v.is_null()) {
        raw.emplace_back();
      } else if (v.is_number_integer()) {
        raw.emplace_back(v.get<int>());
      } else {
        throw HttpError{400, "SchemaViolation", "scores must be integers or null"};
      }
    }
    const auto vector = rubric::validate_vector(raw);
    const bool overwrite = body_field<bool>(body, "overwrite", false);

    std::optional<AnnotationRecord> rec;
    if (overwrite) {
      rec = s.record_annotation(assignment->judge, assignment->sentence, engine, vector);
    } else {
      rec = s.record_annotation_if(assignment->judge, assignment->sentence, engine, vector,
                                   assignment->base_revision);
      if (!rec) {
        throw HttpError{409, "Superseded",
                        "assignment already has a newer revision; resubmit with overwrite"};
      }
    }
    const auto score = rubric::final_score(rec->vector).value();
    send_json(res, 200,
              {{"revision", rec->revision},
               {"final_score", to_double(score)},
               {"final_score_text", format_fixed(score, 4)}});
  }
};

Server::Server(fs::path root) : impl_(std::make_unique<Impl>(std::move(root))) {}
Server::~Server() = default;

bool Server::listen(const std::string& host, int port) { return impl_->http.listen(host, port); }
int Server::bind_to_any_port(const std::string& host) { return impl_->http.bind_to_any_port(host); }
bool Server::listen_after_bind() { return impl_->http.listen_after_bind(); }
void Server::stop() { impl_->http.stop(); }
void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

std::vector<std::string> Server::campaign_ids() const {
  std::lock_guard lock(impl_->campaigns_mu);
  std::vector<std::string> ids;
  for (const auto& [id, s] : impl_->campaigns) ids.push_back(id);
  return ids;
}

}  // namespace heval::service
