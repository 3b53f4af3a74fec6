#include "heval/reports.hpp"

#include <cstdio>

#include <json.hpp>

#include "heval/analytics.hpp"
#include "heval/error.hpp"
#include "heval/interchange.hpp"
#include "heval/stats.hpp"

namespace heval::reports {

namespace {

using ojson = nlohmann::ordered_json;

struct Cell {
  std::string text;  // CSV form
  ojson json;        // JSON form
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  ojson extra = ojson::object();
};

Cell text_cell(std::string s) {
  ojson j = s;
  return {std::move(s), std::move(j)};
}

Cell int_cell(std::int64_t v) { return {std::to_string(v), v}; }

Cell score_cell(const Rational& v, int decimals) {
  return {format_fixed(v, decimals), to_double(v)};
}

Cell real_cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return {buf, v};
}

Cell empty_cell() { return {"", nullptr}; }

std::vector<std::string> selected_judges(const Campaign& campaign,
                                         const std::vector<std::string>& requested) {
  std::vector<std::string> out;
  if (requested.empty()) {
    for (const auto& j : campaign.judges()) out.push_back(j.id);
  } else {
    for (const auto& id : requested) out.push_back(campaign.judge(id).id);
  }
  return out;
}

Table system_table(const analytics::CampaignView& view, const std::vector<std::string>& judges) {
  Table t{{"judge", "engine", "score"}, {}, ojson::object()};
  for (const auto& judge : judges) {
    const auto scores = analytics::system_scores(analytics::score_matrix(view, judge), view);
    for (const auto& engine : view.engines()) {
      auto it = scores.find(engine);
      if (it == scores.end()) continue;
      t.rows.push_back({text_cell(judge), text_cell(engine), score_cell(it->second, 4)});
    }
  }
  return t;
}

Table documents_table(const analytics::CampaignView& view,
                      const std::vector<std::string>& judges) {
  Table t{{"doc", "judge", "engine", "score"}, {}, ojson::object()};
  std::vector<std::map<std::pair<int, std::string>, Rational>> per_judge;
  for (const auto& judge : judges) {
    per_judge.push_back(analytics::document_scores(analytics::score_matrix(view, judge), view));
  }
  const int documents = static_cast<int>(view.campaign().corpus().document_count());
  for (int doc = 1; doc <= documents; ++doc) {
    for (std::size_t j = 0; j < judges.size(); ++j) {
      for (const auto& engine : view.engines()) {
        auto it = per_judge[j].find({doc, engine});
        if (it == per_judge[j].end()) continue;
        t.rows.push_back(
            {int_cell(doc), text_cell(judges[j]), text_cell(engine), score_cell(it->second, 4)});
      }
    }
  }
  return t;
}

Table ranking_table(const analytics::CampaignView& view, const std::vector<std::string>& judges) {
  Table t{{"judge", "engine", "count"}, {}, ojson::object()};
  ojson excluded = ojson::object();
  for (const auto& judge : judges) {
    const auto table = analytics::rank_sentences(analytics::score_matrix(view, judge),
                                                 view.engines());
    for (const auto& [engine, count] : analytics::highest_rank_counts(table)) {
      t.rows.push_back(
          {text_cell(judge), text_cell(engine), int_cell(static_cast<std::int64_t>(count))});
    }
    excluded[judge] = table.excluded;
  }
  t.extra["excluded"] = std::move(excluded);
  return t;
}

Table agreement_table(const analytics::CampaignView& view,
                      const std::vector<std::string>& judges) {
  if (judges.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "agreement needs two judges");
  }
  Table t{{"scope", "engine", "count", "total", "percentage"}, {}, ojson::object()};
  const auto full_a =
      analytics::rank_sentences(analytics::score_matrix(view, judges[0]), view.engines());
  const auto full_b =
      analytics::rank_sentences(analytics::score_matrix(view, judges[1]), view.engines());
  const auto [a, b] = stats::common_sentences(full_a, full_b);
  auto push = [&](std::string scope, std::string engine, const stats::AgreementResult& r) {
    t.rows.push_back({text_cell(std::move(scope)),
                      engine.empty() ? empty_cell() : text_cell(std::move(engine)),
                      int_cell(static_cast<std::int64_t>(r.count)),
                      int_cell(static_cast<std::int64_t>(r.total)),
                      score_cell(r.percentage(), 2)});
  };
  push("highest_rank", "", stats::highest_rank_agreement(a, b));
  for (const auto& engine : view.engines()) {
    push("engine_rank", engine, stats::enginewise_rank_agreement(a, b, engine));
  }
  t.extra["judges"] = {judges[0], judges[1]};
  return t;
}

Table correlation_table(const analytics::CampaignView& view,
                        const std::vector<std::string>& judges) {
  Table t{{"judge", "engine", "measure", "n", "r", "ci_low", "ci_high"}, {}, ojson::object()};
  ojson status = ojson::array();
  for (Measure measure : {Measure::Adequacy, Measure::Fluency}) {
    bool any = false;
    for (const auto& [key, rec] : view.campaign().external_scores()) {
      any = any || key.measure == measure;
    }
    if (!any) continue;
    for (const auto& judge : judges) {
      for (const auto& [engine, r] : stats::heval_vs_external(view, judge, measure)) {
        std::vector<Cell> row{text_cell(judge), text_cell(engine),
                              text_cell(std::string(measure_name(measure))),
                              int_cell(static_cast<std::int64_t>(r.n))};
        if (r.has_r()) {
          row.push_back(real_cell(r.r));
          row.push_back(real_cell(r.ci_low));
          row.push_back(real_cell(r.ci_high));
        } else {
          row.insert(row.end(), {empty_cell(), empty_cell(), empty_cell()});
        }
        t.rows.push_back(std::move(row));
        status.push_back(std::string(stats::correlation_status_name(r.status)));
      }
    }
  }
  t.extra["level"] = 0.95;
  t.extra["status"] = std::move(status);
  return t;
}

std::string render_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ',';
    out += t.columns[c];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += interchange::csv_field(row[c].text);
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const Table& t, ReportKind kind, const analytics::CampaignView& view) {
  ojson j;
  j["kind"] = report_kind_name(kind);
  j["campaign"] = view.campaign().config().id;
  j["engines"] = view.engines();
  ojson rows = ojson::array();
  for (const auto& row : t.rows) {
    ojson obj = ojson::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[t.columns[c]] = row[c].json;
    // Presentation strings alongside the exact numbers.
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c].json.is_number_float()) obj[t.columns[c] + "_text"] = row[c].text;
    }
    rows.push_back(std::move(obj));
  }
  j["rows"] = std::move(rows);
  for (const auto& [key, value] : t.extra.items()) j[key] = value;
  return j.dump(2) + "\n";
}

}  // namespace

std::string_view report_kind_name(ReportKind kind) {
  switch (kind) {
    case ReportKind::System: return "system";
    case ReportKind::Documents: return "documents";
    case ReportKind::Ranking: return "ranking";
    case ReportKind::Agreement: return "agreement";
    case ReportKind::Correlation: return "correlation";
  }
  return "";
}

ReportKind parse_report_kind(std::string_view text) {
  for (ReportKind k : {ReportKind::System, ReportKind::Documents, ReportKind::Ranking,
                       ReportKind::Agreement, ReportKind::Correlation}) {
    if (report_kind_name(k) == text) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown report kind: " + std::string(text));
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "json") return ReportFormat::Json;
  throw Error(ErrorCode::InvalidArgument, "unknown report format: " + std::string(text));
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto item = text.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.emplace_back(item);
    start = end + 1;
  }
  return out;
}

std::string render_report(std::shared_ptr<const Campaign> campaign, const ReportRequest& request,
                          ReportFormat format) {
  const auto view = request.subset.empty()
                        ? analytics::full_view(campaign)
                        : analytics::subset_view(campaign, request.subset);
  const auto judges = selected_judges(*campaign, request.judges);
  Table table;
  switch (request.kind) {
    case ReportKind::System: table = system_table(view, judges); break;
    case ReportKind::Documents: table = documents_table(view, judges); break;
    case ReportKind::Ranking: table = ranking_table(view, judges); break;
    case ReportKind::Agreement: table = agreement_table(view, judges); break;
    case ReportKind::Correlation: table = correlation_table(view, judges); break;
  }
  return format == ReportFormat::Csv ? render_csv(table) : render_json(table, request.kind, view);
}

}  // namespace heval::reports
