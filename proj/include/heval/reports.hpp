#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "heval/campaign.hpp"

namespace heval::reports {

enum class ReportKind { System, Documents, Ranking, Agreement, Correlation };
enum class ReportFormat { Csv, Json };

std::string_view report_kind_name(ReportKind kind);
ReportKind parse_report_kind(std::string_view text);  // InvalidArgument
ReportFormat parse_report_format(std::string_view text);

struct ReportRequest {
  ReportKind kind = ReportKind::System;
  /// Judges to include; empty means every registered judge. Agreement uses
  /// the first two (or the first two registered judges).
  std::vector<std::string> judges;
  /// Engine subset; empty means all engines.
  std::vector<std::string> subset;
};

/// Renders one report. Column layouts:
///   system       judge,engine,score
///   documents    doc,judge,engine,score
///   ranking      judge,engine,count
///   agreement    scope,engine,count,total,percentage
///   correlation  judge,engine,measure,n,r,ci_low,ci_high
/// Scores, r and interval ends carry 4 decimals, percentages 2. Output is
/// a pure function of the campaign state and the request.
std::string render_report(std::shared_ptr<const Campaign> campaign, const ReportRequest& request,
                          ReportFormat format);

/// Splits "E3,E4,E5" into ids, dropping empty items.
std::vector<std::string> split_list(std::string_view text);

}  // namespace heval::reports
