#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ilbat/engine.hpp"

namespace ilbat {

/// Reliability with 12 significant digits, independent of the C locale.
inline std::string format_reliability(double value) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value,
                                 std::chars_format::general, 12);
  return std::string(buf, ptr);
}

struct ReportRow {
  std::size_t stage = 0;
  std::size_t arcs = 0;
  double reliability = 0.0;
  std::uint64_t infeasible = 0;
  std::uint64_t vectors = 0;
  std::uint64_t naive = 0;
  double seconds = 0.0;
};

struct RunReport {
  std::vector<ReportRow> rows;
  std::uint64_t total_vectors = 0;
  std::uint64_t total_naive = 0;

  double final_reliability() const {
    return rows.empty() ? 0.0 : rows.back().reliability;
  }
};

struct ReportStyle {
  bool naive = false;   // show the full-BAT baseline column
  bool timing = false;  // show wall time; output is then not byte-stable
};

inline RunReport make_report(const std::vector<StageResult>& stages,
                             const std::vector<std::uint64_t>& naive_counts) {
  RunReport report;
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const auto& s = stages[k];
    ReportRow row{s.stage, s.arc_count, s.reliability, s.infeasible_count,
                  s.vectors_generated, k < naive_counts.size() ? naive_counts[k] : 0,
                  s.seconds};
    report.total_vectors += row.vectors;
    report.total_naive += row.naive;
    report.rows.push_back(row);
  }
  return report;
}

namespace detail {

inline void pad(std::string& line, const std::string& cell, std::size_t width) {
  line += cell;
  if (cell.size() < width) line.append(width - cell.size(), ' ');
  line += ' ';
}

inline std::string trim_right(std::string s) {
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

inline std::string format_seconds(double s) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, s * 1e3,
                                 std::chars_format::fixed, 3);
  return std::string(buf, ptr);
}

}  // namespace detail

inline std::string render_human(const RunReport& report, const ReportStyle& style = {}) {
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> head{"stage", "arcs", "reliability", "infeasible", "vectors"};
  if (style.naive) head.push_back("naive");
  if (style.timing) head.push_back("ms");
  table.push_back(head);
  for (const auto& r : report.rows) {
    std::vector<std::string> cells{std::to_string(r.stage), std::to_string(r.arcs),
                                   format_reliability(r.reliability),
                                   std::to_string(r.infeasible),
                                   std::to_string(r.vectors)};
    if (style.naive) cells.push_back(std::to_string(r.naive));
    if (style.timing) cells.push_back(detail::format_seconds(r.seconds));
    table.push_back(cells);
  }
  std::vector<std::string> total{"total", "", "", "", std::to_string(report.total_vectors)};
  if (style.naive) total.push_back(std::to_string(report.total_naive));
  if (style.timing) total.push_back("");
  table.push_back(total);

  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& row : table)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());

  std::string out;
  for (const auto& row : table) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) detail::pad(line, row[c], width[c]);
    out += detail::trim_right(line) + "\n";
  }
  out += "reliability " + format_reliability(report.final_reliability()) + "\n";
  return out;
}

inline std::string render_csv(const RunReport& report, const ReportStyle& style = {}) {
  std::string out = "stage,arcs,reliability,infeasible,vectors";
  if (style.naive) out += ",naive";
  if (style.timing) out += ",ms";
  out += "\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.stage) + "," + std::to_string(r.arcs) + "," +
           format_reliability(r.reliability) + "," + std::to_string(r.infeasible) +
           "," + std::to_string(r.vectors);
    if (style.naive) out += "," + std::to_string(r.naive);
    if (style.timing) out += "," + detail::format_seconds(r.seconds);
    out += "\n";
  }
  out += "total,,,," + std::to_string(report.total_vectors);
  if (style.naive) out += "," + std::to_string(report.total_naive);
  if (style.timing) out += ",";
  return out + "\n";
}

inline std::string render_json(const RunReport& report, const ReportStyle& style = {}) {
  // Numbers go through the same 12-digit rounding as the text formats.
  auto rounded = [](double v) {
    const std::string text = format_reliability(v);
    double out = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), out);
    return out;
  };
  nlohmann::ordered_json stages = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["stage"] = r.stage;
    row["arcs"] = r.arcs;
    row["reliability"] = rounded(r.reliability);
    row["infeasible"] = r.infeasible;
    row["vectors"] = r.vectors;
    if (style.naive) row["naive"] = r.naive;
    if (style.timing) row["ms"] = r.seconds * 1e3;
    stages.push_back(row);
  }
  nlohmann::ordered_json doc;
  doc["stages"] = stages;
  doc["totals"]["vectors"] = report.total_vectors;
  if (style.naive) doc["totals"]["naive"] = report.total_naive;
  doc["reliability"] = rounded(report.final_reliability());
  return doc.dump(2) + "\n";
}

}  // namespace ilbat
