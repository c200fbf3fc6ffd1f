#pragma once

// Per-vector traces as CSV, one file per stage:
//
//   i,j,vector,S,M,T,connected
//   1,4,0000011,{1},{3},{2 4 5},0
//
// i is the producing row of the previous stage (the BAT index on stage 0),
// j the row within this stage, vector lists x1 first, M is the union of the
// middle components.

#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ilbat/engine.hpp"

namespace ilbat {

inline constexpr const char* kTraceHeader = "i,j,vector,S,M,T,connected";

inline std::string format_node_set(const NodeSet& nodes) {
  std::string out = "{";
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (k != 0) out += ' ';
    out += std::to_string(nodes[k]);
  }
  return out + "}";
}

inline std::string format_trace_row(const TraceRow& row, std::span<const NodeId> ids) {
  return std::to_string(row.parent) + "," + std::to_string(row.row) + "," +
         row.vector.to_string() + "," +
         format_node_set(row.partition.source_set(ids)) + "," +
         format_node_set(row.partition.middle_set(ids)) + "," +
         format_node_set(row.partition.sink_set(ids)) + "," +
         (row.connected ? "1" : "0");
}

/// Streams each stage to <dir>/stage_<λ>.csv.
class CsvTraceWriter : public TraceSink {
 public:
  explicit CsvTraceWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  static std::string file_name(std::size_t stage) {
    return "stage_" + std::to_string(stage) + ".csv";
  }

  void begin_stage(std::size_t stage, const Network& net) override {
    ids_.assign(net.node_ids().begin(), net.node_ids().end());
    out_.open(dir_ / file_name(stage), std::ios::binary | std::ios::trunc);
    if (!out_) throw Error("cannot write trace to " + (dir_ / file_name(stage)).string());
    out_ << kTraceHeader << '\n';
  }

  void record(const TraceRow& row) override {
    out_ << format_trace_row(row, ids_) << '\n';
  }

  void end_stage() override { out_.close(); }

 private:
  std::filesystem::path dir_;
  std::vector<NodeId> ids_;
  std::ofstream out_;
};

/// Keeps each stage's CSV text in memory; meant for small runs and tests.
class StringTrace : public TraceSink {
 public:
  void begin_stage(std::size_t stage, const Network& net) override {
    ids_.assign(net.node_ids().begin(), net.node_ids().end());
    current_ = &stages_[stage];
    *current_ = std::string(kTraceHeader) + "\n";
  }

  void record(const TraceRow& row) override {
    *current_ += format_trace_row(row, ids_);
    *current_ += '\n';
  }

  const std::string& stage(std::size_t index) const { return stages_.at(index); }
  std::size_t stage_count() const noexcept { return stages_.size(); }

 private:
  std::map<std::size_t, std::string> stages_;
  std::string* current_ = nullptr;
  std::vector<NodeId> ids_;
};

}  // namespace ilbat
