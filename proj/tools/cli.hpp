#pragma once

// Command-line front end. Kept header-only so tests can drive it in-process.
//
//   ilbat compute <net>
//   ilbat run <net> <inc>... [--trace DIR] [--naive] [--format F] [--parallel K]
//   ilbat oracle <net>
//   ilbat version
//
// Exit codes: 0 ok, 1 parse error, 2 cap exceeded, 3 invalid increment.

#include <cstdint>
#include <exception>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ilbat/ilbat.hpp"

namespace ilbat::cli {

enum ExitCode : int { kOk = 0, kParse = 1, kCap = 2, kIncrement = 3 };

struct Output {
  std::string format = "human";
  bool naive = false;
  bool timing = false;
};

inline std::string render(const RunReport& report, const Output& o) {
  const ReportStyle style{o.naive, o.timing};
  if (o.format == "csv") return render_csv(report, style);
  if (o.format == "json") return render_json(report, style);
  return render_human(report, style);
}


inline int run_cli(int argc, const char* const* argv, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Exact two-terminal reliability with incremental arc additions"};
  app.require_subcommand(1);

  Output output;
  std::size_t max_arcs = EngineOptions{}.max_arcs;
  std::size_t oracle_cap = oracle::kDefaultCap;
  std::string net_path;
  std::vector<std::string> inc_paths;
  std::string trace_dir;
  unsigned parallel = 1;
  std::string current_file;  // named in parse errors

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", output.format, "human, csv or json")
        ->check(CLI::IsMember({"human", "csv", "json"}));
    cmd->add_flag("--timing", output.timing, "report wall time per stage");
  };

  auto* compute = app.add_subcommand("compute", "reliability of the original network");
  compute->add_option("network", net_path, "NET file")->required();
  compute->add_option("--max-arcs", max_arcs, "refuse networks with more arcs");
  compute->add_flag("--naive", output.naive, "add the full-BAT baseline column");
  add_format(compute);

  auto* run_cmd = app.add_subcommand("run", "apply increments one after another");
  run_cmd->add_option("network", net_path, "NET file")->required();
  run_cmd->add_option("increments", inc_paths, "INC files, in order");
  run_cmd->add_option("--trace", trace_dir, "write per-stage CSV traces here");
  run_cmd->add_flag("--naive", output.naive, "add the full-BAT baseline column");
  run_cmd->add_option("--parallel", parallel, "worker threads for increments")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--max-arcs", max_arcs, "refuse networks with more arcs");
  add_format(run_cmd);

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force reliability");
  oracle_cmd->add_option("network", net_path, "NET file")->required();
  oracle_cmd->add_option("--max-arcs", oracle_cap, "refuse networks with more arcs");
  add_format(oracle_cmd);

  auto* version = app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (version->parsed()) {
      out << "ilbat " << kVersion << "\n";
      return kOk;
    }

    current_file = net_path;
    const Network net = parse_network(read_text_file(net_path));
    EngineOptions options;
    options.max_arcs = max_arcs;
    options.workers = parallel;

    if (oracle_cmd->parsed()) {
      const auto summary = oracle::brute_force(net, oracle_cap);
      StageResult row;
      row.arc_count = net.arc_count();
      row.reliability = summary.reliability;
      row.vectors_generated = summary.vectors;
      row.infeasible_count = summary.vectors - summary.feasible;
      out << render(make_report({row}, {summary.vectors}), output);
      return kOk;
    }

    std::vector<IncrementProcess> processes;
    for (const auto& path : inc_paths) {
      current_file = path;
      processes.push_back(parse_increment(read_text_file(path)));
    }
    current_file.clear();

    std::unique_ptr<CsvTraceWriter> trace;
    if (!trace_dir.empty()) trace = std::make_unique<CsvTraceWriter>(trace_dir);

    const auto stages = run(net, processes, options, trace.get());
    out << render(make_report(stages, naive_recompute_counts(net, processes)), output);
    return kOk;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kCap;
  } catch (const InvalidIncrement& e) {
    err << "error: invalid increment: " << e.what() << "\n";
    return kIncrement;
  } catch (const ParseError& e) {
    err << "error: " << current_file << ": " << e.what() << "\n";
    return kParse;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }
}

}  // namespace ilbat::cli
