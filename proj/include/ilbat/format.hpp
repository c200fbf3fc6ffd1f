#pragma once

// NET and INC text formats.
//
//   # comment
//   nodes 4
//   arc 1 2 0.9
//   arc 1 3 0.9
//
// INC files use the same arc lines without the `nodes` header. Arc ids follow
// file order; node ids are positive integers.

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_set>
#include <vector>

#include "ilbat/error.hpp"
#include "ilbat/network.hpp"

namespace ilbat {

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos)
    line = line.substr(0, hash);
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    if (i == line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
      ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

inline NodeId parse_node(const Token& tok, std::size_t line) {
  NodeId value = 0;
  const char* end = tok.text.data() + tok.text.size();
  auto [ptr, ec] = std::from_chars(tok.text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError(line, tok.column,
                     "expected a node id, got '" + std::string(tok.text) + "'");
  if (value == 0) throw ParseError(line, tok.column, "node ids must be positive");
  return value;
}

inline double parse_probability(const Token& tok, std::size_t line) {
  double value = 0.0;
  const char* end = tok.text.data() + tok.text.size();
  auto [ptr, ec] = std::from_chars(tok.text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError(line, tok.column,
                     "expected a probability, got '" + std::string(tok.text) + "'");
  if (!(value >= 0.0 && value <= 1.0))
    throw ParseError(line, tok.column, "probability outside [0, 1]");
  return value;
}

struct ArcLine {
  ArcSpec spec;
  std::size_t line;
  std::vector<Token> tokens;
};

inline ArcLine parse_arc(std::vector<Token> tokens, std::size_t line) {
  if (tokens.size() != 4)
    throw ParseError(line, tokens.front().column,
                     "expected 'arc <u> <v> <p>'");
  ArcLine out{{}, line, std::move(tokens)};
  out.spec.u = parse_node(out.tokens[1], line);
  out.spec.v = parse_node(out.tokens[2], line);
  out.spec.p = parse_probability(out.tokens[3], line);
  return out;
}

inline std::uint64_t unordered_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t{a} << 32) | b;
}

template <class Visit>
void for_each_line(std::string_view text, Visit visit) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    auto tokens = tokenize(line);
    if (!tokens.empty()) visit(std::move(tokens), line_no);
  }
}

inline std::string format_probability(double p) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p);
  return std::string(buf, ptr);
}

}  // namespace detail

inline Network parse_network(std::string_view text) {
  NodeId node_count = 0;
  bool have_header = false;
  std::vector<ArcSpec> arcs;
  std::unordered_set<std::uint64_t> pairs;

  detail::for_each_line(text, [&](std::vector<detail::Token> tokens,
                                  std::size_t line) {
    const auto& head = tokens.front();
    if (head.text == "nodes") {
      if (have_header) throw ParseError(line, head.column, "duplicate 'nodes' line");
      if (tokens.size() != 2)
        throw ParseError(line, head.column, "expected 'nodes <n>'");
      node_count = detail::parse_node(tokens[1], line);
      if (node_count < 2)
        throw ParseError(line, tokens[1].column,
                         "source and sink missing: need at least 2 nodes");
      have_header = true;
      return;
    }
    if (head.text != "arc")
      throw ParseError(line, head.column,
                       "unknown directive '" + std::string(head.text) + "'");
    if (!have_header)
      throw ParseError(line, head.column, "expected 'nodes <n>' before arcs");
    auto arc = detail::parse_arc(std::move(tokens), line);
    for (int k : {1, 2}) {
      const NodeId id = k == 1 ? arc.spec.u : arc.spec.v;
      if (id > node_count)
        throw ParseError(line, arc.tokens[k].column,
                         "node " + std::to_string(id) + " outside 1.." +
                             std::to_string(node_count));
    }
    if (arc.spec.u == arc.spec.v)
      throw ParseError(line, arc.tokens[1].column, "self-loop");
    if (!pairs.insert(detail::unordered_key(arc.spec.u, arc.spec.v)).second)
      throw ParseError(line, arc.tokens[0].column, "parallel arc");
    arcs.push_back(arc.spec);
  });

  if (!have_header)
    throw ParseError(1, 1, "source and sink missing: no 'nodes <n>' line");
  return Network::create(node_count, arcs);
}

/// Parses an INC file. Simplicity against the target network is checked
/// later, by Network::bind.
inline IncrementProcess parse_increment(std::string_view text) {
  IncrementProcess process;
  detail::for_each_line(text, [&](std::vector<detail::Token> tokens,
                                  std::size_t line) {
    const auto& head = tokens.front();
    if (head.text != "arc")
      throw ParseError(line, head.column,
                       "unknown directive '" + std::string(head.text) + "'");
    process.arcs.push_back(detail::parse_arc(std::move(tokens), line).spec);
  });
  return process;
}

inline std::string serialize_network(const Network& net) {
  // Only original networks round-trip: increment nodes may have ids > n.
  std::string out = "nodes " + std::to_string(net.sink()) + "\n";
  for (const Arc& a : net.arcs())
    out += "arc " + std::to_string(a.u) + " " + std::to_string(a.v) + " " +
           detail::format_probability(a.p) + "\n";
  return out;
}

inline std::string serialize_increment(const IncrementProcess& process) {
  std::string out;
  for (const ArcSpec& a : process.arcs)
    out += "arc " + std::to_string(a.u) + " " + std::to_string(a.v) + " " +
           detail::format_probability(a.p) + "\n";
  return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace ilbat
