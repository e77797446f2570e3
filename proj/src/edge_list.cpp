#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "csp/errors.hpp"
#include "csp/graph.hpp"

namespace csp {

namespace {

// Splits on spaces/tabs (or commas when `comma` is set), ignoring empty fields.
std::vector<std::string_view> split_fields(std::string_view line, bool comma) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [comma](char c) { return c == ' ' || c == '\t' || c == '\r' || (comma && c == ','); };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

}  // namespace

WeightedGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  bool have_header = false;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto fields = split_fields(line, false);
    if (!have_header) {
      if (fields.size() != 2 || !parse_number(fields[0], n) || !parse_number(fields[1], m))
        throw ParseError(line_no, "expected header \"n m\"");
      if (n > UINT32_MAX) throw ParseError(line_no, "node count exceeds 32-bit id range");
      have_header = true;
      edges.reserve(m);
      continue;
    }
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    double w = 0.0;
    if (fields.size() != 3 || !parse_number(fields[0], u) || !parse_number(fields[1], v) ||
        !parse_number(fields[2], w))
      throw ParseError(line_no, "expected \"u v w\"");
    if (u >= n || v >= n) throw ParseError(line_no, "node id outside [0, " + std::to_string(n) + ")");
    if (u == v) throw ParseError(line_no, "self-loop at node " + std::to_string(u));
    if (!std::isfinite(w) || w < 0.0) throw ParseError(line_no, "edge weight must be finite and non-negative");
    if (edges.size() == m) throw ParseError(line_no, "more edge lines than the header's m = " + std::to_string(m));
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), w});
  }
  if (!have_header) throw ParseError(0, "empty edge list");
  if (edges.size() != m)
    throw ParseError(line_no, "header declares " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
  try {
    return WeightedGraph::from_edges(n, std::move(edges));
  } catch (const DomainError& e) {
    throw ParseError(0, e.what());
  }
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << ' ' << format_double(e.w) << '\n';
}

WeightedGraph read_edge_list_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return read_edge_list(in);
}

void write_edge_list_file(const std::filesystem::path& path, const WeightedGraph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_edge_list(out, g);
}

Partition read_partition(std::istream& in, std::size_t n) {
  std::vector<std::int32_t> assignment(n, Partition::kUnassigned);
  std::vector<char> seen(n, 0);
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto fields = split_fields(line, true);
    std::uint64_t node = 0;
    std::int64_t part = 0;
    const bool ok = fields.size() == 2 && parse_number(fields[0], node) && parse_number(fields[1], part);
    if (!ok && first) {
      first = false;
      continue;  // header
    }
    first = false;
    if (!ok) throw ParseError(line_no, "expected \"node,part\"");
    if (node >= n) throw ParseError(line_no, "node id outside [0, " + std::to_string(n) + ")");
    if (seen[node]) throw ParseError(line_no, "node " + std::to_string(node) + " listed twice");
    if (part < Partition::kUnassigned || part > INT32_MAX) throw ParseError(line_no, "invalid part id");
    seen[node] = 1;
    assignment[node] = static_cast<std::int32_t>(part);
  }
  return Partition::from_labels(std::move(assignment));
}

void write_partition(std::ostream& out, const Partition& p, std::string_view header) {
  if (!header.empty()) out << header << '\n';
  for (std::size_t v = 0; v < p.node_count(); ++v) out << v << ',' << p[v] << '\n';
}

Partition read_partition_file(const std::filesystem::path& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return read_partition(in, n);
}

void write_partition_file(const std::filesystem::path& path, const Partition& p, std::string_view header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_partition(out, p, header);
}

}  // namespace csp
