#include "ssm/graph_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace ssm {

FormatError::FormatError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

namespace {

// Parses exactly `count` unsigned decimal fields separated by spaces or tabs.
template <std::size_t N>
bool parse_fields(std::string_view text, std::uint64_t (&out)[N]) {
  const char* p = text.data();
  const char* end = p + text.size();
  for (std::size_t i = 0; i < N; ++i) {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    const auto [next, ec] = std::from_chars(p, end, out[i]);
    if (ec != std::errc{} || next == p) return false;
    p = next;
  }
  while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
  return p == end;
}

bool skippable(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line.empty() || line.front() == '#';
}

}  // namespace

BipartiteGraph read_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::uint64_t header[3] = {0, 0, 0};
  std::vector<Edge> edges;

  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    if (!have_header) {
      if (!parse_fields(line, header)) throw FormatError(line_no, "expected '<n_a> <n_b> <m>'");
      if (header[0] > kNoVertex || header[1] > kNoVertex) {
        throw FormatError(line_no, "vertex count too large");
      }
      have_header = true;
      edges.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(header[2], 1u << 24)));
      continue;
    }
    std::uint64_t ab[2] = {0, 0};
    if (!parse_fields(line, ab)) throw FormatError(line_no, "expected '<a> <b>'");
    if (edges.size() == header[2]) {
      throw FormatError(line_no, "more than the declared " + std::to_string(header[2]) + " edges");
    }
    if (ab[0] >= header[0] || ab[1] >= header[1]) {
      throw FormatError(line_no, "endpoint out of range");
    }
    edges.push_back({static_cast<Vertex>(ab[0]), static_cast<Vertex>(ab[1])});
  }
  if (!have_header) throw FormatError(0, "missing header line");
  if (edges.size() != header[2]) {
    throw FormatError(0, "declared " + std::to_string(header[2]) + " edges but found " +
                             std::to_string(edges.size()));
  }
  try {
    return BipartiteGraph(static_cast<Vertex>(header[0]), static_cast<Vertex>(header[1]),
                          std::move(edges));
  } catch (const GraphError& e) {
    throw FormatError(0, e.what());
  }
}

BipartiteGraph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(0, "cannot open " + path.string());
  return read_graph(in);
}

namespace {

void write_header(std::ostream& out, Vertex n_a, Vertex n_b, std::uint64_t m) {
  out << n_a << ' ' << n_b << ' ' << m << '\n';
}

void write_edges(std::ostream& out, std::span<const Edge> edges) {
  // Two 10-digit ids, a space and a newline always fit.
  std::array<char, 32> buf{};
  for (const Edge e : edges) {
    char* p = std::to_chars(buf.data(), buf.data() + 12, e.a).ptr;
    *p++ = ' ';
    p = std::to_chars(p, p + 12, e.b).ptr;
    *p++ = '\n';
    out.write(buf.data(), p - buf.data());
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_graph(std::ostream& out, const BipartiteGraph& g) {
  write_header(out, g.n_a(), g.n_b(), g.edge_count());
  write_edges(out, g.edges());
}

void write_graph_file(const std::filesystem::path& path, const BipartiteGraph& g) {
  auto out = open_out(path);
  write_graph(out, g);
}

void write_source(std::ostream& out, const EdgeSource& source) {
  write_header(out, source.n_a(), source.n_b(), source.edge_count());
  std::vector<Edge> scratch(1 << 14);
  auto cursor = source.cursor();
  for (auto batch = cursor->next(scratch); !batch.empty(); batch = cursor->next(scratch)) {
    write_edges(out, batch);
  }
}

void write_source_file(const std::filesystem::path& path, const EdgeSource& source) {
  auto out = open_out(path);
  write_source(out, source);
}

}  // namespace ssm
