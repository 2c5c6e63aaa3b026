#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "ssm/graph.hpp"
#include "ssm/stream.hpp"

namespace ssm {

/// Malformed graph text. `line` is 1-based, 0 when not tied to a line.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Text format:
//   <n_a> <n_b> <m>
//   <a> <b>          (m lines, 0-indexed, file order is stream order)
// Lines starting with '#' are comments.

BipartiteGraph read_graph(std::istream& in);
BipartiteGraph read_graph_file(const std::filesystem::path& path);

void write_graph(std::ostream& out, const BipartiteGraph& g);
void write_graph_file(const std::filesystem::path& path, const BipartiteGraph& g);

/// Writes one full pass of a source without materialising it.
void write_source(std::ostream& out, const EdgeSource& source);
void write_source_file(const std::filesystem::path& path, const EdgeSource& source);

}  // namespace ssm
