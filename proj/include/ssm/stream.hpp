#pragma once

#include <concepts>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "ssm/graph.hpp"

namespace ssm {

class StreamError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Counts retained edges (matching, semi-matching and path entries) of a run.
class SpaceAccountant {
 public:
  void store(std::uint64_t edges = 1) noexcept {
    current_ += edges;
    if (current_ > peak_) peak_ = current_;
  }
  /// Throws StreamError if more is released than is stored.
  void release(std::uint64_t edges);

  std::uint64_t current() const noexcept { return current_; }
  std::uint64_t peak() const noexcept { return peak_; }

 private:
  std::uint64_t current_ = 0;
  std::uint64_t peak_ = 0;
};

inline std::uint64_t report_space(const SpaceAccountant& acct) noexcept { return acct.peak(); }

/// Sequential reader over one traversal of an edge source.
class EdgeCursor {
 public:
  virtual ~EdgeCursor() = default;
  /// Next run of edges, either a view into the source's own storage or a
  /// prefix of `scratch`. Empty once the traversal is exhausted.
  virtual std::span<const Edge> next(std::span<Edge> scratch) = 0;
};

/// Anything that can enumerate a bipartite edge list, in a fixed order, any
/// number of times. Implementations must be safe to traverse concurrently.
class EdgeSource {
 public:
  virtual ~EdgeSource() = default;
  virtual Vertex n_a() const = 0;
  virtual Vertex n_b() const = 0;
  virtual std::uint64_t edge_count() const = 0;
  virtual std::unique_ptr<EdgeCursor> cursor() const = 0;
};

/// Edge source over a materialised graph; keeps a reference to it.
class GraphSource final : public EdgeSource {
 public:
  explicit GraphSource(const BipartiteGraph& g) : graph_(&g) {}
  Vertex n_a() const override { return graph_->n_a(); }
  Vertex n_b() const override { return graph_->n_b(); }
  std::uint64_t edge_count() const override { return graph_->edge_count(); }
  std::unique_ptr<EdgeCursor> cursor() const override;

 private:
  const BipartiteGraph* graph_;
};

/// Pass-counting stream. Edges are only yielded in source order, a pass ends
/// when next_batch() first returns an empty span, and a new pass must be
/// requested with rewind(). Single consumer.
class EdgeStream {
 public:
  explicit EdgeStream(std::shared_ptr<const EdgeSource> source, std::size_t batch_size = 4096);

  Vertex n_a() const noexcept { return n_a_; }
  Vertex n_b() const noexcept { return n_b_; }
  std::uint64_t edge_count() const noexcept { return source_->edge_count(); }

  std::span<const Edge> next_batch();

  /// Starts the next pass. Throws StreamError if the current pass is only
  /// partially consumed; a no-op at the start of a pass.
  void rewind();

  bool at_pass_start() const noexcept { return position_ == 0 && !pass_done_; }
  bool pass_complete() const noexcept { return pass_done_; }
  std::uint32_t passes_used() const noexcept { return passes_; }
  std::uint64_t position() const noexcept { return position_; }

  SpaceAccountant& space() noexcept { return space_; }
  const SpaceAccountant& space() const noexcept { return space_; }

 private:
  std::shared_ptr<const EdgeSource> source_;
  std::unique_ptr<EdgeCursor> cursor_;
  std::vector<Edge> scratch_;
  Vertex n_a_;
  Vertex n_b_;
  std::uint64_t position_ = 0;
  std::uint32_t passes_ = 0;
  bool pass_done_ = false;
  SpaceAccountant space_;
};

EdgeStream open_stream(std::shared_ptr<const EdgeSource> source);
/// The graph must outlive the stream.
EdgeStream open_stream(const BipartiteGraph& g);

/// Membership bitmap over both vertex sides.
class VertexMask {
 public:
  VertexMask() = default;
  VertexMask(Vertex n_a, Vertex n_b, bool value = false)
      : a_(n_a, value ? 1 : 0), b_(n_b, value ? 1 : 0) {}

  static VertexMask all(Vertex n_a, Vertex n_b) { return {n_a, n_b, true}; }
  static VertexMask none(Vertex n_a, Vertex n_b) { return {n_a, n_b, false}; }

  void set(Side s, Vertex v, bool value = true) {
    (s == Side::A ? a_ : b_)[v] = value ? 1 : 0;
  }
  bool contains(Side s, Vertex v) const noexcept {
    return (s == Side::A ? a_ : b_)[v] != 0;
  }
  /// Edge lies in the induced subgraph on the kept vertices.
  bool keeps(Edge e) const noexcept { return a_[e.a] != 0 && b_[e.b] != 0; }

  Vertex n_a() const noexcept { return static_cast<Vertex>(a_.size()); }
  Vertex n_b() const noexcept { return static_cast<Vertex>(b_.size()); }

 private:
  std::vector<std::uint8_t> a_;
  std::vector<std::uint8_t> b_;
};

/// Substream of the edges of the induced subgraph G[keep]. Reading it
/// consumes the parent's pass.
class FilteredView {
 public:
  FilteredView(EdgeStream& parent, VertexMask keep);

  Vertex n_a() const noexcept { return parent_->n_a(); }
  Vertex n_b() const noexcept { return parent_->n_b(); }
  bool keeps(Edge e) const noexcept { return keep_.keeps(e); }

  std::span<const Edge> next_batch();
  bool at_pass_start() const noexcept { return parent_->at_pass_start(); }

  SpaceAccountant& space() noexcept { return parent_->space(); }

 private:
  EdgeStream* parent_;
  VertexMask keep_;
  std::vector<Edge> buffer_;
};

FilteredView filtered_view(EdgeStream& parent, VertexMask keep);

/// Readers the streaming algorithms accept. Algorithms never see a graph.
template <class R>
concept EdgeReader = requires(R& r) {
  { r.next_batch() } -> std::same_as<std::span<const Edge>>;
  { r.n_a() } -> std::convertible_to<Vertex>;
  { r.n_b() } -> std::convertible_to<Vertex>;
  { r.at_pass_start() } -> std::convertible_to<bool>;
  { r.space() } -> std::same_as<SpaceAccountant&>;
};

}  // namespace ssm
