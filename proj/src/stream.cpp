#include "ssm/stream.hpp"

#include <algorithm>
#include <string>

namespace ssm {

void SpaceAccountant::release(std::uint64_t edges) {
  if (edges > current_) {
    throw StreamError("releasing " + std::to_string(edges) + " edges with only " +
                      std::to_string(current_) + " stored");
  }
  current_ -= edges;
}

namespace {

class SpanCursor final : public EdgeCursor {
 public:
  explicit SpanCursor(std::span<const Edge> edges) : rest_(edges) {}

  std::span<const Edge> next(std::span<Edge> scratch) override {
    const std::size_t n = std::min(rest_.size(), scratch.size());
    auto out = rest_.first(n);
    rest_ = rest_.subspan(n);
    return out;
  }

 private:
  std::span<const Edge> rest_;
};

}  // namespace

std::unique_ptr<EdgeCursor> GraphSource::cursor() const {
  return std::make_unique<SpanCursor>(graph_->edges());
}

EdgeStream::EdgeStream(std::shared_ptr<const EdgeSource> source, std::size_t batch_size)
    : source_(std::move(source)),
      cursor_(source_->cursor()),
      scratch_(batch_size == 0 ? 1 : batch_size),
      n_a_(source_->n_a()),
      n_b_(source_->n_b()) {}

std::span<const Edge> EdgeStream::next_batch() {
  if (pass_done_) return {};
  auto batch = cursor_->next(scratch_);
  if (batch.empty()) {
    pass_done_ = true;
    ++passes_;
    return {};
  }
  position_ += batch.size();
  return batch;
}

void EdgeStream::rewind() {
  if (at_pass_start()) return;
  if (!pass_done_) {
    throw StreamError("rewind requested after " + std::to_string(position_) +
                      " edges of an unfinished pass");
  }
  cursor_ = source_->cursor();
  position_ = 0;
  pass_done_ = false;
}

EdgeStream open_stream(std::shared_ptr<const EdgeSource> source) {
  return EdgeStream(std::move(source));
}

EdgeStream open_stream(const BipartiteGraph& g) {
  return EdgeStream(std::make_shared<GraphSource>(g));
}

FilteredView::FilteredView(EdgeStream& parent, VertexMask keep)
    : parent_(&parent), keep_(std::move(keep)) {
  if (keep_.n_a() != parent.n_a() || keep_.n_b() != parent.n_b()) {
    throw std::invalid_argument("vertex mask does not match the stream's vertex counts");
  }
}

std::span<const Edge> FilteredView::next_batch() {
  for (;;) {
    const auto batch = parent_->next_batch();
    if (batch.empty()) return {};
    buffer_.clear();
    for (const Edge e : batch) {
      if (keep_.keeps(e)) buffer_.push_back(e);
    }
    if (!buffer_.empty()) return buffer_;
  }
}

FilteredView filtered_view(EdgeStream& parent, VertexMask keep) {
  return FilteredView(parent, std::move(keep));
}

}  // namespace ssm
