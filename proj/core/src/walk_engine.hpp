#pragma once

// Depth-first walk generator on a dense box around the origin. Shared by
// table construction and the public visitor API.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <vector>

#include "prudent/errors.hpp"
#include "prudent/lattice.hpp"

namespace prudent::detail {

class Box {
 public:
  Box(int dim, int radius) : dim_(dim), radius_(radius), side_(2 * radius + 1) {
    require(dim >= 1 && dim <= kMaxDim, "dimension out of range");
    std::int64_t s = 1;
    for (int i = 0; i < dim; ++i) {
      stride_[static_cast<std::size_t>(i)] = s;
      s *= side_;
      require(s < (std::int64_t{1} << 31), "enumeration box too large");
    }
    size_ = s;
    std::int64_t o = 0;
    for (int i = 0; i < dim; ++i) o += radius * stride_[static_cast<std::size_t>(i)];
    origin_ = o;
  }

  int dim() const { return dim_; }
  int radius() const { return radius_; }
  std::int64_t size() const { return size_; }
  std::int64_t origin() const { return origin_; }
  std::int64_t stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }

  std::int64_t index(const Point& p) const {
    std::int64_t idx = 0;
    for (int i = 0; i < dim_; ++i) idx += (p[i] + radius_) * stride(i);
    return idx;
  }

  Point point(std::int64_t idx) const {
    Point p(dim_);
    for (int i = 0; i < dim_; ++i) {
      p[i] = static_cast<int>(idx % side_) - radius_;
      idx /= side_;
    }
    return p;
  }

 private:
  int dim_;
  int radius_;
  int side_;
  std::array<std::int64_t, kMaxDim> stride_{};
  std::int64_t size_ = 0;
  std::int64_t origin_ = 0;
};

/// Mutable walk state for DFS: tip position, per-site occupancy and the
/// running bounding box, with O(1) push/pop.
class WalkState {
 public:
  WalkState(const Box& box, int max_len)
      : box_(box), occ_(static_cast<std::size_t>(box.size()), 0) {
    sites_.reserve(static_cast<std::size_t>(max_len) + 1);
    seeing_.reserve(static_cast<std::size_t>(max_len) + 1);
    coords_.reserve(static_cast<std::size_t>(max_len + 1) * static_cast<std::size_t>(box.dim()));
    bbox_.reserve(static_cast<std::size_t>(max_len + 1) * 2 * static_cast<std::size_t>(box.dim()));
    sites_.push_back(box.origin());
    seeing_.push_back(0);
    for (int i = 0; i < box.dim(); ++i) coords_.push_back(0);
    for (int i = 0; i < box.dim(); ++i) {
      bbox_.push_back(0);
      bbox_.push_back(0);
    }
    occ_[static_cast<std::size_t>(box.origin())] = 1;
  }

  int dim() const { return box_.dim(); }
  int depth() const { return static_cast<int>(sites_.size()) - 1; }
  std::int64_t tip() const { return sites_.back(); }
  long seeing_total() const { return seeing_.back(); }
  const std::vector<std::int64_t>& sites() const { return sites_; }

  /// Counts earlier visits on the ray from tip+step in the step direction
  /// (including the new tip itself). With stop_at_first, returns as soon as
  /// the count is positive.
  long ray_count(int code, bool stop_at_first) const {
    const int dim = box_.dim();
    const int axis = code / 2;
    const int sign = (code % 2) ? 1 : -1;
    const std::size_t base = static_cast<std::size_t>(depth()) * static_cast<std::size_t>(dim);
    const int coord = coords_[base + static_cast<std::size_t>(axis)] + sign;
    const std::size_t bb = static_cast<std::size_t>(depth()) * 2 * static_cast<std::size_t>(dim);
    const int lo = bbox_[bb + 2 * static_cast<std::size_t>(axis)];
    const int hi = bbox_[bb + 2 * static_cast<std::size_t>(axis) + 1];
    const std::int64_t delta = sign * box_.stride(axis);
    std::int64_t pos = tip() + delta;
    long count = 0;
    for (int c = coord; c >= lo && c <= hi; c += sign, pos += delta) {
      count += occ_[static_cast<std::size_t>(pos)];
      if (stop_at_first && count > 0) return count;
    }
    return count;
  }

  void push(int code, long seen) {
    const int dim = box_.dim();
    const int axis = code / 2;
    const int sign = (code % 2) ? 1 : -1;
    const std::size_t base = static_cast<std::size_t>(depth()) * static_cast<std::size_t>(dim);
    const std::size_t bb = static_cast<std::size_t>(depth()) * 2 * static_cast<std::size_t>(dim);
    for (int i = 0; i < dim; ++i) coords_.push_back(coords_[base + static_cast<std::size_t>(i)]);
    for (int i = 0; i < 2 * dim; ++i) bbox_.push_back(bbox_[bb + static_cast<std::size_t>(i)]);
    const std::size_t nb = base + static_cast<std::size_t>(dim);
    const std::size_t nbb = bb + 2 * static_cast<std::size_t>(dim);
    int& c = coords_[nb + static_cast<std::size_t>(axis)];
    c += sign;
    if (std::abs(c) > box_.radius()) throw ContractError("walk left the enumeration box");
    int& lo = bbox_[nbb + 2 * static_cast<std::size_t>(axis)];
    int& hi = bbox_[nbb + 2 * static_cast<std::size_t>(axis) + 1];
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    const std::int64_t pos = tip() + sign * box_.stride(axis);
    sites_.push_back(pos);
    seeing_.push_back(seeing_.back() + seen);
    ++occ_[static_cast<std::size_t>(pos)];
  }

  void pop() {
    const int dim = box_.dim();
    --occ_[static_cast<std::size_t>(sites_.back())];
    sites_.pop_back();
    seeing_.pop_back();
    coords_.resize(coords_.size() - static_cast<std::size_t>(dim));
    bbox_.resize(bbox_.size() - 2 * static_cast<std::size_t>(dim));
  }

  std::vector<Point> points() const {
    std::vector<Point> out;
    out.reserve(sites_.size());
    const int dim = box_.dim();
    for (std::size_t t = 0; t < sites_.size(); ++t) {
      Point p(dim);
      for (int i = 0; i < dim; ++i) p[i] = coords_[t * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i)];
      out.push_back(p);
    }
    return out;
  }

 private:
  const Box& box_;
  std::vector<std::uint16_t> occ_;
  std::vector<std::int64_t> sites_;
  std::vector<long> seeing_;
  std::vector<int> coords_;
  std::vector<int> bbox_;
};

/// Shared node counter enforcing the extension budget. Workers charge in
/// batches through a LocalBudget.
class NodeBudget {
 public:
  explicit NodeBudget(std::uint64_t limit) : limit_(limit) {}
  void charge(std::uint64_t n) {
    if (used_.fetch_add(n, std::memory_order_relaxed) + n > limit_)
      throw BudgetError("enumeration node budget of " + std::to_string(limit_) + " exceeded");
  }
  std::uint64_t used() const { return used_.load(); }

 private:
  std::uint64_t limit_;
  std::atomic<std::uint64_t> used_{0};
};

class LocalBudget {
 public:
  explicit LocalBudget(NodeBudget& shared) : shared_(shared) {}
  void charge() {
    if (++pending_ == kBatch) flush();
  }
  void flush() {
    const std::uint64_t n = pending_;
    pending_ = 0;
    if (n) shared_.charge(n);
  }

 private:
  static constexpr std::uint64_t kBatch = 4096;
  NodeBudget& shared_;
  std::uint64_t pending_ = 0;
};

/// Depth-first search to `max_depth` in step-code order. `on_node(state)`
/// is called for every node, the starting node included. With `prune`,
/// children whose new step sees an earlier site are skipped.
template <class OnNode>
void dfs(WalkState& state, int max_depth, bool prune, LocalBudget& budget, OnNode& on_node) {
  on_node(state);
  if (state.depth() == max_depth) return;
  const int codes = 2 * state.dim();
  for (int code = 0; code < codes; ++code) {
    const long seen = state.ray_count(code, prune);
    if (prune && seen > 0) continue;
    state.push(code, seen);
    budget.charge();
    dfs(state, max_depth, prune, budget, on_node);
    state.pop();
  }
}

}  // namespace prudent::detail
