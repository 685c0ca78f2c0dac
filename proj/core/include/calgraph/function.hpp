#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "calgraph/graph.hpp"

namespace calgraph {

/// Real-valued function on a window's vertices. Values are defined on every
/// vertex of depth <= max_depth(); operators that lose one hop of exactness
/// (Laplacian, carre du champ, backward marching) shrink that limit.
class VertexFunction {
 public:
  VertexFunction() = default;

  explicit VertexFunction(std::shared_ptr<const GraphWindow> w,
                          double fill = 0.0)
      : win_(std::move(w)),
        v_(win_->size(), fill),
        max_depth_(win_->hops() + 1) {}

  static VertexFunction from_fn(std::shared_ptr<const GraphWindow> w,
                                const std::function<double(VertexId)>& f) {
    VertexFunction out(w);
    for (int i = 0; i < w->size(); ++i) out.v_[i] = f(w->id_of(i));
    return out;
  }

  /// f receives the lattice coordinates of each vertex.
  static VertexFunction from_coords(
      std::shared_ptr<const GraphWindow> w,
      const std::function<double(std::span<const int>)>& f) {
    if (!w->has_coordinates())
      throw DomainError("from_coords: window has no lattice coordinates");
    VertexFunction out(w);
    for (int i = 0; i < w->size(); ++i) out.v_[i] = f(w->coords_of(i));
    return out;
  }

  const GraphWindow& window() const { return *win_; }
  std::shared_ptr<const GraphWindow> window_ptr() const { return win_; }

  int size() const { return static_cast<int>(v_.size()); }
  bool defined(int idx) const { return win_->depth_of(idx) <= max_depth_; }

  double operator[](int idx) const {
    if (!defined(idx))
      throw DomainError("value undefined at vertex " +
                        std::to_string(win_->id_of(idx)));
    return v_[idx];
  }
  double at_id(VertexId id) const { return (*this)[win_->index_of(id)]; }

  void set(int idx, double value) { v_[idx] = value; }
  void set_id(VertexId id, double value) { v_[win_->index_of(id)] = value; }

  int max_depth() const { return max_depth_; }
  void restrict_depth(int depth) { max_depth_ = std::min(max_depth_, depth); }

  bool finite_support() const { return finite_support_; }

  /// Flags the function as finitely supported; verifies support <= interior.
  void mark_finite_support() {
    for (int i = 0; i < size(); ++i)
      if (v_[i] != 0.0 && !win_->is_interior(i))
        throw DomainError("finite-support function has boundary support at " +
                          std::to_string(win_->id_of(i)));
    finite_support_ = true;
  }

  std::span<const double> values() const { return v_; }
  std::span<double> mutable_values() { return v_; }

 private:
  std::shared_ptr<const GraphWindow> win_;
  std::vector<double> v_;
  int max_depth_ = 0;
  bool finite_support_ = false;
};

/// Function on a contiguous range of nonpositive integer times [a, b].
class TimeSeries {
 public:
  TimeSeries(int first, std::vector<double> values)
      : first_(first), v_(std::move(values)) {
    if (v_.empty()) throw DomainError("empty time series");
    if (last() > 0) throw DomainError("time series must live on Z_-");
  }

  static TimeSeries from_fn(int first, int last,
                            const std::function<double(int)>& f) {
    std::vector<double> v;
    v.reserve(last - first + 1);
    for (int t = first; t <= last; ++t) v.push_back(f(t));
    return TimeSeries(first, std::move(v));
  }

  int first() const { return first_; }
  int last() const { return first_ + static_cast<int>(v_.size()) - 1; }

  double at(int t) const {
    if (t < first_ || t > last())
      throw DomainError("time " + std::to_string(t) + " outside series");
    return v_[t - first_];
  }

 private:
  int first_;
  std::vector<double> v_;
};

}  // namespace calgraph
