#include "calgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

namespace calgraph {

namespace {

constexpr int kCoordBits = 20;
constexpr int kCoordOffset = 1 << 19;

std::string vertex_label(const GraphProvider* p, VertexId id) {
  if (p != nullptr && p->dimension() > 0) {
    if (auto c = p->coordinates(id)) {
      std::string s = "(";
      for (size_t i = 0; i < c->size(); ++i) {
        if (i) s += ",";
        s += std::to_string((*c)[i]);
      }
      return s + ")";
    }
  }
  return std::to_string(id);
}

}  // namespace

VertexId pack_coords(std::span<const int> coords) {
  if (coords.empty() || coords.size() > 3)
    throw DomainError("pack_coords: dimension must be 1..3");
  VertexId id = 0;
  for (size_t i = 0; i < coords.size(); ++i) {
    int c = coords[i];
    if (c <= -kCoordOffset || c >= kCoordOffset)
      throw DomainError("pack_coords: coordinate out of range");
    id |= (static_cast<VertexId>(c + kCoordOffset)) << (kCoordBits * i);
  }
  return id;
}

std::vector<int> unpack_coords(VertexId id, int dimension) {
  std::vector<int> coords(dimension);
  for (int i = 0; i < dimension; ++i) {
    coords[i] =
        static_cast<int>((id >> (kCoordBits * i)) & ((1 << kCoordBits) - 1)) -
        kCoordOffset;
  }
  return coords;
}

namespace {

class LatticeZdProvider : public GraphProvider {
 public:
  LatticeZdProvider(int d, WeightRule w, MeasureRule m, std::string family)
      : d_(d), w_(w), m_(m), family_(std::move(family)) {}

  std::vector<Edge> neighbors(VertexId x) const override {
    auto c = unpack_coords(x, d_);
    std::vector<Edge> out;
    out.reserve(2 * d_);
    for (int a = 0; a < d_; ++a) {
      for (int s : {-1, +1}) {
        auto n = c;
        n[a] += s;
        out.push_back({pack_coords(n), edge_weight(c, n, a)});
      }
    }
    return out;
  }

  double measure(VertexId x) const override {
    switch (m_.kind) {
      case MeasureRule::Kind::constant:
        if (m_.value <= 0.0)
          throw ConfigError("nonpositive measure at vertex " +
                            vertex_label(this, x));
        return m_.value;
      case MeasureRule::Kind::normalized: {
        double s = 0.0;
        for (const auto& e : neighbors(x)) s += e.weight;
        return s;
      }
    }
    throw ConfigError("unknown measure rule");
  }

  VertexId base() const override {
    std::vector<int> zero(d_, 0);
    return pack_coords(zero);
  }

  std::string family_id() const override { return family_; }
  int dimension() const override { return d_; }
  std::optional<std::vector<int>> coordinates(VertexId x) const override {
    return unpack_coords(x, d_);
  }

 private:
  double edge_weight(const std::vector<int>& from, const std::vector<int>& to,
                     int axis) const {
    switch (w_.kind) {
      case WeightRule::Kind::constant:
        if (w_.value <= 0.0)
          throw ConfigError("nonpositive weight at vertex " +
                            vertex_label(this, pack_coords(from)));
        return w_.value;
      case WeightRule::Kind::line_power: {
        // w_{n,n+1} = (1+|n|)^p, n the left endpoint along the axis.
        int left = std::min(from[axis], to[axis]);
        double w = std::pow(1.0 + std::abs(left), w_.exponent);
        if (!(w > 0.0))
          throw ConfigError("nonpositive weight at vertex " +
                            vertex_label(this, pack_coords(from)));
        return w;
      }
    }
    throw ConfigError("unknown weight rule");
  }

  int d_;
  WeightRule w_;
  MeasureRule m_;
  std::string family_;
};

class StarProvider : public GraphProvider {
 public:
  StarProvider(int leaves, WeightRule w, MeasureRule m)
      : leaves_(leaves), w_(w), m_(m) {
    if (leaves_ < 1) throw ConfigError("star needs at least one leaf");
    if (w_.kind != WeightRule::Kind::constant || w_.value <= 0.0)
      throw ConfigError("star supports positive constant weights only");
  }

  std::vector<Edge> neighbors(VertexId x) const override {
    std::vector<Edge> out;
    if (x == 0) {
      for (int i = 1; i <= leaves_; ++i) out.push_back({i, w_.value});
    } else if (x >= 1 && x <= leaves_) {
      out.push_back({0, w_.value});
    } else {
      throw DomainError("star: unknown vertex " + std::to_string(x));
    }
    return out;
  }

  double measure(VertexId x) const override {
    switch (m_.kind) {
      case MeasureRule::Kind::constant:
        if (m_.value <= 0.0)
          throw ConfigError("nonpositive measure at vertex " +
                            std::to_string(x));
        return m_.value;
      case MeasureRule::Kind::normalized: {
        double s = 0.0;
        for (const auto& e : neighbors(x)) s += e.weight;
        return s;
      }
    }
    throw ConfigError("unknown measure rule");
  }

  VertexId base() const override { return 0; }
  std::string family_id() const override {
    return "star" + std::to_string(leaves_);
  }

 private:
  int leaves_;
  WeightRule w_;
  MeasureRule m_;
};

class NormalizedWrapProvider : public GraphProvider {
 public:
  explicit NormalizedWrapProvider(std::shared_ptr<GraphProvider> inner)
      : inner_(std::move(inner)) {}

  std::vector<Edge> neighbors(VertexId x) const override {
    return inner_->neighbors(x);
  }
  double measure(VertexId x) const override {
    double s = 0.0;
    for (const auto& e : inner_->neighbors(x)) s += e.weight;
    if (s <= 0.0)
      throw ConfigError("normalized wrap: zero weight sum at vertex " +
                        std::to_string(x));
    return s;
  }
  VertexId base() const override { return inner_->base(); }
  std::string family_id() const override {
    return inner_->family_id() + "-normalized";
  }
  int dimension() const override { return inner_->dimension(); }
  std::optional<std::vector<int>> coordinates(VertexId x) const override {
    return inner_->coordinates(x);
  }

 private:
  std::shared_ptr<GraphProvider> inner_;
};

std::string lattice_family_name(const FamilyConfig& c) {
  std::string name = "z" + std::to_string(c.dimension);
  if (c.family == FamilyConfig::Family::weighted_line) {
    name = "wline";
    if (c.weight.kind == WeightRule::Kind::line_power)
      name += std::to_string(static_cast<int>(c.weight.exponent));
  }
  if (c.measure.kind == MeasureRule::Kind::normalized) name += "n";
  return name;
}

}  // namespace

std::shared_ptr<GraphProvider> generate(const FamilyConfig& config) {
  switch (config.family) {
    case FamilyConfig::Family::lattice_zd:
      if (config.dimension < 1 || config.dimension > 3)
        throw ConfigError("lattice-zd supports d in 1..3");
      return std::make_shared<LatticeZdProvider>(
          config.dimension, config.weight, config.measure,
          lattice_family_name(config));
    case FamilyConfig::Family::weighted_line:
      return std::make_shared<LatticeZdProvider>(1, config.weight,
                                                 config.measure,
                                                 lattice_family_name(config));
    case FamilyConfig::Family::star:
      return std::make_shared<StarProvider>(config.leaves, config.weight,
                                            config.measure);
    case FamilyConfig::Family::normalized_wrap:
      if (!config.inner)
        throw ConfigError("normalized-wrap requires an inner family");
      return wrap_normalized(generate(*config.inner));
  }
  throw ConfigError("unknown family");
}

std::shared_ptr<GraphProvider> wrap_normalized(
    std::shared_ptr<GraphProvider> inner) {
  return std::make_shared<NormalizedWrapProvider>(std::move(inner));
}

int GraphWindow::index_of(VertexId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id)
    throw DomainError("vertex " + std::to_string(id) + " not in window");
  return static_cast<int>(it - ids_.begin());
}

std::optional<int> GraphWindow::find(VertexId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<int>(it - ids_.begin());
}

std::span<const int> GraphWindow::coords_of(int idx) const {
  if (dim_ == 0) throw DomainError("window has no lattice coordinates");
  return {coords_flat_.data() + static_cast<size_t>(idx) * dim_,
          static_cast<size_t>(dim_)};
}

std::string GraphWindow::family_id() const {
  return provider_ ? provider_->family_id() : "adhoc";
}

std::shared_ptr<const GraphWindow> GraphWindow::from_parts(
    std::vector<VertexId> ids, std::vector<double> measures,
    std::vector<int> depths, int hops,
    const std::vector<std::vector<std::pair<VertexId, double>>>& adjacency,
    std::shared_ptr<const GraphProvider> provider,
    std::vector<std::vector<int>> coords) {
  auto w = std::shared_ptr<GraphWindow>(new GraphWindow());
  w->ids_ = std::move(ids);
  w->measure_ = std::move(measures);
  w->depth_ = std::move(depths);
  w->hops_ = hops;
  w->provider_ = std::move(provider);

  const int n = static_cast<int>(w->ids_.size());
  w->adj_offset_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i)
    w->adj_offset_[i + 1] =
        w->adj_offset_[i] + static_cast<int>(adjacency[i].size());
  w->adj_.reserve(w->adj_offset_[n]);
  w->full_weight_.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (const auto& [id, weight] : adjacency[i]) {
      auto pos = w->find(id);
      if (!pos)
        throw DomainError("from_parts: neighbor id not in vertex list");
      w->adj_.push_back({*pos, weight});
      w->full_weight_[i] += weight;
    }
  }
  w->interior_count_ = 0;
  for (int i = 0; i < n; ++i)
    if (w->depth_[i] <= hops) ++w->interior_count_;
  int base = 0;
  for (int i = 0; i < n; ++i)
    if (w->depth_[i] == 0) base = i;
  w->base_idx_ = base;
  w->base_id_ = w->ids_[base];
  if (!coords.empty()) {
    w->dim_ = static_cast<int>(coords[0].size());
    for (const auto& c : coords)
      w->coords_flat_.insert(w->coords_flat_.end(), c.begin(), c.end());
  }
  return w;
}

std::shared_ptr<const GraphWindow> build_window(
    std::shared_ptr<const GraphProvider> provider, VertexId base, int hops) {
  if (hops < 1) throw ConfigError("build_window: hops must be >= 1");

  // BFS out to hops+1 steps.
  std::unordered_map<VertexId, int> depth;
  depth.emplace(base, 0);
  std::deque<VertexId> queue{base};
  while (!queue.empty()) {
    VertexId x = queue.front();
    queue.pop_front();
    int d = depth[x];
    if (d > hops) continue;  // boundary shell is not expanded
    for (const auto& e : provider->neighbors(x)) {
      auto [it, inserted] = depth.emplace(e.to, d + 1);
      if (inserted) queue.push_back(e.to);
    }
  }

  auto w = std::shared_ptr<GraphWindow>(new GraphWindow());
  w->hops_ = hops;
  w->provider_ = provider;
  w->base_id_ = base;
  w->ids_.reserve(depth.size());
  for (const auto& [id, d] : depth) w->ids_.push_back(id);
  std::sort(w->ids_.begin(), w->ids_.end());

  const int n = static_cast<int>(w->ids_.size());
  w->depth_.resize(n);
  w->measure_.resize(n);
  w->full_weight_.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    w->depth_[i] = depth[w->ids_[i]];
    double m = provider->measure(w->ids_[i]);
    if (!(m > 0.0))
      throw StructuralError("nonpositive measure at vertex " +
                            vertex_label(provider.get(), w->ids_[i]));
    w->measure_[i] = m;
  }
  w->base_idx_ = w->index_of(base);
  w->interior_count_ = 0;
  for (int i = 0; i < n; ++i)
    if (w->depth_[i] <= hops) ++w->interior_count_;

  // Fetch every neighbor list once; keep window-internal edges.
  std::vector<std::vector<std::pair<VertexId, double>>> rows(n);
  for (int i = 0; i < n; ++i) {
    auto list = provider->neighbors(w->ids_[i]);
    std::sort(list.begin(), list.end(),
              [](const Edge& a, const Edge& b) { return a.to < b.to; });
    for (size_t k = 0; k < list.size(); ++k) {
      const auto& e = list[k];
      if (e.to == w->ids_[i])
        throw StructuralError("self-loop at vertex " +
                              vertex_label(provider.get(), w->ids_[i]));
      if (k > 0 && list[k - 1].to == e.to)
        throw StructuralError("parallel edge at vertex " +
                              vertex_label(provider.get(), w->ids_[i]));
      if (!(e.weight > 0.0))
        throw StructuralError(
            "nonpositive weight on edge " +
            vertex_label(provider.get(), w->ids_[i]) + " ~ " +
            vertex_label(provider.get(), e.to));
      w->full_weight_[i] += e.weight;
      if (depth.count(e.to)) rows[i].emplace_back(e.to, e.weight);
    }
  }

  // Symmetry: both directions of a window edge must agree exactly.
  for (int i = 0; i < n; ++i) {
    for (const auto& [to, weight] : rows[i]) {
      int j = w->index_of(to);
      auto& back = rows[j];
      auto it = std::lower_bound(
          back.begin(), back.end(), w->ids_[i],
          [](const auto& p, VertexId v) { return p.first < v; });
      if (it == back.end() || it->first != w->ids_[i] ||
          it->second != weight) {
        throw StructuralError("asymmetric weight on edge " +
                              vertex_label(provider.get(), w->ids_[i]) +
                              " ~ " + vertex_label(provider.get(), to));
      }
    }
  }

  w->adj_offset_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i)
    w->adj_offset_[i + 1] = w->adj_offset_[i] + static_cast<int>(rows[i].size());
  w->adj_.reserve(w->adj_offset_[n]);
  for (int i = 0; i < n; ++i)
    for (const auto& [to, weight] : rows[i])
      w->adj_.push_back({w->index_of(to), weight});

  if (provider->dimension() > 0) {
    w->dim_ = provider->dimension();
    w->coords_flat_.reserve(static_cast<size_t>(n) * w->dim_);
    for (int i = 0; i < n; ++i) {
      auto c = provider->coordinates(w->ids_[i]);
      if (!c || static_cast<int>(c->size()) != w->dim_)
        throw DomainError("provider reports coordinates but misses vertex " +
                          std::to_string(w->ids_[i]));
      w->coords_flat_.insert(w->coords_flat_.end(), c->begin(), c->end());
    }
  }
  return w;
}

std::vector<Violation> validate_graph(const GraphWindow& w) {
  std::vector<Violation> out;
  const int n = w.size();

  for (int i = 0; i < n; ++i) {
    if (!(w.measure_of(i) > 0.0))
      out.push_back({"positivity", "measure m <= 0 at vertex " +
                                       std::to_string(w.id_of(i))});
  }

  for (int i = 0; i < n; ++i) {
    auto nbrs = w.neighbors_of(i);
    for (size_t k = 0; k < nbrs.size(); ++k) {
      const auto& e = nbrs[k];
      if (e.idx == i)
        out.push_back({"simplicity", "self-loop at vertex " +
                                         std::to_string(w.id_of(i))});
      if (!(e.weight > 0.0))
        out.push_back({"positivity",
                       "weight w <= 0 on edge " + std::to_string(w.id_of(i)) +
                           " ~ " + std::to_string(w.id_of(e.idx))});
      for (size_t k2 = k + 1; k2 < nbrs.size(); ++k2)
        if (nbrs[k2].idx == e.idx)
          out.push_back({"simplicity",
                         "parallel edge at vertex " +
                             std::to_string(w.id_of(i))});
      // symmetry: the reverse entry must exist with the identical weight
      bool found = false;
      for (const auto& r : w.neighbors_of(e.idx))
        if (r.idx == i && r.weight == e.weight) found = true;
      if (!found && i < e.idx)
        out.push_back({"symmetry",
                       "asymmetric weight on edge " +
                           std::to_string(w.id_of(i)) + " ~ " +
                           std::to_string(w.id_of(e.idx))});
    }
  }

  // connectivity over window edges
  if (n > 0) {
    std::vector<char> seen(n, 0);
    std::deque<int> queue{w.base_index()};
    seen[w.base_index()] = 1;
    int reached = 1;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      for (const auto& e : w.neighbors_of(x)) {
        if (!seen[e.idx]) {
          seen[e.idx] = 1;
          ++reached;
          queue.push_back(e.idx);
        }
      }
    }
    if (reached != n)
      out.push_back({"connectivity",
                     std::to_string(n - reached) +
                         " vertices unreachable from the base"});
  }

  // interior closure against the provider
  if (auto p = w.provider()) {
    for (int i = 0; i < n; ++i) {
      if (!w.is_interior(i)) continue;
      auto full = p->neighbors(w.id_of(i));
      if (full.size() != w.neighbors_of(i).size())
        out.push_back({"interior-closure",
                       "provider neighbors of interior vertex " +
                           std::to_string(w.id_of(i)) +
                           " missing from the window"});
    }
  }
  return out;
}

double weighted_degree(const GraphWindow& w, VertexId x) {
  int i = w.index_of(x);
  return w.full_weight(i) / w.measure_of(i);
}

DegreeSummary degree_summary(const GraphWindow& w) {
  DegreeSummary s;
  if (w.size() == 0) return s;
  s.max_degree = -1.0;
  s.min_degree = std::numeric_limits<double>::infinity();
  for (int i = 0; i < w.size(); ++i) {
    double deg = w.full_weight(i) / w.measure_of(i);
    if (deg > s.max_degree) {
      s.max_degree = deg;
      s.argmax = w.id_of(i);
    }
    s.min_degree = std::min(s.min_degree, deg);
  }
  return s;
}

}  // namespace calgraph
