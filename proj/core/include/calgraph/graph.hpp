#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "calgraph/errors.hpp"

namespace calgraph {

using VertexId = std::int64_t;

struct Edge {
  VertexId to;
  double weight;
};

/// Lazy view of a (possibly infinite) weighted graph. Implementations must be
/// pure functions of the vertex id: same id, same neighbor list, always.
class GraphProvider {
 public:
  virtual ~GraphProvider() = default;

  virtual std::vector<Edge> neighbors(VertexId x) const = 0;
  virtual double measure(VertexId x) const = 0;
  virtual VertexId base() const = 0;
  virtual std::string family_id() const = 0;

  /// Lattice coordinate dimension, 0 when the family has no coordinates.
  virtual int dimension() const { return 0; }
  virtual std::optional<std::vector<int>> coordinates(VertexId /*x*/) const {
    return std::nullopt;
  }
};

// Injective packing of small lattice coordinates into a VertexId.
// Supports d <= 3, |coordinate| < 2^19.
VertexId pack_coords(std::span<const int> coords);
std::vector<int> unpack_coords(VertexId id, int dimension);

struct WeightRule {
  enum class Kind { constant, line_power };
  Kind kind = Kind::constant;
  double value = 1.0;     // constant weight
  double exponent = 1.0;  // line_power: w_{n,n+1} = (1+|n|)^exponent
};

struct MeasureRule {
  enum class Kind { constant, normalized };
  Kind kind = Kind::constant;
  double value = 1.0;  // constant measure (counting measure = 1)
};

struct FamilyConfig {
  enum class Family { lattice_zd, weighted_line, star, normalized_wrap };
  Family family = Family::lattice_zd;
  int dimension = 1;  // lattice_zd
  int leaves = 4;     // star
  WeightRule weight;
  MeasureRule measure;
  std::shared_ptr<FamilyConfig> inner;  // normalized_wrap wraps this family
};

std::shared_ptr<GraphProvider> generate(const FamilyConfig& config);

/// Replaces the vertex measure of `inner` by m_x = sum_y w_xy.
std::shared_ptr<GraphProvider> wrap_normalized(
    std::shared_ptr<GraphProvider> inner);

/// Finite materialization of a provider around a base vertex.
/// Vertices within `hops` steps are interior, the hops+1 shell is boundary,
/// so the Laplacian is exact on every interior vertex. Immutable once built.
class GraphWindow {
 public:
  struct Neighbor {
    int idx;
    double weight;
  };

  int size() const { return static_cast<int>(ids_.size()); }
  int interior_size() const { return interior_count_; }
  int hops() const { return hops_; }

  VertexId id_of(int idx) const { return ids_[idx]; }
  int index_of(VertexId id) const;             // DomainError when absent
  std::optional<int> find(VertexId id) const;  // nullopt when absent

  bool is_interior(int idx) const { return depth_[idx] <= hops_; }
  int depth_of(int idx) const { return depth_[idx]; }
  double measure_of(int idx) const { return measure_[idx]; }

  VertexId base_id() const { return base_id_; }
  int base_index() const { return base_idx_; }

  std::span<const Neighbor> neighbors_of(int idx) const {
    return {adj_.data() + adj_offset_[idx],
            adj_.data() + adj_offset_[idx + 1]};
  }

  /// Total edge weight at x over the provider's full neighbor list (not just
  /// window-internal edges); exact for boundary vertices too.
  double full_weight(int idx) const { return full_weight_[idx]; }

  bool has_coordinates() const { return dim_ > 0; }
  int dimension() const { return dim_; }
  std::span<const int> coords_of(int idx) const;

  std::shared_ptr<const GraphProvider> provider() const { return provider_; }
  std::string family_id() const;

  /// Unchecked assembly from raw parts; validate_graph reports the damage.
  /// `adjacency[i]` lists (neighbor id, weight) rows exactly as given.
  static std::shared_ptr<const GraphWindow> from_parts(
      std::vector<VertexId> ids, std::vector<double> measures,
      std::vector<int> depths, int hops,
      const std::vector<std::vector<std::pair<VertexId, double>>>& adjacency,
      std::shared_ptr<const GraphProvider> provider = nullptr,
      std::vector<std::vector<int>> coords = {});

 private:
  GraphWindow() = default;
  friend std::shared_ptr<const GraphWindow> build_window(
      std::shared_ptr<const GraphProvider>, VertexId, int);

  std::vector<VertexId> ids_;  // ascending
  std::vector<double> measure_;
  std::vector<int> depth_;
  std::vector<int> adj_offset_;
  std::vector<Neighbor> adj_;
  std::vector<double> full_weight_;
  std::vector<int> coords_flat_;
  int dim_ = 0;
  int hops_ = 0;
  int interior_count_ = 0;
  VertexId base_id_ = 0;
  int base_idx_ = 0;
  std::shared_ptr<const GraphProvider> provider_;
};

/// Materializes all vertices within hops+1 steps of `base`. Validates weight
/// symmetry, positivity and simplicity on the way; throws StructuralError
/// naming the offending edge or vertex.
std::shared_ptr<const GraphWindow> build_window(
    std::shared_ptr<const GraphProvider> provider, VertexId base, int hops);

struct Violation {
  std::string kind;  // "symmetry" | "positivity" | "simplicity" | ...
  std::string detail;
};

/// Checks symmetry, positivity, simplicity, connectivity and interior
/// closure. Violations are data, not failures.
std::vector<Violation> validate_graph(const GraphWindow& w);

/// Deg(x) = (sum_y w_xy) / m_x over the provider's full neighbor list.
double weighted_degree(const GraphWindow& w, VertexId x);

struct DegreeSummary {
  double max_degree = 0.0;
  VertexId argmax = 0;
  double min_degree = 0.0;
};

DegreeSummary degree_summary(const GraphWindow& w);

}  // namespace calgraph
