#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "calgraph/function.hpp"

namespace calgraph {

/// Edge lengths sigma, base-vertex distances rho and the jump size of a
/// pseudometric on a window. rho is the shortest-path distance over sigma,
/// so the triangle inequality rho(y) <= rho(x) + sigma_xy holds edgewise.
class MetricData {
 public:
  const GraphWindow& window() const { return *win_; }
  std::shared_ptr<const GraphWindow> window_ptr() const { return win_; }

  double rho(int idx) const { return rho_[idx]; }

  /// sigma for the k-th neighbor entry of vertex idx (CSR-aligned).
  double sigma(int idx, int k) const { return sigma_[entry(idx, k)]; }
  double sigma_sq(int idx, int k) const { return sigma_sq_[entry(idx, k)]; }

  double jump_size() const { return jump_; }

  /// True when every vertex with rho <= R is interior, i.e. the ball B_R is
  /// provably untouched by window truncation.
  bool fits(double R) const;

  /// Largest radius below which every ball fits (min rho over the boundary).
  double coverage_radius() const { return coverage_; }

  /// Closed ball {y : rho(y) <= R} as sorted window indices.
  /// Throws CoverageError when the ball may leak outside the window.
  std::vector<int> ball(double R) const;
  double ball_measure(double R) const;

  static MetricData from_edge_lengths(
      std::shared_ptr<const GraphWindow> w,
      const std::function<double(VertexId, VertexId)>& sigma);

 private:
  friend MetricData construct_path_metric(std::shared_ptr<const GraphWindow>);
  friend MetricData metric_with_uniform_sigma(
      std::shared_ptr<const GraphWindow>, double);

  int entry(int idx, int k) const;
  void run_dijkstra();
  void finish();

  std::shared_ptr<const GraphWindow> win_;
  std::vector<double> sigma_;     // per CSR adjacency entry
  std::vector<double> sigma_sq_;  // exact min-ratio values, no sqrt round trip
  std::vector<double> rho_;
  double jump_ = 0.0;
  double coverage_ = 0.0;
};

/// Standard intrinsic construction: sigma_xy^2 = min(m_x/D_x, m_y/D_y) with
/// D_x the full weighted vertex degree; rho by single-source shortest paths.
MetricData construct_path_metric(std::shared_ptr<const GraphWindow> w);

/// All edge lengths equal to sigma (used to exercise inadmissible metrics).
MetricData metric_with_uniform_sigma(std::shared_ptr<const GraphWindow> w,
                                     double sigma);

struct SlackReport {
  std::vector<double> slack;  // per vertex; NaN on the boundary
  double min_slack = 0.0;
  bool admissible = false;  // min_slack >= -1e-12
};

/// Per-vertex slack m_x - sum_y w_xy sigma_xy^2 of the intrinsic-metric
/// inequality, evaluated on interior vertices.
SlackReport verify_intrinsic(const MetricData& metric);

struct CutoffFunction {
  VertexFunction eta;
  double R = 0.0;
  /// max over window edges of |nabla eta| - sigma/R (<= 0 up to rounding)
  double max_lipschitz_violation = 0.0;
};

/// eta_R(x) = max(0, min(2 - rho(x)/R, 1)): 1 on B_R, 0 outside B_{2R}.
CutoffFunction cutoff_eta(const MetricData& metric, double R);

struct VolumeGrowthFit {
  std::vector<double> radii;
  std::vector<double> measures;  // m(B_R)
  double alpha_hat = 0.0;
  double c_hat = 0.0;
  std::vector<double> residuals;  // log-space, per point
};

/// Least-squares fit of log m(B_R) against log(1+R).
VolumeGrowthFit fit_volume_exponent(const MetricData& metric,
                                    std::span<const double> radii);

}  // namespace calgraph
