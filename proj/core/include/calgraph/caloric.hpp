#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "calgraph/metrics.hpp"

namespace calgraph {

/// Space-time samples u(x,t) on a vertex subset of a window and contiguous
/// integer times [t_min, 0]. Produced by backward marching; every stored
/// value satisfies the discrete heat equation exactly where the Laplacian
/// stencil stays inside the stored set.
class DiscreteField {
 public:
  DiscreteField(std::shared_ptr<const GraphWindow> w,
                std::vector<int> vertex_indices, int t_min);

  const GraphWindow& window() const { return *win_; }
  std::shared_ptr<const GraphWindow> window_ptr() const { return win_; }

  int t_min() const { return t_min_; }
  int times() const { return -t_min_ + 1; }

  const std::vector<int>& vertex_indices() const { return verts_; }

  /// Row of the window vertex `idx` inside this field, or -1.
  int pos_of(int idx) const { return pos_[idx]; }
  bool covers(int idx) const { return pos_[idx] >= 0; }

  double at(int idx, int t) const;
  void set(int idx, int t, double v);

  double at_pos(int pos, int t) const { return data_[slot(pos, t)]; }
  void set_pos(int pos, int t, double v) { data_[slot(pos, t)] = v; }

  double max_abs() const;

 private:
  size_t slot(int pos, int t) const {
    return static_cast<size_t>(pos) * times() + (t - t_min_);
  }

  std::shared_ptr<const GraphWindow> win_;
  std::vector<int> verts_;  // sorted window indices
  std::vector<int> pos_;    // window idx -> row, -1 when absent
  int t_min_;
  std::vector<double> data_;
};

/// Explicit backward recursion u(.,t-1) = u(.,t) - Lap u(.,t) for the
/// discrete heat equation D_t u = Lap u. One hop of exactness is lost per
/// step; the result stores only vertices that stay exact through all
/// `steps` steps (or the caller's `keep` subset thereof).
DiscreteField march_backward_discrete(const VertexFunction& u0, int steps);
DiscreteField march_backward_discrete(const VertexFunction& u0, int steps,
                                      std::span<const int> keep);

/// Ancient solution in polynomial-in-time form: u = sum_i p_i(x) t^i
/// (monomial basis) or u = sum_i p_i(x) C(-t,i) (binomial basis).
class PolyField {
 public:
  enum class Basis { monomial, binomial };

  PolyField(Basis basis, std::vector<VertexFunction> coeffs);

  Basis basis() const { return basis_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const VertexFunction& coeff(int i) const { return coeffs_[i]; }
  const GraphWindow& window() const { return coeffs_[0].window(); }
  std::shared_ptr<const GraphWindow> window_ptr() const {
    return coeffs_[0].window_ptr();
  }

  /// Continuous-time evaluation; monomial basis only.
  double value(int idx, double t) const;

  /// Grid evaluation at integer t <= 0; either basis.
  double value_int(int idx, long t) const;

  /// D_t u(x,t) = u(x,t) - u(x,t-1), closed form; binomial basis only.
  double dt_value_int(int idx, long t) const;

  PolyField scaled(double factor) const;

  /// Copy with a constant `eps` added to coefficient i.
  PolyField perturbed(int i, double eps) const;

  double max_abs_coeff() const;

 private:
  Basis basis_;
  std::vector<VertexFunction> coeffs_;
};

/// Max violation of the heat equation. Grid fields: max over stored interior
/// space-time points of |u(x,t) - u(x,t-1) - Lap u(x,t)|. Poly fields:
/// coefficient-wise hierarchy residual, max over interior vertices of
/// |Lap p_l| and |Lap p_i - (i+1) p_{i+1}| (monomial) or
/// |Lap p_i + p_{i+1}| (binomial).
double residual(const DiscreteField& u);
double residual(const PolyField& u);

struct Cylinder {
  enum class Mode { continuous, discrete };
  Mode mode = Mode::continuous;
  double radius = 1.0;  // discrete mode requires an integer radius
};

enum class Quantity { u_sq, gamma_u, ut_sq, dtu_sq };

/// Integral (continuous) or sum (discrete) of the quantity over the
/// parabolic cylinder B_R x [-R^2, 0], weighted by the vertex measure.
/// Continuous mode integrates the polynomial integrand in closed form.
double cylinder_aggregate(const PolyField& u, const MetricData& metric,
                          Quantity q, const Cylinder& cyl);
double cylinder_aggregate(const DiscreteField& u, const MetricData& metric,
                          Quantity q, const Cylinder& cyl);

struct EvolveSample {
  double t;
  VertexFunction u;
};

/// Fixed-step RK4 integration of du/dt = Lap u forward in time, boundary
/// values held at u0. A validation utility: values are trustworthy only a
/// safe hop distance away from the boundary.
std::vector<EvolveSample> evolve_forward_continuous(const VertexFunction& u0,
                                                    double t_end, double dt,
                                                    int sample_stride = 0);

}  // namespace calgraph
