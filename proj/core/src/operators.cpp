#include "calgraph/operators.hpp"

#include <cmath>

namespace calgraph {

double nabla(const VertexFunction& f, VertexId x, VertexId y) {
  const auto& w = f.window();
  return nabla_idx(f, w.index_of(x), w.index_of(y));
}

double nabla_idx(const VertexFunction& f, int xi, int yi) {
  return f[yi] - f[xi];
}

namespace {

// Laplacian and Gamma need every neighbor value, so the argument must be
// defined one hop past idx and idx must be interior.
void check_stencil(const VertexFunction& f, int idx) {
  const auto& w = f.window();
  if (!w.is_interior(idx))
    throw DomainError("operator requested on boundary vertex " +
                      std::to_string(w.id_of(idx)));
  if (w.depth_of(idx) + 1 > f.max_depth())
    throw DomainError("function not defined on the full stencil of vertex " +
                      std::to_string(w.id_of(idx)));
}

}  // namespace

double laplacian_at(const VertexFunction& f, int idx) {
  check_stencil(f, idx);
  const auto& w = f.window();
  const auto vals = f.values();
  double acc = 0.0;
  const double fx = vals[idx];
  for (const auto& e : w.neighbors_of(idx)) acc += e.weight * (vals[e.idx] - fx);
  return acc / w.measure_of(idx);
}

VertexFunction laplacian_apply(const VertexFunction& f) {
  const auto& w = f.window();
  VertexFunction out(f.window_ptr());
  for (int i = 0; i < w.size(); ++i)
    if (w.is_interior(i) && w.depth_of(i) + 1 <= f.max_depth())
      out.set(i, laplacian_at(f, i));
  out.restrict_depth(std::min(w.hops(), f.max_depth() - 1));
  return out;
}

double gamma_at(const VertexFunction& f, int idx) {
  check_stencil(f, idx);
  const auto& w = f.window();
  const auto vals = f.values();
  double acc = 0.0;
  const double fx = vals[idx];
  for (const auto& e : w.neighbors_of(idx)) {
    const double d = vals[e.idx] - fx;
    acc += e.weight * d * d;
  }
  return 0.5 * acc / w.measure_of(idx);
}

VertexFunction gamma(const VertexFunction& f) {
  const auto& w = f.window();
  VertexFunction out(f.window_ptr());
  for (int i = 0; i < w.size(); ++i)
    if (w.is_interior(i) && w.depth_of(i) + 1 <= f.max_depth())
      out.set(i, gamma_at(f, i));
  out.restrict_depth(std::min(w.hops(), f.max_depth() - 1));
  return out;
}

double green_identity_residual(const VertexFunction& f,
                               const VertexFunction& g) {
  const auto& w = f.window();
  if (&g.window() != &w)
    throw DomainError("green: f and g live on different windows");
  if (!g.finite_support())
    throw DomainError("green: g must be flagged finite-support");

  const auto fv = f.values();
  const auto gv = g.values();

  double lhs = 0.0;
  for (int x = 0; x < w.size(); ++x) {
    for (const auto& e : w.neighbors_of(x)) {
      lhs += e.weight * (fv[e.idx] - fv[x]) * (gv[e.idx] - gv[x]);
    }
  }
  lhs *= 0.5;

  double rhs = 0.0;
  for (int x = 0; x < w.size(); ++x) {
    if (gv[x] == 0.0) continue;
    rhs -= laplacian_at(f, x) * gv[x] * w.measure_of(x);
  }
  return std::abs(lhs - rhs);
}

double dt_difference(const TimeSeries& g, int t) {
  return g.at(t) - g.at(t - 1);
}

double dt_square_defect(const TimeSeries& g, int t) {
  const double gt = g.at(t);
  const double gp = g.at(t - 1);
  const double d = gt - gp;
  return (gt * gt - gp * gp) - 2.0 * gt * d + d * d;
}

double telescope_check(const TimeSeries& g, int a, int b) {
  if (a > b) throw DomainError("telescope: a must be <= b");
  double sum = 0.0;
  for (int t = a; t <= b; ++t) sum += dt_difference(g, t);
  return std::abs(sum - (g.at(b) - g.at(a - 1)));
}

std::size_t pigeonhole_index(std::span<const double> values) {
  if (values.empty()) throw DomainError("pigeonhole: empty list");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  for (std::size_t j = 0; j < values.size(); ++j)
    if (values[j] <= mean) return j;
  // Floating-point summation cannot leave every element above the mean by
  // more than rounding, but fall back to the argmin just in case.
  std::size_t best = 0;
  for (std::size_t j = 1; j < values.size(); ++j)
    if (values[j] < values[best]) best = j;
  return best;
}

}  // namespace calgraph
