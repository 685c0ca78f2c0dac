#pragma once

#include <span>

#include "calgraph/function.hpp"

namespace calgraph {

/// Difference operator: nabla_xy f = f(y) - f(x).
double nabla(const VertexFunction& f, VertexId x, VertexId y);
double nabla_idx(const VertexFunction& f, int xi, int yi);

/// Laplacian at one interior vertex: sum_y (w_xy/m_x)(f(y) - f(x)).
double laplacian_at(const VertexFunction& f, int idx);

/// Laplacian on the interior; the result is undefined on the boundary.
VertexFunction laplacian_apply(const VertexFunction& f);

/// Carre du champ at one interior vertex: (1/2) sum_y (w_xy/m_x)(f(y)-f(x))^2.
double gamma_at(const VertexFunction& f, int idx);
VertexFunction gamma(const VertexFunction& f);

/// |LHS - RHS| of Green's formula
///   (1/2) sum_{x,y} w_xy nabla_xy f nabla_xy g = - sum_x Lap f(x) g(x) m_x
/// for finitely supported g (support inside the interior).
double green_identity_residual(const VertexFunction& f,
                               const VertexFunction& g);

/// D_t g(t) = g(t) - g(t-1).
double dt_difference(const TimeSeries& g, int t);

/// D_t(g^2)(t) - 2 g(t) D_t g(t) + (D_t g(t))^2; identically zero.
double dt_square_defect(const TimeSeries& g, int t);

/// | sum_{t=a}^{b} D_t g - (g(b) - g(a-1)) |.
double telescope_check(const TimeSeries& g, int a, int b);

/// Smallest index j with a_j <= mean(a).
std::size_t pigeonhole_index(std::span<const double> values);

}  // namespace calgraph
