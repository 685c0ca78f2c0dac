#include "calgraph/caloric.hpp"

#include <algorithm>
#include <cmath>

#include "calgraph/operators.hpp"

namespace calgraph {

namespace {

// C(n,i) for n >= 0, exact in double for the sizes used here.
double binom_d(long n, long i) {
  if (n < 0 || i < 0 || i > n) return 0.0;
  double acc = 1.0;
  for (long r = 0; r < i; ++r) acc = acc * static_cast<double>(n - r) / (r + 1);
  return acc;
}

}  // namespace

DiscreteField::DiscreteField(std::shared_ptr<const GraphWindow> w,
                             std::vector<int> vertex_indices, int t_min)
    : win_(std::move(w)), verts_(std::move(vertex_indices)), t_min_(t_min) {
  if (t_min_ > 0) throw DomainError("discrete field must live on Z_-");
  std::sort(verts_.begin(), verts_.end());
  pos_.assign(win_->size(), -1);
  for (size_t p = 0; p < verts_.size(); ++p) pos_[verts_[p]] = static_cast<int>(p);
  data_.assign(verts_.size() * static_cast<size_t>(times()), 0.0);
}

double DiscreteField::at(int idx, int t) const {
  if (t < t_min_ || t > 0)
    throw CoverageError("time " + std::to_string(t) + " outside field range");
  int p = pos_[idx];
  if (p < 0)
    throw CoverageError("vertex " + std::to_string(win_->id_of(idx)) +
                        " not stored in field");
  return at_pos(p, t);
}

void DiscreteField::set(int idx, int t, double v) {
  int p = pos_[idx];
  if (p < 0 || t < t_min_ || t > 0)
    throw CoverageError("set outside field range");
  set_pos(p, t, v);
}

double DiscreteField::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

std::vector<int> default_keep(const GraphWindow& w, int steps) {
  std::vector<int> keep;
  const int limit = w.hops() - steps + 1;
  for (int i = 0; i < w.size(); ++i)
    if (w.depth_of(i) <= limit) keep.push_back(i);
  return keep;
}

}  // namespace

DiscreteField march_backward_discrete(const VertexFunction& u0, int steps) {
  auto keep = default_keep(u0.window(), steps);
  return march_backward_discrete(u0, steps, keep);
}

DiscreteField march_backward_discrete(const VertexFunction& u0, int steps,
                                      std::span<const int> keep) {
  const auto& w = u0.window();
  if (steps < 1) throw DomainError("march: steps must be >= 1");
  if (u0.max_depth() < w.hops() + 1)
    throw DomainError("march: u0 must be defined on the whole window");
  const int exact_limit = w.hops() - steps + 1;
  if (exact_limit < 0)
    throw CoverageError("march of " + std::to_string(steps) +
                        " steps exhausts a window of " +
                        std::to_string(w.hops()) + " hops");
  for (int idx : keep)
    if (w.depth_of(idx) > exact_limit)
      throw CoverageError("kept vertex " + std::to_string(w.id_of(idx)) +
                          " is not exact after " + std::to_string(steps) +
                          " steps");

  DiscreteField field(u0.window_ptr(), {keep.begin(), keep.end()}, -steps);

  // Vertices bucketed by depth so each step only touches the still-exact
  // prefix.
  std::vector<int> order(w.size());
  for (int i = 0; i < w.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return w.depth_of(a) < w.depth_of(b);
  });
  // number of vertices with depth <= d
  std::vector<int> prefix(w.hops() + 2, 0);
  for (int i = 0; i < w.size(); ++i) prefix[w.depth_of(i)]++;
  for (size_t d = 1; d < prefix.size(); ++d) prefix[d] += prefix[d - 1];

  std::vector<double> cur(u0.values().begin(), u0.values().end());
  std::vector<double> next(cur.size());

  for (int idx : field.vertex_indices()) field.set(idx, 0, cur[idx]);

  for (int j = 1; j <= steps; ++j) {
    const int limit = w.hops() - j + 1;
    const int active = prefix[limit];
    for (int oi = 0; oi < active; ++oi) {
      const int x = order[oi];
      double lap = 0.0;
      for (const auto& e : w.neighbors_of(x))
        lap += e.weight * (cur[e.idx] - cur[x]);
      next[x] = cur[x] - lap / w.measure_of(x);
    }
    std::swap(cur, next);
    for (int idx : field.vertex_indices()) field.set(idx, -j, cur[idx]);
  }
  return field;
}

PolyField::PolyField(Basis basis, std::vector<VertexFunction> coeffs)
    : basis_(basis), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw DomainError("poly field needs p_0");
  const auto* w = &coeffs_[0].window();
  for (const auto& c : coeffs_)
    if (&c.window() != w)
      throw DomainError("poly field coefficients on different windows");
}

double PolyField::value(int idx, double t) const {
  if (basis_ != Basis::monomial)
    throw DomainError("continuous evaluation needs the monomial basis");
  double acc = 0.0;
  for (int i = degree(); i >= 0; --i) acc = acc * t + coeffs_[i][idx];
  return acc;
}

double PolyField::value_int(int idx, long t) const {
  if (t > 0) throw DomainError("grid evaluation needs t <= 0");
  if (basis_ == Basis::monomial) return value(idx, static_cast<double>(t));
  double acc = 0.0;
  for (int i = 0; i <= degree(); ++i)
    acc += coeffs_[i][idx] * binom_d(-t, i);
  return acc;
}

double PolyField::dt_value_int(int idx, long t) const {
  if (basis_ != Basis::binomial)
    throw DomainError("closed-form D_t needs the binomial basis");
  if (t > 0) throw DomainError("grid evaluation needs t <= 0");
  // D_t C(-t,i) = -C(-t,i-1)
  double acc = 0.0;
  for (int i = 1; i <= degree(); ++i)
    acc -= coeffs_[i][idx] * binom_d(-t, i - 1);
  return acc;
}

PolyField PolyField::scaled(double factor) const {
  std::vector<VertexFunction> out = coeffs_;
  for (auto& c : out)
    for (double& v : c.mutable_values()) v *= factor;
  return PolyField(basis_, std::move(out));
}

PolyField PolyField::perturbed(int i, double eps) const {
  if (i < 0 || i > degree()) throw DomainError("perturbed: index out of range");
  std::vector<VertexFunction> out = coeffs_;
  for (double& v : out[i].mutable_values()) v += eps;
  return PolyField(basis_, std::move(out));
}

double PolyField::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_)
    for (double v : c.values()) m = std::max(m, std::abs(v));
  return m;
}

double residual(const DiscreteField& u) {
  const auto& w = u.window();
  if (u.t_min() == 0) return 0.0;
  double worst = 0.0;
  for (int idx : u.vertex_indices()) {
    if (!w.is_interior(idx)) continue;
    bool stencil = true;
    for (const auto& e : w.neighbors_of(idx))
      if (!u.covers(e.idx)) stencil = false;
    if (!stencil) continue;
    const int p = u.pos_of(idx);
    for (int t = u.t_min() + 1; t <= 0; ++t) {
      double lap = 0.0;
      const double ux = u.at_pos(p, t);
      for (const auto& e : w.neighbors_of(idx))
        lap += e.weight * (u.at_pos(u.pos_of(e.idx), t) - ux);
      lap /= w.measure_of(idx);
      worst = std::max(worst, std::abs(ux - u.at_pos(p, t - 1) - lap));
    }
  }
  return worst;
}

double residual(const PolyField& u) {
  const auto& w = u.window();
  const int l = u.degree();
  double worst = 0.0;
  for (int i = 0; i <= l; ++i) {
    const auto& p = u.coeff(i);
    for (int x = 0; x < w.size(); ++x) {
      if (!w.is_interior(x) || w.depth_of(x) + 1 > p.max_depth()) continue;
      double lap = laplacian_at(p, x);
      double target = 0.0;
      if (i < l) {
        target = (u.basis() == PolyField::Basis::monomial)
                     ? (i + 1) * u.coeff(i + 1)[x]
                     : -u.coeff(i + 1)[x];
      }
      worst = std::max(worst, std::abs(lap - target));
    }
  }
  return worst;
}

namespace {

void check_cylinder(const Cylinder& cyl) {
  if (!(cyl.radius > 0.0)) throw DomainError("cylinder radius must be > 0");
  if (cyl.mode == Cylinder::Mode::discrete &&
      std::abs(cyl.radius - std::round(cyl.radius)) > 1e-9)
    throw DomainError("discrete cylinders need an integer radius");
}

// Coefficients of the product of two polynomials (dense, small degree).
std::vector<double> conv(std::span<const double> a, std::span<const double> b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// integral of sum_k c_k t^k over [-a, 0]
double integrate_poly(std::span<const double> c, double a) {
  double acc = 0.0;
  double neg_a_pow = -a;  // (-a)^{k+1}
  for (size_t k = 0; k < c.size(); ++k) {
    acc -= c[k] * neg_a_pow / static_cast<double>(k + 1);
    neg_a_pow *= -a;
  }
  return acc;
}

double aggregate_poly_continuous(const PolyField& u, const MetricData& metric,
                                 Quantity q, double R) {
  if (u.basis() != PolyField::Basis::monomial)
    throw DomainError("continuous cylinders need monomial poly fields");
  const auto& w = u.window();
  const auto ball = metric.ball(R);
  const double a = R * R;
  const int l = u.degree();
  std::vector<double> px(l + 1), qx;
  double total = 0.0;
  for (int x : ball) {
    for (int i = 0; i <= l; ++i) px[i] = u.coeff(i)[x];
    switch (q) {
      case Quantity::u_sq:
        total += w.measure_of(x) * integrate_poly(conv(px, px), a);
        break;
      case Quantity::ut_sq: {
        if (l == 0) break;  // du/dt of a constant-in-t field is 0
        std::vector<double> d(l);
        for (int i = 0; i < l; ++i) d[i] = (i + 1) * px[i + 1];
        total += w.measure_of(x) * integrate_poly(conv(d, d), a);
        break;
      }
      case Quantity::gamma_u: {
        if (!w.is_interior(x))
          throw CoverageError("Gamma requested on boundary vertex");
        double acc = 0.0;
        qx.assign(l + 1, 0.0);
        for (const auto& e : w.neighbors_of(x)) {
          for (int i = 0; i <= l; ++i) qx[i] = u.coeff(i)[e.idx] - px[i];
          acc += e.weight * integrate_poly(conv(qx, qx), a);
        }
        total += 0.5 * acc;  // (1/2) sum w (...)^2, the m_x factors cancel
        break;
      }
      case Quantity::dtu_sq:
        throw DomainError("D_t is a discrete-time quantity");
    }
  }
  return total;
}

double aggregate_poly_discrete(const PolyField& u, const MetricData& metric,
                               Quantity q, double R) {
  if (u.basis() != PolyField::Basis::binomial)
    throw DomainError("discrete cylinders need binomial poly fields");
  const auto& w = u.window();
  const auto ball = metric.ball(R);
  const long T = std::lround(R * R);
  const int l = u.degree();
  std::vector<double> basis_row(l + 1);
  double total = 0.0;
  for (long t = -T; t <= 0; ++t) {
    for (int i = 0; i <= l; ++i) basis_row[i] = binom_d(-t, i);
    for (int x : ball) {
      double val = 0.0;
      switch (q) {
        case Quantity::u_sq: {
          double ux = 0.0;
          for (int i = 0; i <= l; ++i) ux += u.coeff(i)[x] * basis_row[i];
          val = ux * ux * w.measure_of(x);
          break;
        }
        case Quantity::dtu_sq: {
          double dux = 0.0;
          for (int i = 1; i <= l; ++i)
            dux -= u.coeff(i)[x] * basis_row[i - 1];
          val = dux * dux * w.measure_of(x);
          break;
        }
        case Quantity::gamma_u: {
          if (!w.is_interior(x))
            throw CoverageError("Gamma requested on boundary vertex");
          double ux = 0.0;
          for (int i = 0; i <= l; ++i) ux += u.coeff(i)[x] * basis_row[i];
          double acc = 0.0;
          for (const auto& e : w.neighbors_of(x)) {
            double uy = 0.0;
            for (int i = 0; i <= l; ++i)
              uy += u.coeff(i)[e.idx] * basis_row[i];
            acc += e.weight * (uy - ux) * (uy - ux);
          }
          val = 0.5 * acc;  // m_x cancels against the measure weight
          break;
        }
        case Quantity::ut_sq:
          throw DomainError("u_t is a continuous-time quantity");
      }
      total += val;
    }
  }
  return total;
}

}  // namespace

double cylinder_aggregate(const PolyField& u, const MetricData& metric,
                          Quantity q, const Cylinder& cyl) {
  check_cylinder(cyl);
  if (&u.window() != &metric.window())
    throw DomainError("field and metric on different windows");
  if (cyl.mode == Cylinder::Mode::continuous)
    return aggregate_poly_continuous(u, metric, q, cyl.radius);
  return aggregate_poly_discrete(u, metric, q, cyl.radius);
}

double cylinder_aggregate(const DiscreteField& u, const MetricData& metric,
                          Quantity q, const Cylinder& cyl) {
  check_cylinder(cyl);
  if (&u.window() != &metric.window())
    throw DomainError("field and metric on different windows");
  if (cyl.mode == Cylinder::Mode::continuous)
    throw DomainError("grid fields support discrete cylinders only");
  if (q == Quantity::ut_sq)
    throw DomainError("u_t is a continuous-time quantity");

  const auto& w = u.window();
  const auto ball = metric.ball(cyl.radius);
  const long T = std::lround(cyl.radius * cyl.radius);
  const long t_first = (q == Quantity::dtu_sq) ? -T - 1 : -T;
  if (t_first < u.t_min())
    throw CoverageError("field does not reach back to t = " +
                        std::to_string(t_first));
  for (int x : ball) {
    if (!u.covers(x))
      throw CoverageError("field does not cover ball vertex " +
                          std::to_string(w.id_of(x)));
    if (q == Quantity::gamma_u)
      for (const auto& e : w.neighbors_of(x))
        if (!u.covers(e.idx))
          throw CoverageError("field does not cover the Gamma stencil of " +
                              std::to_string(w.id_of(x)));
  }

  double total = 0.0;
  for (long t = -T; t <= 0; ++t) {
    for (int x : ball) {
      const int p = u.pos_of(x);
      double val = 0.0;
      switch (q) {
        case Quantity::u_sq: {
          double ux = u.at_pos(p, static_cast<int>(t));
          val = ux * ux * w.measure_of(x);
          break;
        }
        case Quantity::dtu_sq: {
          double d = u.at_pos(p, static_cast<int>(t)) -
                     u.at_pos(p, static_cast<int>(t) - 1);
          val = d * d * w.measure_of(x);
          break;
        }
        case Quantity::gamma_u: {
          if (!w.is_interior(x))
            throw CoverageError("Gamma requested on boundary vertex");
          const double ux = u.at_pos(p, static_cast<int>(t));
          double acc = 0.0;
          for (const auto& e : w.neighbors_of(x)) {
            double d = u.at_pos(u.pos_of(e.idx), static_cast<int>(t)) - ux;
            acc += e.weight * d * d;
          }
          val = 0.5 * acc;
          break;
        }
        case Quantity::ut_sq:
          break;  // unreachable
      }
      total += val;
    }
  }
  return total;
}

std::vector<EvolveSample> evolve_forward_continuous(const VertexFunction& u0,
                                                    double t_end, double dt,
                                                    int sample_stride) {
  const auto& w = u0.window();
  if (!(dt > 0.0) || !(t_end >= 0.0))
    throw ConfigError("evolve: need dt > 0 and t_end >= 0");
  auto summary = degree_summary(w);
  if (dt > 1.0 / summary.max_degree + 1e-15)
    throw ConfigError("evolve: dt exceeds the stability bound 1/max Deg");
  const long nsteps = std::lround(t_end / dt);
  if (std::abs(nsteps * dt - t_end) > 1e-9 * std::max(1.0, t_end))
    throw ConfigError("evolve: t_end must be a multiple of dt");

  double sup0 = 0.0;
  for (double v : u0.values()) sup0 = std::max(sup0, std::abs(v));

  std::vector<double> u(u0.values().begin(), u0.values().end());
  std::vector<double> k1(u.size()), k2(u.size()), k3(u.size()), k4(u.size()),
      tmp(u.size());

  auto lap_into = [&](const std::vector<double>& src, std::vector<double>& dst) {
    for (int x = 0; x < w.size(); ++x) {
      if (!w.is_interior(x)) {
        dst[x] = 0.0;  // boundary held fixed
        continue;
      }
      double acc = 0.0;
      for (const auto& e : w.neighbors_of(x))
        acc += e.weight * (src[e.idx] - src[x]);
      dst[x] = acc / w.measure_of(x);
    }
  };

  auto snapshot = [&](double t) {
    VertexFunction f(u0.window_ptr());
    for (int i = 0; i < w.size(); ++i) f.set(i, u[i]);
    return EvolveSample{t, std::move(f)};
  };

  std::vector<EvolveSample> samples;
  samples.push_back(snapshot(0.0));

  for (long s = 1; s <= nsteps; ++s) {
    lap_into(u, k1);
    for (size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
    lap_into(tmp, k2);
    for (size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
    lap_into(tmp, k3);
    for (size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + dt * k3[i];
    lap_into(tmp, k4);
    for (size_t i = 0; i < u.size(); ++i)
      u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    double sup = 0.0;
    for (double v : u) sup = std::max(sup, std::abs(v));
    if (sup > 1e6 * (1.0 + sup0))
      throw IntegrationError("evolve: norm blow-up at t = " +
                             std::to_string(s * dt));

    if ((sample_stride > 0 && s % sample_stride == 0) || s == nsteps)
      samples.push_back(snapshot(s * dt));
  }
  return samples;
}

}  // namespace calgraph
