#include "calgraph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace calgraph {

int MetricData::entry(int idx, int k) const {
  auto nbrs = win_->neighbors_of(idx);
  if (k < 0 || static_cast<size_t>(k) >= nbrs.size())
    throw DomainError("metric: neighbor entry out of range");
  return static_cast<int>(nbrs.data() - win_->neighbors_of(0).data()) + k;
}

void MetricData::run_dijkstra() {
  const auto& w = *win_;
  const int n = w.size();
  rho_.assign(n, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, VertexId>;  // (distance, id): deterministic
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  rho_[w.base_index()] = 0.0;
  pq.emplace(0.0, w.base_id());
  std::vector<char> done(n, 0);
  while (!pq.empty()) {
    auto [d, id] = pq.top();
    pq.pop();
    int x = w.index_of(id);
    if (done[x]) continue;
    done[x] = 1;
    auto nbrs = w.neighbors_of(x);
    for (size_t k = 0; k < nbrs.size(); ++k) {
      int y = nbrs[k].idx;
      double nd = d + sigma(x, static_cast<int>(k));
      if (nd < rho_[y]) {
        rho_[y] = nd;
        pq.emplace(nd, w.id_of(y));
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (!done[i])
      throw StructuralError("metric: vertex " + std::to_string(w.id_of(i)) +
                            " unreachable from the base");
}

void MetricData::finish() {
  jump_ = 0.0;
  for (double s : sigma_) jump_ = std::max(jump_, s);
  coverage_ = std::numeric_limits<double>::infinity();
  for (int i = 0; i < win_->size(); ++i)
    if (!win_->is_interior(i)) coverage_ = std::min(coverage_, rho_[i]);
}

bool MetricData::fits(double R) const { return R < coverage_; }

std::vector<int> MetricData::ball(double R) const {
  if (R < 0.0) throw DomainError("ball: negative radius");
  if (!fits(R))
    throw CoverageError("ball of radius " + std::to_string(R) +
                        " reaches the window boundary (coverage " +
                        std::to_string(coverage_) + ")");
  std::vector<int> out;
  for (int i = 0; i < win_->size(); ++i)
    if (rho_[i] <= R) out.push_back(i);
  return out;
}

double MetricData::ball_measure(double R) const {
  double m = 0.0;
  for (int i : ball(R)) m += win_->measure_of(i);
  return m;
}

MetricData MetricData::from_edge_lengths(
    std::shared_ptr<const GraphWindow> w,
    const std::function<double(VertexId, VertexId)>& sigma) {
  MetricData m;
  m.win_ = std::move(w);
  const auto& win = *m.win_;
  int total = 0;
  for (int i = 0; i < win.size(); ++i)
    total += static_cast<int>(win.neighbors_of(i).size());
  m.sigma_.resize(total);
  m.sigma_sq_.resize(total);
  int pos = 0;
  for (int i = 0; i < win.size(); ++i) {
    for (const auto& e : win.neighbors_of(i)) {
      double s = sigma(win.id_of(i), win.id_of(e.idx));
      if (!(s > 0.0))
        throw DomainError("edge length must be positive on edge " +
                          std::to_string(win.id_of(i)) + " ~ " +
                          std::to_string(win.id_of(e.idx)));
      m.sigma_[pos] = s;
      m.sigma_sq_[pos] = s * s;
      ++pos;
    }
  }
  m.run_dijkstra();
  m.finish();
  return m;
}

MetricData construct_path_metric(std::shared_ptr<const GraphWindow> w) {
  MetricData m;
  m.win_ = std::move(w);
  const auto& win = *m.win_;
  int total = 0;
  for (int i = 0; i < win.size(); ++i)
    total += static_cast<int>(win.neighbors_of(i).size());
  m.sigma_.resize(total);
  m.sigma_sq_.resize(total);
  int pos = 0;
  for (int i = 0; i < win.size(); ++i) {
    const double ri = win.measure_of(i) / win.full_weight(i);
    for (const auto& e : win.neighbors_of(i)) {
      const double rj = win.measure_of(e.idx) / win.full_weight(e.idx);
      const double ssq = std::min(ri, rj);
      m.sigma_sq_[pos] = ssq;
      m.sigma_[pos] = std::sqrt(ssq);
      ++pos;
    }
  }
  m.run_dijkstra();
  m.finish();
  return m;
}

MetricData metric_with_uniform_sigma(std::shared_ptr<const GraphWindow> w,
                                     double sigma) {
  if (!(sigma > 0.0)) throw DomainError("uniform sigma must be positive");
  return MetricData::from_edge_lengths(
      std::move(w), [sigma](VertexId, VertexId) { return sigma; });
}

SlackReport verify_intrinsic(const MetricData& metric) {
  const auto& w = metric.window();
  SlackReport rep;
  rep.slack.assign(w.size(), std::numeric_limits<double>::quiet_NaN());
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < w.size(); ++i) {
    if (!w.is_interior(i)) continue;
    auto nbrs = w.neighbors_of(i);
    double acc = 0.0;
    for (size_t k = 0; k < nbrs.size(); ++k)
      acc += nbrs[k].weight * metric.sigma_sq(i, static_cast<int>(k));
    rep.slack[i] = w.measure_of(i) - acc;
    rep.min_slack = std::min(rep.min_slack, rep.slack[i]);
  }
  rep.admissible = rep.min_slack >= -1e-12;
  return rep;
}

CutoffFunction cutoff_eta(const MetricData& metric, double R) {
  if (!(R > 0.0)) throw DomainError("cutoff: R must be positive");
  if (!metric.fits(2.0 * R + metric.jump_size()))
    throw CoverageError("cutoff support B_{2R} plus one jump exceeds window "
                        "coverage");
  const auto& w = metric.window();
  CutoffFunction out;
  out.R = R;
  out.eta = VertexFunction(metric.window_ptr());
  for (int i = 0; i < w.size(); ++i) {
    double v = 2.0 - metric.rho(i) / R;
    out.eta.set(i, std::clamp(v, 0.0, 1.0));
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < w.size(); ++i) {
    auto nbrs = w.neighbors_of(i);
    for (size_t k = 0; k < nbrs.size(); ++k) {
      double viol = std::abs(out.eta[nbrs[k].idx] - out.eta[i]) -
                    metric.sigma(i, static_cast<int>(k)) / R;
      worst = std::max(worst, viol);
    }
  }
  out.max_lipschitz_violation = worst;
  return out;
}

VolumeGrowthFit fit_volume_exponent(const MetricData& metric,
                                    std::span<const double> radii) {
  if (radii.size() < 3)
    throw DomainError("volume fit needs at least 3 radii");
  VolumeGrowthFit fit;
  for (double R : radii) {
    fit.radii.push_back(R);
    fit.measures.push_back(metric.ball_measure(R));
  }
  const size_t n = radii.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    double x = std::log1p(fit.radii[i]);
    double y = std::log(fit.measures[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw DomainError("volume fit: degenerate radii");
  fit.alpha_hat = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.alpha_hat * sx) / n;
  fit.c_hat = std::exp(intercept);
  for (size_t i = 0; i < n; ++i) {
    double x = std::log1p(fit.radii[i]);
    double y = std::log(fit.measures[i]);
    fit.residuals.push_back(y - (intercept + fit.alpha_hat * x));
  }
  return fit;
}

}  // namespace calgraph
