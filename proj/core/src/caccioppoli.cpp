#include "calgraph/caccioppoli.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace calgraph {

namespace {

double field_scale(const PolyField& u) { return u.max_abs_coeff(); }
double field_scale(const DiscreteField& u) { return u.max_abs(); }

template <typename Field>
CaccioppoliReport report_impl(const Field& u, const MetricData& metric,
                              double R, Cylinder::Mode mode) {
  if (R < metric.jump_size())
    throw DomainError("Caccioppoli needs R >= jump size s = " +
                      std::to_string(metric.jump_size()));
  if (mode == Cylinder::Mode::discrete &&
      std::abs(R - std::round(R)) > 1e-9)
    throw DomainError("discrete Caccioppoli needs an integer radius");

  const double res = residual(u);
  if (res > 1e-9 * std::max(1.0, field_scale(u)))
    throw DomainError("field is not caloric: residual " + std::to_string(res));

  CaccioppoliReport rep;
  rep.mode = mode;
  rep.R = R;
  const Cylinder inner{mode, R};
  const Cylinder outer{mode, 9.0 * R};
  rep.gradient_term =
      R * R * cylinder_aggregate(u, metric, Quantity::gamma_u, inner);
  const Quantity time_q = (mode == Cylinder::Mode::continuous)
                              ? Quantity::ut_sq
                              : Quantity::dtu_sq;
  rep.time_term =
      R * R * R * R * cylinder_aggregate(u, metric, time_q, inner);
  rep.rhs = cylinder_aggregate(u, metric, Quantity::u_sq, outer);
  const double num = rep.gradient_term + rep.time_term;
  rep.ratio = (num == 0.0 && rep.rhs == 0.0) ? 0.0 : num / rep.rhs;
  return rep;
}

template <typename Field>
SweepResult sweep_impl(const Field& u, const MetricData& metric,
                       std::span<const double> radii, Cylinder::Mode mode) {
  SweepResult out;
  for (double R : radii) {
    try {
      out.reports.push_back(report_impl(u, metric, R, mode));
    } catch (const CoverageError& e) {
      throw CoverageError("sweep at R = " + std::to_string(R) + ": " +
                          e.what());
    } catch (const DomainError& e) {
      throw DomainError("sweep at R = " + std::to_string(R) + ": " + e.what());
    }
    out.max_ratio = std::max(out.max_ratio, out.reports.back().ratio);
  }
  return out;
}

std::string format_radius(double R) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", R);
  return buf;
}

}  // namespace

CaccioppoliReport caccioppoli_report(const PolyField& u,
                                     const MetricData& metric, double R,
                                     Cylinder::Mode mode) {
  return report_impl(u, metric, R, mode);
}

CaccioppoliReport caccioppoli_report(const DiscreteField& u,
                                     const MetricData& metric, double R,
                                     Cylinder::Mode mode) {
  return report_impl(u, metric, R, mode);
}

SweepResult ratio_sweep(const PolyField& u, const MetricData& metric,
                        std::span<const double> radii, Cylinder::Mode mode) {
  return sweep_impl(u, metric, radii, mode);
}

SweepResult ratio_sweep(const DiscreteField& u, const MetricData& metric,
                        std::span<const double> radii, Cylinder::Mode mode) {
  return sweep_impl(u, metric, radii, mode);
}

std::string mode_name(Cylinder::Mode mode) {
  return mode == Cylinder::Mode::continuous ? "continuous" : "discrete";
}

void Baseline::record(const std::string& id, Cylinder::Mode mode, double R,
                      double ratio) {
  entries_[{id, mode_name(mode), format_radius(R)}] = ratio;
}

const double* Baseline::lookup(const std::string& id, Cylinder::Mode mode,
                               double R) const {
  auto it = entries_.find({id, mode_name(mode), format_radius(R)});
  return it == entries_.end() ? nullptr : &it->second;
}

void Baseline::write(std::ostream& out) const {
  out << "# id mode R ratio\n";
  char buf[64];
  for (const auto& [key, ratio] : entries_) {
    std::snprintf(buf, sizeof(buf), "%.17g", ratio);
    out << std::get<0>(key) << ' ' << std::get<1>(key) << ' '
        << std::get<2>(key) << ' ' << buf << '\n';
  }
}

Baseline Baseline::read(std::istream& in) {
  Baseline b;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::string id, mode, radius;
    double ratio;
    if (!(row >> id >> mode >> radius >> ratio)) continue;
    b.entries_[{id, mode, radius}] = ratio;
  }
  return b;
}

}  // namespace calgraph
