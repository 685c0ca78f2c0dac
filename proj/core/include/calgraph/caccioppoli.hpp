#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "calgraph/caloric.hpp"

namespace calgraph {

/// Both sides of the parabolic energy inequality
///   R^2 (Gamma term over Q_R) + R^4 (time term over Q_R)
///     <= C (u^2 term over Q_{9R})
/// for a caloric field, one radius, one mode.
struct CaccioppoliReport {
  Cylinder::Mode mode = Cylinder::Mode::continuous;
  double R = 0.0;
  double gradient_term = 0.0;  // R^2 * aggregate(Gamma(u), Q_R)
  double time_term = 0.0;      // R^4 * aggregate(u_t^2 or (D_t u)^2, Q_R)
  double rhs = 0.0;            // aggregate(u^2, Q_{9R})
  double ratio = 0.0;          // (gradient+time)/rhs, 0 when 0/0
};

CaccioppoliReport caccioppoli_report(const PolyField& u,
                                     const MetricData& metric, double R,
                                     Cylinder::Mode mode);
CaccioppoliReport caccioppoli_report(const DiscreteField& u,
                                     const MetricData& metric, double R,
                                     Cylinder::Mode mode);

struct SweepResult {
  std::vector<CaccioppoliReport> reports;
  double max_ratio = 0.0;
};

SweepResult ratio_sweep(const PolyField& u, const MetricData& metric,
                        std::span<const double> radii, Cylinder::Mode mode);
SweepResult ratio_sweep(const DiscreteField& u, const MetricData& metric,
                        std::span<const double> radii, Cylinder::Mode mode);

/// Calibration baseline: one recorded ratio per (field id, mode, R).
/// Plain-text rows "id mode R ratio"; '#' starts a comment.
class Baseline {
 public:
  void record(const std::string& id, Cylinder::Mode mode, double R,
              double ratio);
  /// nullptr when the entry is missing.
  const double* lookup(const std::string& id, Cylinder::Mode mode,
                       double R) const;

  void write(std::ostream& out) const;
  static Baseline read(std::istream& in);

  std::size_t size() const { return entries_.size(); }

 private:
  // key: (id, mode string, R formatted)
  std::map<std::tuple<std::string, std::string, std::string>, double> entries_;
};

std::string mode_name(Cylinder::Mode mode);

}  // namespace calgraph
