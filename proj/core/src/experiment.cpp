#include "calgraph/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "calgraph/operators.hpp"

namespace calgraph {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

FamilyConfig parse_family(const std::string& name) {
  FamilyConfig f;
  auto lattice = [](int d, bool normalized) {
    FamilyConfig c;
    c.family = FamilyConfig::Family::lattice_zd;
    c.dimension = d;
    c.weight = {WeightRule::Kind::constant, 1.0, 1.0};
    c.measure.kind = normalized ? MeasureRule::Kind::normalized
                                : MeasureRule::Kind::constant;
    c.measure.value = 1.0;
    return c;
  };
  if (name == "z1") return lattice(1, false);
  if (name == "z2") return lattice(2, false);
  if (name == "z3") return lattice(3, false);
  if (name == "z1n") return lattice(1, true);
  if (name == "z2n") return lattice(2, true);
  if (name == "wline1" || name == "wline2") {
    f.family = FamilyConfig::Family::weighted_line;
    f.dimension = 1;
    f.weight.kind = WeightRule::Kind::line_power;
    f.weight.exponent = (name == "wline1") ? 1.0 : 2.0;
    f.measure = {MeasureRule::Kind::constant, 1.0};
    return f;
  }
  if (name.rfind("star", 0) == 0) {
    f.family = FamilyConfig::Family::star;
    f.leaves = std::max(1, std::atoi(name.c_str() + 4));
    return f;
  }
  throw ConfigError("unknown family '" + name + "'");
}

std::string list_families_text() {
  return
      "z1, z2, z3      integer lattices, unit weights and measures\n"
      "z1n, z2n        lattices with the normalized measure m_x = sum w_xy\n"
      "wline1, wline2  line with w_{n,n+1} = (1+|n|)^p, p = 1 or 2, m = 1\n"
      "                (weighted degree grows without bound along the line)\n"
      "starN           star with N leaves, unit weights\n";
}

const std::map<std::string, std::string>& experiment_explanations() {
  static const std::map<std::string, std::string> m = {
      {"verify-metric",
       "Checks the intrinsic-metric inequality sum_y w_xy sigma_xy^2 <= m_x "
       "at every interior vertex (slack report), and that the radial cut-off "
       "eta_R = clamp(2 - rho/R, 0, 1) obeys |eta(y)-eta(x)| <= sigma_xy/R "
       "on every edge."},
      {"caccioppoli-sweep",
       "For a caloric field u computes R^2*(Gamma(u) over the cylinder "
       "B_R x [-R^2,0]) + R^4*(u_t^2 or (D_t u)^2 over the same cylinder) "
       "and the mass of u^2 over B_{9R} x [-(9R)^2,0], then reports their "
       "ratio across a radius sweep. Bounded ratios across R are the "
       "energy-inequality evidence; ratios are compared against a recorded "
       "baseline when one is supplied."},
      {"dimension",
       "Exactly enumerates harmonic polynomials of degree <= floor(2k) on "
       "Z^d (kernel of the lattice Laplacian over the rationals) and the "
       "space of coefficient chains (p_0..p_l), l = floor(k), and checks "
       "dim P <= (k+1) dim H."},
      {"structure-roundtrip",
       "Builds a coefficient chain over a harmonic top, assembles the "
       "ancient solution u = sum p_i t^i (or the binomial-basis analog), "
       "samples l+1 time slices and re-extracts the coefficients through "
       "the time-basis system; checks the roundtrip exactly over the "
       "rationals and to 1e-9 in floating point."},
      {"volume-fit",
       "Measures m(B_R) for a list of radii and fits log m(B_R) against "
       "log(1+R), reporting the growth exponent alpha and constant C."},
      {"evolve",
       "Integrates du/dt = Lap u forward with RK4 from u0 = |x|^2 and "
       "compares against the exact polynomial solution |x|^2 + Lap(|x|^2) t "
       "on a core region away from the window boundary."},
  };
  return m;
}

namespace {

FamilyConfig family_from_json(const json& j) {
  if (j.is_string()) return parse_family(j.get<std::string>());
  FamilyConfig f;
  const std::string kind = j.value("kind", "lattice-zd");
  if (kind == "lattice-zd")
    f.family = FamilyConfig::Family::lattice_zd;
  else if (kind == "weighted-line")
    f.family = FamilyConfig::Family::weighted_line;
  else if (kind == "star")
    f.family = FamilyConfig::Family::star;
  else if (kind == "normalized-wrap")
    f.family = FamilyConfig::Family::normalized_wrap;
  else
    throw ConfigError("unknown family kind '" + kind + "'");
  f.dimension = j.value("d", 1);
  f.leaves = j.value("leaves", 4);
  if (j.contains("weight")) {
    const auto& w = j["weight"];
    const std::string wk = w.value("kind", "constant");
    if (wk == "constant")
      f.weight.kind = WeightRule::Kind::constant;
    else if (wk == "line-power")
      f.weight.kind = WeightRule::Kind::line_power;
    else
      throw ConfigError("unknown weight rule '" + wk + "'");
    f.weight.value = w.value("value", 1.0);
    f.weight.exponent = w.value("exponent", 1.0);
  }
  if (j.contains("measure")) {
    const auto& m = j["measure"];
    const std::string mk = m.value("kind", "constant");
    if (mk == "constant")
      f.measure.kind = MeasureRule::Kind::constant;
    else if (mk == "normalized")
      f.measure.kind = MeasureRule::Kind::normalized;
    else
      throw ConfigError("unknown measure rule '" + mk + "'");
    f.measure.value = m.value("value", 1.0);
  }
  if (j.contains("inner"))
    f.inner = std::make_shared<FamilyConfig>(family_from_json(j["inner"]));
  return f;
}

std::string family_name_from_json(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.value("kind", "lattice-zd");
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig c;
  try {
    if (j.contains("experiment"))
      c.tag = j["experiment"].get<std::string>();
    else if (j.contains("tag"))
      c.tag = j["tag"].get<std::string>();
    else
      throw ConfigError("config needs an 'experiment' tag");
    if (j.contains("family")) {
      c.family = family_from_json(j["family"]);
      c.family_name = family_name_from_json(j["family"]);
    }
    c.metric = j.value("metric", c.metric);
    c.sigma = j.value("sigma", c.sigma);
    if (j.contains("radii"))
      c.radii = j["radii"].get<std::vector<double>>();
    c.mode = j.value("mode", c.mode);
    if (j.contains("fields"))
      c.fields = j["fields"].get<std::vector<std::string>>();
    else if (j.contains("field"))
      c.fields = {j["field"].get<std::string>()};
    c.top = j.value("top", c.top);
    c.k = j.value("k", c.k);
    if (j.contains("ks")) c.ks = j["ks"].get<std::vector<double>>();
    c.d = j.value("d", c.d);
    if (j.contains("ds")) c.ds = j["ds"].get<std::vector<int>>();
    c.l = j.value("l", c.l);
    c.hops = j.value("hops", c.hops);
    c.t_end = j.value("t_end", c.t_end);
    c.dt = j.value("dt", c.dt);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    c.out_dir = j.value("out", c.out_dir);
    c.baseline_path = j.value("baseline", c.baseline_path);
    c.write_baseline_path = j.value("write_baseline", c.write_baseline_path);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  if (!std::is_sorted(c.radii.begin(), c.radii.end()))
    throw ConfigError("radii must be sorted ascending");
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

SizedWindow window_covering(const std::shared_ptr<GraphProvider>& provider,
                            double target, int extra_hops) {
  int hops = 8;
  for (;;) {
    auto w = build_window(provider, provider->base(), hops);
    auto metric = construct_path_metric(w);
    if (metric.coverage_radius() > target) {
      if (extra_hops == 0) return {w, std::move(metric)};
      auto big = build_window(provider, provider->base(), hops + extra_hops);
      auto big_metric = construct_path_metric(big);
      return {big, std::move(big_metric)};
    }
    if (w->size() > (1 << 22))
      throw ResourceError("window exceeded 4M vertices before covering "
                          "radius " + std::to_string(target));
    hops *= 2;
  }
}

namespace {

Cylinder::Mode parse_mode_one(const std::string& s) {
  if (s == "continuous") return Cylinder::Mode::continuous;
  if (s == "discrete") return Cylinder::Mode::discrete;
  throw ConfigError("unknown mode '" + s + "'");
}

std::vector<Cylinder::Mode> parse_modes(const std::string& s) {
  if (s == "both")
    return {Cylinder::Mode::continuous, Cylinder::Mode::discrete};
  return {parse_mode_one(s)};
}

HierarchyMode hierarchy_mode(Cylinder::Mode m) {
  return m == Cylinder::Mode::continuous ? HierarchyMode::continuous
                                         : HierarchyMode::discrete;
}

bool is_unit_lattice(const FamilyConfig& f) {
  return (f.family == FamilyConfig::Family::lattice_zd) &&
         f.weight.kind == WeightRule::Kind::constant && f.weight.value == 1.0 &&
         f.measure.kind == MeasureRule::Kind::constant &&
         f.measure.value == 1.0;
}

LatticePolynomial parse_top(const std::string& name, int d) {
  using LP = LatticePolynomial;
  if (name == "one") return LP::constant(d, Rational(1));
  if (name == "x") return LP::variable(d, 0);
  if (name == "xy") {
    if (d < 2) throw ConfigError("top 'xy' needs d >= 2");
    return LP::variable(d, 0) * LP::variable(d, 1);
  }
  if (name == "x2-y2") {
    if (d < 2) throw ConfigError("top 'x2-y2' needs d >= 2");
    return LP::variable(d, 0, 2) - LP::variable(d, 1, 2);
  }
  if (name == "x3-3xy2") {
    if (d < 2) throw ConfigError("top 'x3-3xy2' needs d >= 2");
    return LP::variable(d, 0, 3) -
           LP::variable(d, 0) * LP::variable(d, 1, 2) * Rational(3);
  }
  throw ConfigError("unknown hierarchy top '" + name + "'");
}

double uniform_pm1(std::mt19937_64& eng) {
  return 2.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 1.0;
}

/// Named corpus entry: either a polynomial-in-time field or a marched grid
/// field, plus the growth rate its construction guarantees.
struct CorpusField {
  std::string name;
  std::optional<PolyField> poly;
  std::optional<DiscreteField> grid;
  double growth_rate = 0.0;
};

bool is_marched_name(const std::string& name) {
  return name.rfind("marched-random", 0) == 0;
}

std::uint64_t marched_seed(const std::string& name, std::uint64_t base_seed) {
  auto colon = name.find(':');
  if (colon == std::string::npos) return base_seed;
  return base_seed + std::stoull(name.substr(colon + 1));
}

CorpusField build_poly_field(const std::string& name,
                             const FamilyConfig& family,
                             const std::shared_ptr<const GraphWindow>& w,
                             Cylinder::Mode mode) {
  const auto basis = (mode == Cylinder::Mode::continuous)
                         ? PolyField::Basis::monomial
                         : PolyField::Basis::binomial;
  CorpusField out;
  out.name = name;
  if (name == "constant") {
    out.poly = PolyField(basis, {VertexFunction(w, 1.0)});
    out.growth_rate = 0.0;
    return out;
  }
  if (name == "linear") {
    auto p0 = VertexFunction::from_coords(
        w, [](std::span<const int> c) { return static_cast<double>(c[0]); });
    out.poly = PolyField(basis, {std::move(p0)});
    out.growth_rate = 1.0;
    return out;
  }
  if (name == "square-plus-time") {
    auto p0 = VertexFunction::from_coords(w, [](std::span<const int> c) {
      double s = 0.0;
      for (int v : c) s += static_cast<double>(v) * v;
      return s;
    });
    const double c = laplacian_at(p0, w->base_index());
    const double p1 = (mode == Cylinder::Mode::continuous) ? c : -c;
    out.poly = PolyField(basis, {std::move(p0), VertexFunction(w, p1)});
    out.growth_rate = 2.0;
    return out;
  }
  if (name == "quartic-chain") {
    if (!is_unit_lattice(family))
      throw ConfigError("quartic-chain needs a unit-weight lattice family");
    auto chain = solve_hierarchy(
        LatticePolynomial::constant(w->dimension(), Rational(1)), 2,
        hierarchy_mode(mode));
    out.poly = materialize(chain, w);
    out.growth_rate = chain_growth_rate(chain);
    return out;
  }
  throw ConfigError("unknown field '" + name + "'");
}

CorpusField build_marched_field(const std::string& name,
                                const std::shared_ptr<const GraphWindow>& w,
                                const MetricData& metric, double outer_radius,
                                std::uint64_t seed) {
  const int steps =
      static_cast<int>(std::lround(outer_radius * outer_radius));
  std::mt19937_64 eng(seed);
  VertexFunction u0(w);
  for (int i = 0; i < w->size(); ++i) u0.set(i, uniform_pm1(eng));

  auto ball = metric.ball(outer_radius);
  std::vector<char> in_keep(w->size(), 0);
  for (int idx : ball) {
    in_keep[idx] = 1;
    for (const auto& e : w->neighbors_of(idx)) in_keep[e.idx] = 1;
  }
  std::vector<int> keep;
  for (int i = 0; i < w->size(); ++i)
    if (in_keep[i]) keep.push_back(i);

  CorpusField out;
  out.name = name;
  out.grid = march_backward_discrete(u0, steps, keep);
  return out;
}

struct TableBuilder {
  Table t;
  void row(std::vector<std::string> cells) { t.rows.push_back(std::move(cells)); }
};

// ---- experiments ----

RunReport run_verify_metric(const ExperimentConfig& c) {
  RunReport rep;
  rep.tag = c.tag;
  auto provider = generate(c.family);
  const int hops = c.hops > 0 ? c.hops : 24;
  auto window = build_window(provider, provider->base(), hops);
  MetricData metric = (c.metric == "uniform-sigma")
                          ? metric_with_uniform_sigma(window, c.sigma)
                          : construct_path_metric(window);

  auto slack = verify_intrinsic(metric);
  Table t;
  t.name = "verify-metric";
  t.header = {"family", "vertex", "rho", "slack"};
  for (int i = 0; i < window->size(); ++i) {
    if (!window->is_interior(i)) continue;
    t.rows.push_back({provider->family_id(), std::to_string(window->id_of(i)),
                      format_double(metric.rho(i)),
                      format_double(slack.slack[i])});
  }
  rep.tables.push_back(std::move(t));
  rep.messages.push_back("family " + provider->family_id() + ": min slack " +
                         format_double(slack.min_slack) +
                         (slack.admissible ? " (admissible)"
                                           : " (NOT intrinsic)"));
  rep.passed = slack.admissible;

  if (slack.admissible) {
    const double R = metric.coverage_radius() / 4.0;
    if (R > 0.0 && metric.fits(2.0 * R + metric.jump_size())) {
      auto cut = cutoff_eta(metric, R);
      rep.messages.push_back(
          "cutoff R=" + format_double(R) + ": max Lipschitz violation " +
          format_double(cut.max_lipschitz_violation));
      if (cut.max_lipschitz_violation > 1e-12) rep.passed = false;
    }
  }
  return rep;
}

RunReport run_volume_fit(const ExperimentConfig& c) {
  RunReport rep;
  rep.tag = c.tag;
  auto provider = generate(c.family);
  std::vector<double> radii =
      c.radii.empty() ? std::vector<double>{4, 8, 16, 32} : c.radii;
  SizedWindow sized;
  if (c.hops > 0) {
    sized.window = build_window(provider, provider->base(), c.hops);
    sized.metric = construct_path_metric(sized.window);
  } else {
    sized = window_covering(provider, radii.back());
  }
  auto fit = fit_volume_exponent(sized.metric, radii);
  Table t;
  t.name = "volume-fit";
  t.header = {"family", "R", "measure", "alpha_hat", "c_hat", "log_residual"};
  for (size_t i = 0; i < fit.radii.size(); ++i) {
    t.rows.push_back({provider->family_id(), format_double(fit.radii[i]),
                      format_double(fit.measures[i]),
                      format_double(fit.alpha_hat), format_double(fit.c_hat),
                      format_double(fit.residuals[i])});
  }
  rep.tables.push_back(std::move(t));
  rep.messages.push_back("family " + provider->family_id() +
                         ": alpha_hat = " + format_double(fit.alpha_hat) +
                         ", C_hat = " + format_double(fit.c_hat));
  return rep;
}

RunReport run_dimension(const ExperimentConfig& c) {
  RunReport rep;
  rep.tag = c.tag;
  auto ds = c.ds.empty() ? std::vector<int>{c.d} : c.ds;
  auto ks = c.ks.empty() ? std::vector<double>{c.k} : c.ks;
  Table t;
  t.name = "dimension";
  t.header = {"d", "k", "mode", "dim_H", "dim_P", "bound", "holds"};
  for (int d : ds) {
    for (double k : ks) {
      for (auto mode : parse_modes(c.mode)) {
        auto r = dimension_bound_report(
            d, k, hierarchy_mode(mode));
        t.rows.push_back({std::to_string(d), format_double(k),
                          mode_name(mode), std::to_string(r.dim_H),
                          std::to_string(r.dim_P), format_double(r.bound),
                          r.holds ? "1" : "0"});
        if (!r.holds) rep.passed = false;
        rep.messages.push_back(
            "d=" + std::to_string(d) + " k=" + format_double(k) + " " +
            mode_name(mode) + ": dim_H=" + std::to_string(r.dim_H) +
            " dim_P=" + std::to_string(r.dim_P) +
            " bound=" + format_double(r.bound) +
            (r.holds ? " holds" : " VIOLATED"));
      }
    }
  }
  rep.tables.push_back(std::move(t));
  return rep;
}

RunReport run_structure_roundtrip(const ExperimentConfig& c) {
  RunReport rep;
  rep.tag = c.tag;
  if (!is_unit_lattice(c.family))
    throw ConfigError("structure-roundtrip needs a unit-weight lattice");
  const int d = c.family.dimension;
  auto provider = generate(c.family);
  auto window = build_window(provider, provider->base(),
                             c.hops > 0 ? c.hops : 6);
  Table t;
  t.name = "structure-roundtrip";
  t.header = {"d", "l", "mode", "top", "backend", "max_rel_err", "exact"};
  for (auto mode : parse_modes(c.mode)) {
    const auto hmode = hierarchy_mode(mode);
    auto top = parse_top(c.top, d);
    if (!top.laplacian().is_zero())
      throw ConfigError("top '" + c.top + "' is not harmonic");
    auto chain = solve_hierarchy(top, c.l, hmode);
    auto exact = assemble_ancient(chain);

    // rational backend
    std::vector<std::pair<Rational, LatticePolynomial>> slices;
    for (const auto& time : default_times_exact(c.l, hmode))
      slices.emplace_back(time, exact.slice(time));
    auto back = extract_coefficients_exact(slices, c.l, hmode);
    bool exact_ok = true;
    for (int i = 0; i <= c.l; ++i)
      if (!(back[i] == chain.coeffs[i])) exact_ok = false;
    t.rows.push_back({std::to_string(d), std::to_string(c.l), mode_name(mode),
                      c.top, "rational", "0", exact_ok ? "1" : "0"});
    if (!exact_ok) rep.passed = false;

    // floating backend on the window
    auto field = materialize(chain, window);
    std::vector<std::pair<double, VertexFunction>> fslices;
    for (double time : default_times(c.l, hmode)) {
      VertexFunction s(window);
      for (int i = 0; i < window->size(); ++i)
        s.set(i, mode == Cylinder::Mode::continuous
                     ? field.value(i, time)
                     : field.value_int(i, std::lround(time)));
      fslices.emplace_back(time, std::move(s));
    }
    auto coeffs = extract_coefficients(fslices, c.l, hmode);
    double max_rel = 0.0;
    for (int i = 0; i <= c.l; ++i) {
      for (int v = 0; v < window->size(); ++v) {
        const double want = field.coeff(i)[v];
        const double got = coeffs[i][v];
        max_rel = std::max(max_rel, std::abs(got - want) /
                                        std::max(1.0, std::abs(want)));
      }
    }
    t.rows.push_back({std::to_string(d), std::to_string(c.l), mode_name(mode),
                      c.top, "floating", format_double(max_rel),
                      max_rel <= 1e-9 ? "1" : "0"});
    if (max_rel > 1e-9) rep.passed = false;
    rep.messages.push_back("mode " + mode_name(mode) + " top " + c.top +
                           ": rational roundtrip " +
                           (exact_ok ? "exact" : "BROKEN") +
                           ", floating max rel err " + format_double(max_rel));
  }
  rep.tables.push_back(std::move(t));
  return rep;
}

RunReport run_caccioppoli_sweep(const ExperimentConfig& c) {
  RunReport rep;
  rep.tag = c.tag;
  auto provider = generate(c.family);
  std::vector<std::string> fields =
      c.fields.empty() ? std::vector<std::string>{"square-plus-time"}
                       : c.fields;
  if (c.radii.empty()) throw ConfigError("caccioppoli-sweep needs radii");
  const double r_max = c.radii.back();
  const double outer = 9.0 * r_max;

  std::optional<Baseline> baseline;
  if (!c.baseline_path.empty()) {
    std::ifstream in(c.baseline_path);
    if (!in)
      throw ConfigError("cannot open baseline '" + c.baseline_path + "'");
    baseline = Baseline::read(in);
  }
  Baseline recorded;

  SizedWindow plain = window_covering(provider, outer);

  Table t;
  t.name = "caccioppoli-sweep";
  t.header = {"family", "field",    "mode", "R",     "gradient_term",
              "time_term", "rhs", "ratio", "baseline", "within"};
  double corpus_max_ratio = 0.0;

  for (auto mode : parse_modes(c.mode)) {
    for (const auto& name : fields) {
      SweepResult sweep;
      if (is_marched_name(name)) {
        if (mode == Cylinder::Mode::continuous)
          continue;  // marched fields are discrete-time objects
        const int steps =
            static_cast<int>(std::lround(outer * outer));
        SizedWindow sized = window_covering(provider, outer, steps + 1);
        auto cf = build_marched_field(name, sized.window, sized.metric, outer,
                                      marched_seed(name, c.seed));
        sweep = ratio_sweep(*cf.grid, sized.metric, c.radii, mode);
      } else {
        auto cf = build_poly_field(name, c.family, plain.window, mode);
        sweep = ratio_sweep(*cf.poly, plain.metric, c.radii, mode);
      }
      const std::string key = provider->family_id() + "/" + name;
      for (const auto& r : sweep.reports) {
        std::string base_str, within_str = "1";
        if (baseline) {
          const double* base = baseline->lookup(key, mode, r.R);
          if (base == nullptr) {
            base_str = "missing";
            within_str = "0";
            rep.passed = false;
          } else {
            base_str = format_double(*base);
            const bool ok = r.ratio <= *base * 1.05 + 1e-15;
            within_str = ok ? "1" : "0";
            if (!ok) rep.passed = false;
          }
        }
        if (!std::isfinite(r.ratio)) rep.passed = false;
        recorded.record(key, mode, r.R, r.ratio);
        t.rows.push_back({provider->family_id(), name, mode_name(mode),
                          format_double(r.R), format_double(r.gradient_term),
                          format_double(r.time_term), format_double(r.rhs),
                          format_double(r.ratio), base_str, within_str});
      }
      corpus_max_ratio = std::max(corpus_max_ratio, sweep.max_ratio);
      rep.messages.push_back("field " + key + " (" + mode_name(mode) +
                             "): max ratio " +
                             format_double(sweep.max_ratio));
    }
  }
  rep.messages.push_back("corpus max ratio " +
                         format_double(corpus_max_ratio));
  rep.tables.push_back(std::move(t));

  if (!c.write_baseline_path.empty()) {
    const fs::path path(c.write_baseline_path);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp);
      recorded.write(out);
    }
    fs::rename(tmp, path);
    rep.messages.push_back("baseline written to " + path.string());
  }
  return rep;
}

RunReport run_evolve(const ExperimentConfig& c) {
  RunReport rep;
  rep.tag = c.tag;
  auto provider = generate(c.family);
  const int hops = c.hops > 0 ? c.hops : 20;
  auto window = build_window(provider, provider->base(), hops);
  if (!window->has_coordinates())
    throw ConfigError("evolve needs a lattice family");

  auto u0 = VertexFunction::from_coords(window, [](std::span<const int> co) {
    double s = 0.0;
    for (int v : co) s += static_cast<double>(v) * v;
    return s;
  });
  const double lap_const = laplacian_at(u0, window->base_index());

  const long nsteps = std::lround(c.t_end / c.dt);
  const int stride = static_cast<int>(std::max(1L, nsteps / 10));
  auto samples = evolve_forward_continuous(u0, c.t_end, c.dt, stride);

  const int core_depth = std::max(0, hops - 15);
  Table t;
  t.name = "evolve";
  t.header = {"family", "t", "core_max_err"};
  double final_err = 0.0;
  for (const auto& s : samples) {
    double err = 0.0;
    for (int i = 0; i < window->size(); ++i) {
      if (window->depth_of(i) > core_depth) continue;
      const double exact = u0[i] + lap_const * s.t;
      err = std::max(err, std::abs(s.u[i] - exact));
    }
    final_err = err;
    t.rows.push_back(
        {provider->family_id(), format_double(s.t), format_double(err)});
  }
  rep.tables.push_back(std::move(t));
  rep.messages.push_back("core (depth <= " + std::to_string(core_depth) +
                         ") max error at t_end: " + format_double(final_err));
  rep.passed = final_err <= 1e-6;
  return rep;
}

}  // namespace

RunReport run(const ExperimentConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  RunReport rep;
  if (config.tag == "verify-metric")
    rep = run_verify_metric(config);
  else if (config.tag == "volume-fit")
    rep = run_volume_fit(config);
  else if (config.tag == "dimension")
    rep = run_dimension(config);
  else if (config.tag == "structure-roundtrip")
    rep = run_structure_roundtrip(config);
  else if (config.tag == "caccioppoli-sweep")
    rep = run_caccioppoli_sweep(config);
  else if (config.tag == "evolve")
    rep = run_evolve(config);
  else
    throw ConfigError("unknown experiment tag '" + config.tag + "'");
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return rep;
}

void write_outputs(const RunReport& report, const std::string& out_dir) {
  fs::create_directories(out_dir);
  auto write_file = [&](const std::string& name, const std::string& body) {
    const fs::path path = fs::path(out_dir) / name;
    const fs::path tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw ResourceError("cannot write " + tmp.string());
      out << body;
    }
    fs::rename(tmp, path);
  };

  for (const auto& table : report.tables) {
    std::string body;
    for (size_t i = 0; i < table.header.size(); ++i) {
      if (i) body += ',';
      body += table.header[i];
    }
    body += '\n';
    for (const auto& row : table.rows) {
      for (size_t i = 0; i < row.size(); ++i) {
        if (i) body += ',';
        body += row[i];
      }
      body += '\n';
    }
    write_file(table.name + ".csv", body);
  }

  std::string summary = "experiment: " + report.tag + "\n";
  for (const auto& m : report.messages) summary += m + "\n";
  summary += std::string("result: ") + (report.passed ? "PASS" : "FAIL") +
             "\n" + "wall_seconds: " + format_double(report.wall_seconds) +
             "\n";
  write_file("summary.txt", summary);
}

}  // namespace calgraph
