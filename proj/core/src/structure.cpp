#include "calgraph/structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace calgraph {

Rational binomial(long n, long i) {
  if (n < 0 || i < 0 || i > n) return Rational(0);
  Rational acc(1);
  for (long r = 0; r < i; ++r) {
    acc *= Rational(n - r);
    acc /= Rational(r + 1);
  }
  return acc;
}

namespace {

constexpr int kMonomialSpaceCap = 3000;

std::vector<LatticePolynomial::Exponents> checked_basis(int d, int degree) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  if (degree < 0) throw DomainError("degree must be >= 0");
  auto exps = monomial_exponents(d, degree);
  if (static_cast<int>(exps.size()) > kMonomialSpaceCap)
    throw ResourceError("monomial space of dimension " +
                        std::to_string(exps.size()) + " exceeds the cap");
  return exps;
}

// Matrix of the lattice Laplacian on the monomial basis of degree <= J.
RationalMatrix laplacian_matrix(
    int d, const std::vector<LatticePolynomial::Exponents>& exps) {
  std::map<LatticePolynomial::Exponents, int> row_of;
  for (size_t r = 0; r < exps.size(); ++r)
    row_of[exps[r]] = static_cast<int>(r);
  const int n = static_cast<int>(exps.size());
  auto A = RationalMatrix::zero(n, n);
  for (int c = 0; c < n; ++c) {
    auto lap = LatticePolynomial::monomial(d, exps[c], Rational(1)).laplacian();
    for (const auto& [e, coeff] : lap.terms()) {
      auto it = row_of.find(e);
      if (it == row_of.end())
        throw DomainError("Laplacian image left the monomial space");
      A.at(it->second, c) = coeff;
    }
  }
  return A;
}

LatticePolynomial poly_from_vector(
    int d, const std::vector<LatticePolynomial::Exponents>& exps,
    const std::vector<Rational>& v) {
  LatticePolynomial p(d);
  for (size_t i = 0; i < exps.size(); ++i)
    if (v[i] != 0) p.set_coefficient(exps[i], v[i]);
  return p;
}

std::vector<Rational> vector_from_poly(
    const std::vector<LatticePolynomial::Exponents>& exps,
    const std::map<LatticePolynomial::Exponents, int>& row_of,
    const LatticePolynomial& p) {
  std::vector<Rational> v(exps.size(), Rational(0));
  for (const auto& [e, c] : p.terms()) {
    auto it = row_of.find(e);
    if (it == row_of.end())
      throw DomainError("polynomial does not fit the monomial space");
    v[it->second] = c;
  }
  return v;
}

// Particular solution of Lap p = rhs with zero component along the harmonic
// subspace of the degree-(deg rhs + 2) monomial space.
LatticePolynomial solve_poisson(const LatticePolynomial& rhs) {
  const int d = rhs.dimension();
  const int J = std::max(rhs.total_degree(), 0) + 2;
  auto exps = checked_basis(d, J);
  std::map<LatticePolynomial::Exponents, int> row_of;
  for (size_t r = 0; r < exps.size(); ++r)
    row_of[exps[r]] = static_cast<int>(r);

  auto A = laplacian_matrix(d, exps);
  auto b = vector_from_poly(exps, row_of, rhs);
  auto v0 = solve(A, b);
  if (v0.empty() && !rhs.is_zero())
    throw DomainError("Poisson equation unsolvable in the polynomial space");
  if (v0.empty()) v0.assign(exps.size(), Rational(0));

  // project out the harmonic component (coefficient inner product)
  auto kernel = kernel_basis(laplacian_matrix(d, exps));
  const int m = static_cast<int>(kernel.size());
  if (m > 0) {
    auto G = RationalMatrix::zero(m, m);
    std::vector<Rational> r(m, Rational(0));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        Rational dot(0);
        for (size_t t = 0; t < v0.size(); ++t)
          dot += kernel[i][t] * kernel[j][t];
        G.at(i, j) = dot;
      }
      Rational dot(0);
      for (size_t t = 0; t < v0.size(); ++t) dot += kernel[i][t] * v0[t];
      r[i] = dot;
    }
    auto y = solve(G, r);
    if (y.empty()) throw DomainError("harmonic projection failed");
    for (int i = 0; i < m; ++i)
      for (size_t t = 0; t < v0.size(); ++t) v0[t] -= y[i] * kernel[i][t];
  }
  return poly_from_vector(d, exps, v0);
}

}  // namespace

Rational chain_residual(const HierarchyChain& chain) {
  if (chain.coeffs.empty()) throw DomainError("empty chain");
  const int l = chain.length();
  Rational worst(0);
  for (int i = 0; i <= l; ++i) {
    LatticePolynomial viol = chain.coeffs[i].laplacian();
    if (i < l) {
      const auto& next = chain.coeffs[i + 1];
      viol = (chain.mode == HierarchyMode::continuous)
                 ? viol - next * Rational(i + 1)
                 : viol + next;
    }
    worst = std::max(worst, viol.max_abs_coeff());
  }
  return worst;
}

HarmonicBasis harmonic_polynomial_basis(int d, int degree) {
  auto exps = checked_basis(d, degree);
  auto kernel = kernel_basis(laplacian_matrix(d, exps));
  HarmonicBasis out;
  out.dimension = static_cast<int>(kernel.size());
  for (const auto& v : kernel)
    out.basis.push_back(poly_from_vector(d, exps, v));
  return out;
}

HierarchyChain solve_hierarchy(const LatticePolynomial& top, int l,
                               HierarchyMode mode) {
  if (l < 0) throw DomainError("chain length must be >= 0");
  if (!top.laplacian().is_zero())
    throw DomainError("hierarchy top must be harmonic");
  HierarchyChain chain;
  chain.mode = mode;
  chain.coeffs.assign(static_cast<size_t>(l) + 1, top);
  for (int i = l - 1; i >= 0; --i) {
    const auto& above = chain.coeffs[i + 1];
    LatticePolynomial rhs = (mode == HierarchyMode::continuous)
                                ? above * Rational(i + 1)
                                : above * Rational(-1);
    chain.coeffs[i] = solve_poisson(rhs);
  }
  return chain;
}

Rational ExactAncientSolution::evaluate(std::span<const int> point,
                                        const Rational& t) const {
  Rational acc(0);
  if (basis == PolyField::Basis::monomial) {
    for (int i = chain.length(); i >= 0; --i)
      acc = acc * t + chain.coeffs[i].evaluate(point);
  } else {
    if (t.get_den() != 1)
      throw DomainError("binomial basis needs integer times");
    long ti = t.get_num().get_si();
    for (int i = 0; i <= chain.length(); ++i)
      acc += chain.coeffs[i].evaluate(point) * binomial(-ti, i);
  }
  return acc;
}

LatticePolynomial ExactAncientSolution::slice(const Rational& t) const {
  LatticePolynomial out(chain.dimension());
  if (basis == PolyField::Basis::monomial) {
    Rational tpow(1);
    for (int i = 0; i <= chain.length(); ++i) {
      out = out + chain.coeffs[i] * tpow;
      tpow *= t;
    }
  } else {
    if (t.get_den() != 1)
      throw DomainError("binomial basis needs integer times");
    long ti = t.get_num().get_si();
    for (int i = 0; i <= chain.length(); ++i)
      out = out + chain.coeffs[i] * binomial(-ti, i);
  }
  return out;
}

ExactAncientSolution assemble_ancient(const HierarchyChain& chain) {
  const int l = chain.length();
  for (int i = 0; i <= l; ++i) {
    LatticePolynomial viol = chain.coeffs[i].laplacian();
    if (i < l) {
      viol = (chain.mode == HierarchyMode::continuous)
                 ? viol - chain.coeffs[i + 1] * Rational(i + 1)
                 : viol + chain.coeffs[i + 1];
    }
    if (!viol.is_zero())
      throw DomainError("chain equation violated at index " +
                        std::to_string(i));
  }
  ExactAncientSolution out;
  out.chain = chain;
  out.basis = (chain.mode == HierarchyMode::continuous)
                  ? PolyField::Basis::monomial
                  : PolyField::Basis::binomial;
  return out;
}

PolyField materialize(const HierarchyChain& chain,
                      std::shared_ptr<const GraphWindow> window) {
  if (!window->has_coordinates() ||
      window->dimension() != chain.dimension())
    throw DomainError("window coordinates do not match the chain dimension");
  std::vector<VertexFunction> coeffs;
  coeffs.reserve(chain.coeffs.size());
  for (const auto& p : chain.coeffs) {
    coeffs.push_back(VertexFunction::from_coords(
        window, [&p](std::span<const int> c) { return p.evaluate_double(c); }));
  }
  return PolyField((chain.mode == HierarchyMode::continuous)
                       ? PolyField::Basis::monomial
                       : PolyField::Basis::binomial,
                   std::move(coeffs));
}

std::vector<Rational> default_times_exact(int l, HierarchyMode mode) {
  std::vector<Rational> times;
  if (mode == HierarchyMode::continuous) {
    // -1 < t_1 < ... < t_{l+1} = 0
    for (int j = 1; j <= l + 1; ++j) {
      Rational t = Rational(-1) + Rational(j, l + 1);
      t.canonicalize();
      times.push_back(t);
    }
  } else {
    // integers below -l: t_j = -l - j
    for (int j = 1; j <= l + 1; ++j) times.push_back(Rational(-l - j));
  }
  return times;
}

std::vector<double> default_times(int l, HierarchyMode mode) {
  std::vector<double> out;
  for (const auto& t : default_times_exact(l, mode))
    out.push_back(to_double(t));
  return out;
}

namespace {

void check_times_exact(const std::vector<Rational>& times, int l,
                       HierarchyMode mode) {
  for (size_t i = 0; i < times.size(); ++i)
    for (size_t j = i + 1; j < times.size(); ++j)
      if (times[i] == times[j])
        throw DomainError("coincident sample times make the system singular");
  for (const auto& t : times) {
    if (mode == HierarchyMode::continuous) {
      if (!(t > Rational(-1)) || t > Rational(0))
        throw DomainError("continuous sample times must lie in (-1, 0]");
    } else {
      if (t.get_den() != 1 || !(t < Rational(-l)))
        throw DomainError("discrete sample times must be integers below -l");
    }
  }
}

// inverse of the (l+1)x(l+1) time-basis matrix B, B[i][j] = basis_i(t_j)
RationalMatrix time_matrix_inverse(const std::vector<Rational>& times, int l,
                                   HierarchyMode mode) {
  const int n = l + 1;
  auto aug = RationalMatrix::zero(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Rational v;
      if (mode == HierarchyMode::continuous) {
        v = Rational(1);
        for (int p = 0; p < i; ++p) v *= times[j];
      } else {
        v = binomial(-times[j].get_num().get_si(), i);
      }
      aug.at(i, j) = v;
    }
    aug.at(i, n + i) = 1;
  }
  auto pivots = rref(aug);
  if (static_cast<int>(pivots.size()) != n || pivots[n - 1] >= n)
    throw DomainError("time-basis system is singular");
  auto inv = RationalMatrix::zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

}  // namespace

std::vector<LatticePolynomial> extract_coefficients_exact(
    const std::vector<std::pair<Rational, LatticePolynomial>>& slices, int l,
    HierarchyMode mode) {
  if (static_cast<int>(slices.size()) != l + 1)
    throw DomainError("need exactly l+1 time slices");
  std::vector<Rational> times;
  for (const auto& [t, s] : slices) times.push_back(t);
  check_times_exact(times, l, mode);
  auto inv = time_matrix_inverse(times, l, mode);

  const int d = slices[0].second.dimension();
  std::vector<LatticePolynomial> out(l + 1, LatticePolynomial(d));
  // p = B^{-T} u, i.e. p_i = sum_j inv[j][i] * u(., t_j)
  for (int i = 0; i <= l; ++i) {
    LatticePolynomial acc(d);
    for (int j = 0; j <= l; ++j)
      acc = acc + slices[j].second * inv.at(j, i);
    out[i] = acc;
  }
  return out;
}

std::vector<VertexFunction> extract_coefficients(
    const std::vector<std::pair<double, VertexFunction>>& slices, int l,
    HierarchyMode mode) {
  if (static_cast<int>(slices.size()) != l + 1)
    throw DomainError("need exactly l+1 time slices");
  // exact times (rationalized) keep the two backends aligned
  std::vector<Rational> times;
  for (const auto& [t, s] : slices) {
    if (mode == HierarchyMode::discrete) {
      if (std::abs(t - std::round(t)) > 1e-12)
        throw DomainError("discrete sample times must be integers");
      times.push_back(Rational(static_cast<long>(std::llround(t))));
    } else {
      // rationalize with denominator large enough for default grids
      const long den = 720720;
      times.push_back(rational(std::llround(t * den), den));
    }
  }
  check_times_exact(times, l, mode);
  auto inv = time_matrix_inverse(times, l, mode);

  auto window = slices[0].second.window_ptr();
  std::vector<VertexFunction> out;
  for (int i = 0; i <= l; ++i) {
    VertexFunction acc(window);
    for (int j = 0; j <= l; ++j) {
      const double c = to_double(inv.at(j, i));
      const auto vals = slices[j].second.values();
      auto accv = acc.mutable_values();
      for (size_t v = 0; v < accv.size(); ++v) accv[v] += c * vals[v];
    }
    out.push_back(std::move(acc));
  }
  return out;
}

double chain_growth_rate(const HierarchyChain& chain) {
  double rate = 0.0;
  for (int i = 0; i <= chain.length(); ++i) {
    if (chain.coeffs[i].is_zero()) continue;
    rate = std::max(rate,
                    static_cast<double>(chain.coeffs[i].total_degree() + 2 * i));
  }
  return rate;
}

namespace {

int vanishing_q(double k, double alpha) {
  const double x = 2.0 * k + alpha + 2.0;
  return static_cast<int>(std::floor(x / 4.0)) + 1;
}

}  // namespace

VanishingOrderReport vanishing_order_check(const PolyField& field, double k,
                                           double alpha, double tol) {
  VanishingOrderReport rep;
  rep.q = vanishing_q(k, alpha);
  rep.holds = true;
  const double scale = std::max(1.0, field.max_abs_coeff());
  for (int i = rep.q; i <= field.degree(); ++i) {
    double m = 0.0;
    for (double v : field.coeff(i).values()) m = std::max(m, std::abs(v));
    if (m > tol * scale) {
      rep.holds = false;
      rep.offending_index = i;
      break;
    }
  }
  return rep;
}

VanishingOrderReport vanishing_order_check(const HierarchyChain& chain,
                                           double k, double alpha) {
  VanishingOrderReport rep;
  rep.q = vanishing_q(k, alpha);
  rep.holds = true;
  for (int i = rep.q; i <= chain.length(); ++i) {
    if (!chain.coeffs[i].is_zero()) {
      rep.holds = false;
      rep.offending_index = i;
      break;
    }
  }
  return rep;
}

DimensionBoundReport dimension_bound_report(int d, double k,
                                            HierarchyMode mode) {
  if (!(k > 0)) throw DomainError("growth rate k must be positive");
  DimensionBoundReport rep;
  rep.d = d;
  rep.k = k;
  rep.mode = mode;
  const int J = static_cast<int>(std::floor(2.0 * k));
  const int l = static_cast<int>(std::floor(k));

  auto exps = checked_basis(d, J);
  auto A = laplacian_matrix(d, exps);
  const int n = static_cast<int>(exps.size());
  rep.dim_H = n - rank(A);

  // chains are cut out by (Lap)^{l+1} p_0 = 0 on the degree-capped space;
  // the sign in the discrete recursion does not change the kernel
  auto P = RationalMatrix::identity(n);
  for (int i = 0; i <= l; ++i) P = P.multiply(A);
  rep.dim_P = n - rank(P);

  rep.bound = (k + 1.0) * rep.dim_H;
  rep.holds = rep.dim_P <= rep.bound + 1e-9;
  return rep;
}

}  // namespace calgraph
