#pragma once

#include <utility>
#include <vector>

#include "calgraph/caloric.hpp"
#include "calgraph/lattice_poly.hpp"

namespace calgraph {

/// C(n,i) with the convention C(n,i) = 0 outside 0 <= i <= n (and for n < 0).
/// Satisfies C(n+1,i) - C(n,i) = C(n,i-1).
Rational binomial(long n, long i);

enum class HierarchyMode { continuous, discrete };

/// Coefficient chain (p_0, ..., p_l) of an ancient solution:
///   continuous: Lap p_l = 0, Lap p_i = (i+1) p_{i+1}
///   discrete:   Lap p_l = 0, Lap p_i = -p_{i+1}
struct HierarchyChain {
  HierarchyMode mode = HierarchyMode::continuous;
  std::vector<LatticePolynomial> coeffs;  // p_0 .. p_l

  int length() const { return static_cast<int>(coeffs.size()) - 1; }
  int dimension() const { return coeffs.at(0).dimension(); }
};

/// Max absolute coefficient over all hierarchy-equation violations;
/// exactly zero iff the chain is valid.
Rational chain_residual(const HierarchyChain& chain);

struct HarmonicBasis {
  int dimension = 0;  // of the space
  std::vector<LatticePolynomial> basis;
};

/// Exact kernel of the lattice Laplacian on polynomials of total degree
/// <= degree in d variables (unit weights and measures).
HarmonicBasis harmonic_polynomial_basis(int d, int degree);

/// Builds the chain below a harmonic top coefficient p_l by solving the
/// Poisson equations downward. The particular solution at each step is the
/// unique one orthogonal, in the monomial-coefficient inner product, to the
/// harmonic polynomials of matching degree.
HierarchyChain solve_hierarchy(const LatticePolynomial& top, int l,
                               HierarchyMode mode);

/// Validates the chain and tags the time basis (monomial for continuous,
/// binomial for discrete). Throws DomainError naming the failing index.
struct ExactAncientSolution {
  HierarchyChain chain;
  PolyField::Basis basis;

  /// u(x, t) with rational t (continuous) or integer t (discrete).
  Rational evaluate(std::span<const int> point, const Rational& t) const;

  /// Polynomial time slice u(., t).
  LatticePolynomial slice(const Rational& t) const;
};

ExactAncientSolution assemble_ancient(const HierarchyChain& chain);

/// Evaluates the chain coefficients on a lattice window.
PolyField materialize(const HierarchyChain& chain,
                      std::shared_ptr<const GraphWindow> window);

/// Admissible sample times: continuous -1 < t_1 < ... < t_{l+1} = 0,
/// discrete integers t_{l+1} < ... < t_1 < -l.
std::vector<Rational> default_times_exact(int l, HierarchyMode mode);
std::vector<double> default_times(int l, HierarchyMode mode);

/// Recovers (p_0..p_l) from l+1 time slices by solving the Vandermonde-type
/// system in the matching time basis.
std::vector<LatticePolynomial> extract_coefficients_exact(
    const std::vector<std::pair<Rational, LatticePolynomial>>& slices, int l,
    HierarchyMode mode);

std::vector<VertexFunction> extract_coefficients(
    const std::vector<std::pair<double, VertexFunction>>& slices, int l,
    HierarchyMode mode);

struct GrowthCertificate {
  double rate = 0.0;  // k
  double constant = 1.0;
  std::string class_tag;  // "H" | "P" | "Ptilde"
};

/// Growth rate max_i (deg p_i + 2 i) of the assembled ancient solution.
double chain_growth_rate(const HierarchyChain& chain);

struct VanishingOrderReport {
  int q = 0;        // least q with 4q > 2k + alpha + 2
  bool holds = false;
  int offending_index = -1;  // first i >= q with p_i != 0, when any
};

VanishingOrderReport vanishing_order_check(const PolyField& field, double k,
                                           double alpha, double tol = 1e-9);
VanishingOrderReport vanishing_order_check(const HierarchyChain& chain,
                                           double k, double alpha);

struct DimensionBoundReport {
  int d = 0;
  double k = 0.0;
  HierarchyMode mode = HierarchyMode::continuous;
  int dim_H = 0;     // harmonic polynomials of degree <= floor(2k)
  int dim_P = 0;     // valid chains of length floor(k), degrees <= floor(2k)
  double bound = 0;  // (k+1) * dim_H
  bool holds = false;
};

/// Exact chain-space enumeration against the (k+1) dim H_{2k} bound.
DimensionBoundReport dimension_bound_report(int d, double k,
                                            HierarchyMode mode);

}  // namespace calgraph
