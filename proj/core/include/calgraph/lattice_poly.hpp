#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "calgraph/errors.hpp"
#include "calgraph/rational.hpp"

namespace calgraph {

/// Multivariate polynomial with exact rational coefficients, used as the
/// carrier for vertex functions on Z^d (unit weights and measures).
/// Terms are keyed by exponent tuples; the map order keeps every
/// computation deterministic.
class LatticePolynomial {
 public:
  using Exponents = std::vector<int>;

  explicit LatticePolynomial(int dimension) : dim_(dimension) {
    if (dimension < 1) throw DomainError("polynomial dimension must be >= 1");
  }

  static LatticePolynomial constant(int dimension, const Rational& c);
  static LatticePolynomial variable(int dimension, int axis, int power = 1);
  static LatticePolynomial monomial(int dimension, Exponents exps,
                                    const Rational& c);

  int dimension() const { return dim_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;  // -1 for the zero polynomial

  const std::map<Exponents, Rational>& terms() const { return terms_; }
  Rational coefficient(const Exponents& e) const;
  void set_coefficient(const Exponents& e, const Rational& c);

  LatticePolynomial operator+(const LatticePolynomial& o) const;
  LatticePolynomial operator-(const LatticePolynomial& o) const;
  LatticePolynomial operator*(const Rational& c) const;
  LatticePolynomial operator*(const LatticePolynomial& o) const;
  bool operator==(const LatticePolynomial& o) const {
    return dim_ == o.dim_ && terms_ == o.terms_;
  }

  /// Substitutes x_axis -> x_axis + shift and expands.
  LatticePolynomial shifted(int axis, int shift) const;

  /// Discrete Laplacian on Z^d with unit weights and measures:
  /// sum_axis p(x+e) + p(x-e) - 2 p(x).
  LatticePolynomial laplacian() const;

  Rational evaluate(std::span<const int> point) const;
  double evaluate_double(std::span<const int> point) const;

  Rational max_abs_coeff() const;

  std::string to_string() const;

 private:
  void add_term(const Exponents& e, const Rational& c);

  int dim_;
  std::map<Exponents, Rational> terms_;
};

/// Exponent tuples of all monomials in `dimension` variables with total
/// degree <= degree, in deterministic (map) order.
std::vector<LatticePolynomial::Exponents> monomial_exponents(int dimension,
                                                             int degree);

// ---- dense linear algebra over the rationals ----

struct RationalMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Rational> a;  // row-major

  Rational& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const Rational& at(int r, int c) const {
    return a[static_cast<size_t>(r) * cols + c];
  }

  static RationalMatrix zero(int rows, int cols);
  static RationalMatrix identity(int n);
  RationalMatrix multiply(const RationalMatrix& o) const;
};

/// In-place reduced row echelon form; returns the pivot columns.
std::vector<int> rref(RationalMatrix& m);

int rank(RationalMatrix m);

/// Basis of the null space {v : Mv = 0}, one vector per free column,
/// in deterministic column order.
std::vector<std::vector<Rational>> kernel_basis(RationalMatrix m);

/// One solution of Mx = b, or empty when inconsistent.
std::vector<Rational> solve(RationalMatrix m, std::vector<Rational> b);

}  // namespace calgraph
