#include "calgraph/lattice_poly.hpp"

#include <algorithm>
#include <cmath>

namespace calgraph {

LatticePolynomial LatticePolynomial::constant(int dimension,
                                              const Rational& c) {
  LatticePolynomial p(dimension);
  p.add_term(Exponents(dimension, 0), c);
  return p;
}

LatticePolynomial LatticePolynomial::variable(int dimension, int axis,
                                              int power) {
  if (axis < 0 || axis >= dimension)
    throw DomainError("variable axis out of range");
  LatticePolynomial p(dimension);
  Exponents e(dimension, 0);
  e[axis] = power;
  p.add_term(e, Rational(1));
  return p;
}

LatticePolynomial LatticePolynomial::monomial(int dimension, Exponents exps,
                                              const Rational& c) {
  if (static_cast<int>(exps.size()) != dimension)
    throw DomainError("monomial exponent tuple has wrong dimension");
  LatticePolynomial p(dimension);
  p.add_term(exps, c);
  return p;
}

int LatticePolynomial::total_degree() const {
  int deg = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int k : e) d += k;
    deg = std::max(deg, d);
  }
  return deg;
}

Rational LatticePolynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void LatticePolynomial::set_coefficient(const Exponents& e,
                                        const Rational& c) {
  if (c == 0)
    terms_.erase(e);
  else
    terms_[e] = c;
}

void LatticePolynomial::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

LatticePolynomial LatticePolynomial::operator+(
    const LatticePolynomial& o) const {
  if (dim_ != o.dim_) throw DomainError("polynomial dimension mismatch");
  LatticePolynomial out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

LatticePolynomial LatticePolynomial::operator-(
    const LatticePolynomial& o) const {
  if (dim_ != o.dim_) throw DomainError("polynomial dimension mismatch");
  LatticePolynomial out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, -c);
  return out;
}

LatticePolynomial LatticePolynomial::operator*(const Rational& c) const {
  LatticePolynomial out(dim_);
  if (c == 0) return out;
  for (const auto& [e, k] : terms_) out.terms_[e] = k * c;
  return out;
}

LatticePolynomial LatticePolynomial::operator*(
    const LatticePolynomial& o) const {
  if (dim_ != o.dim_) throw DomainError("polynomial dimension mismatch");
  LatticePolynomial out(dim_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      Exponents e(dim_);
      for (int i = 0; i < dim_; ++i) e[i] = e1[i] + e2[i];
      out.add_term(e, c1 * c2);
    }
  }
  return out;
}

LatticePolynomial LatticePolynomial::shifted(int axis, int shift) const {
  if (axis < 0 || axis >= dim_) throw DomainError("shift axis out of range");
  LatticePolynomial out(dim_);
  for (const auto& [e, c] : terms_) {
    const int n = e[axis];
    // (x + s)^n = sum_r C(n,r) s^{n-r} x^r
    Rational binom(1);
    // iterate r = n down to 0 with C(n,r) updated incrementally
    for (int r = n; r >= 0; --r) {
      long spow = 1;
      for (int k = 0; k < n - r; ++k) spow *= shift;
      Exponents em = e;
      em[axis] = r;
      out.add_term(em, c * binom * Rational(spow));
      // C(n, r-1) = C(n, r) * r / (n - r + 1)
      if (r > 0) binom = binom * Rational(r) / Rational(n - r + 1);
    }
  }
  return out;
}

LatticePolynomial LatticePolynomial::laplacian() const {
  LatticePolynomial out(dim_);
  for (int a = 0; a < dim_; ++a) {
    out = out + shifted(a, +1) + shifted(a, -1);
  }
  return out - *this * Rational(2 * dim_);
}

Rational LatticePolynomial::evaluate(std::span<const int> point) const {
  if (static_cast<int>(point.size()) != dim_)
    throw DomainError("evaluation point has wrong dimension");
  Rational acc(0);
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (int i = 0; i < dim_; ++i) {
      long p = 1;
      for (int k = 0; k < e[i]; ++k) p *= point[i];
      term *= Rational(p);
    }
    acc += term;
  }
  return acc;
}

double LatticePolynomial::evaluate_double(std::span<const int> point) const {
  return to_double(evaluate(point));
}

Rational LatticePolynomial::max_abs_coeff() const {
  Rational m(0);
  for (const auto& [e, c] : terms_) m = std::max(m, rational_abs(c));
  return m;
}

std::string LatticePolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += calgraph::to_string(c);
    for (int i = 0; i < dim_; ++i) {
      if (e[i] == 0) continue;
      out += "*x" + std::to_string(i);
      if (e[i] > 1) out += "^" + std::to_string(e[i]);
    }
  }
  return out;
}

std::vector<LatticePolynomial::Exponents> monomial_exponents(int dimension,
                                                             int degree) {
  std::vector<LatticePolynomial::Exponents> out;
  LatticePolynomial::Exponents cur(dimension, 0);
  // enumerate in the same lexicographic order std::map uses
  while (true) {
    int total = 0;
    for (int k : cur) total += k;
    if (total <= degree) out.push_back(cur);
    // next tuple with entries in [0, degree]
    int i = dimension - 1;
    while (i >= 0 && cur[i] == degree) {
      cur[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++cur[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

RationalMatrix RationalMatrix::zero(int rows, int cols) {
  RationalMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.a.assign(static_cast<size_t>(rows) * cols, Rational(0));
  return m;
}

RationalMatrix RationalMatrix::identity(int n) {
  auto m = zero(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::multiply(const RationalMatrix& o) const {
  if (cols != o.rows) throw DomainError("matrix shape mismatch");
  auto out = zero(rows, o.cols);
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < cols; ++k) {
      const Rational& v = at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < o.cols; ++j) out.at(i, j) += v * o.at(k, j);
    }
  }
  return out;
}

std::vector<int> rref(RationalMatrix& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int pivot = -1;
    for (int r = row; r < m.rows; ++r) {
      if (m.at(r, col) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row)
      for (int c = 0; c < m.cols; ++c) std::swap(m.at(pivot, c), m.at(row, c));
    const Rational inv = Rational(1) / m.at(row, col);
    for (int c = col; c < m.cols; ++c) m.at(row, c) *= inv;
    for (int r = 0; r < m.rows; ++r) {
      if (r == row || m.at(r, col) == 0) continue;
      const Rational f = m.at(r, col);
      for (int c = col; c < m.cols; ++c) m.at(r, c) -= f * m.at(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int rank(RationalMatrix m) { return static_cast<int>(rref(m).size()); }

std::vector<std::vector<Rational>> kernel_basis(RationalMatrix m) {
  const int n = m.cols;
  auto pivots = rref(m);
  std::vector<char> is_pivot(n, 0);
  for (int p : pivots) is_pivot[p] = 1;

  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(n, Rational(0));
    v[free] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(static_cast<int>(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Rational> solve(RationalMatrix m, std::vector<Rational> b) {
  if (static_cast<int>(b.size()) != m.rows)
    throw DomainError("solve: rhs size mismatch");
  // augment and reduce
  RationalMatrix aug = RationalMatrix::zero(m.rows, m.cols + 1);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, m.cols) = b[r];
  }
  auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols) return {};  // inconsistent
  std::vector<Rational> x(m.cols, Rational(0));
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(static_cast<int>(r), m.cols);
  return x;
}

}  // namespace calgraph
