#include "gcub/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gcub/errors.hpp"

namespace gcub {

Polynomial::Polynomial(std::size_t n, unsigned degree)
    : n_(n), degree_(degree), coeffs_(Eigen::VectorXd::Zero(dim_total(n, degree))) {}

Polynomial::Polynomial(std::size_t n, unsigned degree, Eigen::VectorXd coefficients)
    : n_(n), degree_(degree), coeffs_(std::move(coefficients)) {
  if (static_cast<Count>(coeffs_.size()) != dim_total(n, degree))
    throw InputError("polynomial coefficient vector has wrong length");
}

Polynomial Polynomial::monomial(const MultiIndex& alpha, double coefficient) {
  Polynomial p(alpha.dimension(), alpha.degree());
  p.coeffs_[glex_rank(alpha)] = coefficient;
  return p;
}

double Polynomial::coefficient(const MultiIndex& alpha) const {
  if (alpha.dimension() != n_) throw InputError("polynomial: dimension mismatch");
  if (alpha.degree() > degree_) return 0.0;
  return coeffs_[glex_rank(alpha)];
}

double Polynomial::evaluate(std::span<const double> point) const {
  return monomial_values(n_, degree_, point).dot(coeffs_);
}

Polynomial Polynomial::resized(unsigned degree) const {
  Polynomial out(n_, degree);
  const Eigen::Index keep = std::min(out.coeffs_.size(), coeffs_.size());
  out.coeffs_.head(keep) = coeffs_.head(keep);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (other.n_ != n_) throw InputError("polynomial product: dimension mismatch");
  const GlexTable left(n_, degree_);
  const GlexTable right(n_, other.degree_);
  Polynomial out(n_, degree_ + other.degree_);
  for (std::size_t a = 0; a < left.size(); ++a) {
    const double ca = coeffs_[a];
    if (ca == 0.0) continue;
    for (std::size_t b = 0; b < right.size(); ++b) {
      const double cb = other.coeffs_[b];
      if (cb == 0.0) continue;
      out.coeffs_[glex_rank(left[a] + right[b])] += ca * cb;
    }
  }
  return out;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (other.n_ != n_) throw InputError("polynomial sum: dimension mismatch");
  Polynomial out = resized(std::max(degree_, other.degree_));
  out.coeffs_.head(other.coeffs_.size()) += other.coeffs_;
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + other * -1.0; }

Polynomial Polynomial::operator*(double scalar) const {
  return Polynomial(n_, degree_, coeffs_ * scalar);
}

std::string Polynomial::to_string(double drop) const {
  const GlexTable table(n_, degree_);
  std::string out;
  char buf[64];
  for (std::size_t k = 0; k < table.size(); ++k) {
    const double c = coeffs_[k];
    if (c == 0.0 || std::abs(c) <= drop) continue;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    std::snprintf(buf, sizeof buf, "%.17g", std::abs(c));
    out += buf;
    const MultiIndex& alpha = table[k];
    for (std::size_t i = 0; i < n_; ++i) {
      if (alpha[i] == 0) continue;
      out += "*x" + std::to_string(i + 1);
      if (alpha[i] > 1) out += "^" + std::to_string(alpha[i]);
    }
  }
  return out.empty() ? "0" : out;
}

Eigen::VectorXd monomial_values(std::size_t n, unsigned d, std::span<const double> point) {
  if (point.size() != n) throw InputError("evaluation point has wrong dimension");
  const GlexTable table(n, d);
  Eigen::VectorXd values(table.size());
  values[0] = 1.0;
  for (std::size_t k = 1; k < table.size(); ++k) {
    const MultiIndex& alpha = table[k];
    std::size_t i = 0;
    while (alpha[i] == 0) ++i;
    std::vector<unsigned> lower = alpha.exponents();
    --lower[i];
    values[k] = values[glex_rank(MultiIndex(std::move(lower)))] * point[i];
  }
  return values;
}

}  // namespace gcub
