#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>

#include "gcub/indexing.hpp"

namespace gcub {

// Real polynomial in n variables stored as dense coefficients over the Glex
// monomial basis of degree <= degree().
class Polynomial {
 public:
  Polynomial(std::size_t n, unsigned degree);
  Polynomial(std::size_t n, unsigned degree, Eigen::VectorXd coefficients);

  static Polynomial monomial(const MultiIndex& alpha, double coefficient = 1.0);

  std::size_t dimension() const noexcept { return n_; }
  unsigned degree() const noexcept { return degree_; }
  const Eigen::VectorXd& coefficients() const noexcept { return coeffs_; }
  double coefficient(const MultiIndex& alpha) const;

  double evaluate(std::span<const double> point) const;

  // Same polynomial re-expressed over a larger (or smaller, if the dropped
  // coefficients vanish) degree range.
  Polynomial resized(unsigned degree) const;

  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(double scalar) const;

  // e.g. "1.5*x1^2*x2 - 0.25"; coefficients with |c| <= drop are omitted.
  std::string to_string(double drop = 0.0) const;

 private:
  std::size_t n_;
  unsigned degree_;
  Eigen::VectorXd coeffs_;
};

// Values of every monomial of degree <= d at the point, Glex order.
Eigen::VectorXd monomial_values(std::size_t n, unsigned d, std::span<const double> point);

}  // namespace gcub
