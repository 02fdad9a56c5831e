#pragma once

#include <Eigen/Dense>
#include <span>

#include "gcub/indexing.hpp"
#include "gcub/measures.hpp"
#include "gcub/polynomial.hpp"

namespace gcub {

// Orthonormal polynomials P_alpha, |alpha| <= d, for the scalar product
// <f, g> = L_y(f g). Row alpha of the change-of-basis matrix S holds the
// monomial coefficients of P_alpha; S is lower triangular in Glex order with
// a positive diagonal, so P_alpha only involves monomials x^beta with
// beta <=_gl alpha and has a positive leading coefficient.
class OrthoBasis {
 public:
  OrthoBasis(std::size_t n, unsigned d, Eigen::MatrixXd change_of_basis);

  std::size_t dimension() const noexcept { return n_; }
  unsigned degree() const noexcept { return d_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(s_.rows()); }
  const Eigen::MatrixXd& change_of_basis() const noexcept { return s_; }

  // P_alpha as a polynomial of degree |alpha|.
  Polynomial polynomial(const MultiIndex& alpha) const;
  Polynomial polynomial(std::size_t rank) const;

  // Values of all P_alpha, |alpha| <= degree(), at the point.
  Eigen::VectorXd evaluate(std::span<const double> point) const;

  // The leading s_d x s_d block; identical to building at degree d directly.
  OrthoBasis truncated(unsigned d) const;

 private:
  std::size_t n_;
  unsigned d_;
  Eigen::MatrixXd s_;
};

// S = L^{-1} with M_d(y) = L L^T. Throws NotPositiveDefinite.
OrthoBasis build_orthobasis(const MomentSequence& y, unsigned d, double eps_pd = kDefaultPdTolerance);

// P_sigma from the bordered determinant: rows alpha <_gl sigma of M(y)
// restricted to columns beta <=_gl sigma, closed by the monomial row
// (x^beta). Normalized to unit norm with positive leading coefficient.
// Test oracle for build_orthobasis; cost grows factorially.
Polynomial ortho_det_oracle(const MomentSequence& y, const MultiIndex& sigma);

// (P_alpha(point))_{|alpha| = m}, Glex order.
Eigen::VectorXd eval_P(const OrthoBasis& basis, unsigned m, std::span<const double> point);

// L_y(P_gamma P_beta P_kappa) by explicit polynomial products.
double triple_product(const MomentSequence& y, const OrthoBasis& basis, const MultiIndex& gamma,
                      const MultiIndex& beta, const MultiIndex& kappa);

// (L_y(f P_theta))_{|theta| <= d}: coefficients of f's orthogonal projection
// onto the degree-d orthonormal polynomials.
Eigen::VectorXd project_onto_basis(const MomentSequence& y, const OrthoBasis& basis, const Polynomial& f,
                                   unsigned d);

struct OrthoMomentMatrix {
  unsigned degree;
  Eigen::MatrixXd matrix;  // (alpha, beta) -> L_z(P_alpha P_beta)
};

// Moment matrix of z expressed in the orthonormal basis: S_d M_d(z) S_d^T.
OrthoMomentMatrix gram_in_ortho_basis(const MomentSequence& z, const OrthoBasis& basis, unsigned d);

}  // namespace gcub
