#include "gcub/ortho.hpp"

#include <cmath>

#include "gcub/errors.hpp"

namespace gcub {

OrthoBasis::OrthoBasis(std::size_t n, unsigned d, Eigen::MatrixXd change_of_basis)
    : n_(n), d_(d), s_(std::move(change_of_basis)) {
  const auto s = static_cast<Eigen::Index>(dim_total(n, d));
  if (s_.rows() != s || s_.cols() != s) throw InputError("change-of-basis matrix has wrong shape");
}

Polynomial OrthoBasis::polynomial(const MultiIndex& alpha) const {
  if (alpha.dimension() != n_ || alpha.degree() > d_)
    throw InputError("P_" + alpha.to_string() + " not in basis of degree " + std::to_string(d_));
  return polynomial(glex_rank(alpha));
}

Polynomial OrthoBasis::polynomial(std::size_t rank) const {
  // Degree of the rank-th index: smallest k with s_k > rank.
  unsigned k = 0;
  while (dim_total(n_, k) <= rank) ++k;
  const auto len = static_cast<Eigen::Index>(dim_total(n_, k));
  return Polynomial(n_, k, s_.row(static_cast<Eigen::Index>(rank)).head(len).transpose());
}

Eigen::VectorXd OrthoBasis::evaluate(std::span<const double> point) const {
  return s_ * monomial_values(n_, d_, point);
}

OrthoBasis OrthoBasis::truncated(unsigned d) const {
  if (d > d_) throw InputError("cannot extend an orthonormal basis by truncation");
  const auto s = static_cast<Eigen::Index>(dim_total(n_, d));
  return OrthoBasis(n_, d, s_.topLeftCorner(s, s));
}

OrthoBasis build_orthobasis(const MomentSequence& y, unsigned d, double eps_pd) {
  y.require_degree(2 * d, "orthonormal basis");
  const MomentMatrix m = moment_matrix(y, d);
  const CholeskyResult chol = psd_cholesky(m, eps_pd);
  if (!chol.positive_definite()) {
    const std::size_t pivot = *chol.failing_pivot;
    const GlexTable table(y.dimension(), d);
    throw NotPositiveDefinite("moment matrix M_" + std::to_string(d) + "(y) is not positive definite (pivot " +
                                  std::to_string(pivot) + ", index " + table[pivot].to_string() + ")",
                              pivot);
  }
  // Refactored in long double; M_d(y) is badly conditioned at high degree.
  using Extended = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const auto s = m.matrix.rows();
  const Extended a = m.matrix.cast<long double>();
  Extended l = Extended::Zero(s, s);
  for (Eigen::Index j = 0; j < s; ++j) {
    l(j, j) = std::sqrt(a(j, j) - l.row(j).head(j).squaredNorm());
    for (Eigen::Index i = j + 1; i < s; ++i) l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
  }
  Extended inv = l.triangularView<Eigen::Lower>().solve(Extended::Identity(s, s));
  inv.triangularView<Eigen::StrictlyUpper>().setZero();
  return OrthoBasis(y.dimension(), d, inv.cast<double>());
}

Polynomial ortho_det_oracle(const MomentSequence& y, const MultiIndex& sigma) {
  const std::size_t n = y.dimension();
  y.require_degree(2 * sigma.degree(), "determinant construction");
  const GlexTable table(n, sigma.degree());
  const auto k = static_cast<Eigen::Index>(glex_rank(sigma));

  // Rows alpha <_gl sigma, columns beta <=_gl sigma.
  Eigen::MatrixXd bordered(k, k + 1);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b <= k; ++b) bordered(a, b) = y[table[a] + table[b]];

  // Laplace expansion along the appended monomial row.
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table.size()));
  for (Eigen::Index j = 0; j <= k; ++j) {
    Eigen::MatrixXd minor(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      minor.row(a).head(j) = bordered.row(a).head(j);
      minor.row(a).tail(k - j) = bordered.row(a).tail(k - j);
    }
    const double det = k == 0 ? 1.0 : minor.determinant();
    coeffs[j] = ((k + j) % 2 == 0 ? 1.0 : -1.0) * det;
  }
  if (coeffs[k] == 0.0) throw NumericalError("determinant construction: degenerate moments");

  const Eigen::MatrixXd gram = moment_matrix(y, sigma.degree()).matrix;
  const double norm2 = coeffs.dot(gram * coeffs);
  if (!(norm2 > 0.0)) throw NumericalError("determinant construction: non-positive norm");
  coeffs /= std::sqrt(norm2);
  if (coeffs[k] < 0) coeffs = -coeffs;
  return Polynomial(n, sigma.degree(), std::move(coeffs));
}

Eigen::VectorXd eval_P(const OrthoBasis& basis, unsigned m, std::span<const double> point) {
  if (m > basis.degree()) throw InputError("eval_P: degree exceeds basis");
  const std::size_t n = basis.dimension();
  const auto first = static_cast<Eigen::Index>(m == 0 ? 0 : dim_total(n, m - 1));
  const auto last = static_cast<Eigen::Index>(dim_total(n, m));
  const Eigen::VectorXd mono = monomial_values(n, m, point);
  return basis.change_of_basis().block(first, 0, last - first, last) * mono;
}

double triple_product(const MomentSequence& y, const OrthoBasis& basis, const MultiIndex& gamma,
                      const MultiIndex& beta, const MultiIndex& kappa) {
  y.require_degree(gamma.degree() + beta.degree() + kappa.degree(), "triple product");
  const Polynomial f = basis.polynomial(gamma) * basis.polynomial(beta) * basis.polynomial(kappa);
  return apply_functional(y, f);
}

Eigen::VectorXd project_onto_basis(const MomentSequence& y, const OrthoBasis& basis, const Polynomial& f,
                                   unsigned d) {
  if (d > basis.degree()) throw InputError("projection degree exceeds basis");
  y.require_degree(d + f.degree(), "projection");
  const std::size_t n = y.dimension();
  const GlexTable rows(n, d);
  const GlexTable cols(n, f.degree());
  // Cross moments y_{a+b}, |a| <= d, |b| <= deg f.
  Eigen::MatrixXd cross(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      cross(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = y.at_rank(glex_rank(rows[a] + cols[b]));
  const auto s = static_cast<Eigen::Index>(rows.size());
  return basis.change_of_basis().topLeftCorner(s, s) * (cross * f.coefficients());
}

OrthoMomentMatrix gram_in_ortho_basis(const MomentSequence& z, const OrthoBasis& basis, unsigned d) {
  if (d > basis.degree()) throw InputError("gram_in_ortho_basis: degree exceeds basis");
  z.require_degree(2 * d, "orthonormal-basis moment matrix");
  const auto s = static_cast<Eigen::Index>(dim_total(basis.dimension(), d));
  const Eigen::MatrixXd sd = basis.change_of_basis().topLeftCorner(s, s);
  Eigen::MatrixXd g = sd * moment_matrix(z, d).matrix * sd.transpose();
  g = 0.5 * (g + g.transpose()).eval();
  return {d, std::move(g)};
}

}  // namespace gcub
