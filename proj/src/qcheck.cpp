#include "gcub/qcheck.hpp"

#include <cmath>

#include "gcub/errors.hpp"

namespace gcub {

CertificatePolynomial build_Q(const OrthoBasis& basis, const Eigen::VectorXd& u, unsigned m, int sign) {
  if (sign != 1 && sign != -1) throw InputError("certificate sign must be +1 or -1");
  const std::size_t n = basis.dimension();
  if (basis.degree() < 2 * m) throw InputError("build_Q: basis degree below 2m");
  const auto r2m = static_cast<Eigen::Index>(dim_homog(n, 2 * m));
  if (u.size() != r2m)
    throw InputError("build_Q: u has length " + std::to_string(u.size()) + ", expected " + std::to_string(r2m));

  const auto first = static_cast<Eigen::Index>(dim_total(n, 2 * m - 1));
  const auto len = static_cast<Eigen::Index>(dim_total(n, 2 * m));
  const Eigen::VectorXd coeffs =
      static_cast<double>(sign) * basis.change_of_basis().block(first, 0, r2m, len).transpose() * u;
  return {m, sign, u, Polynomial(n, 2 * m, coeffs)};
}

CorollaryReport verify_corollary(const MomentSequence& y, const OrthoBasis& basis, const CertificatePolynomial& q) {
  const unsigned m = q.m;
  y.require_degree(4 * m, "corollary check");
  const std::size_t n = y.dimension();
  const std::size_t first = dim_total(n, m) - dim_homog(n, m);
  const auto rm = static_cast<Eigen::Index>(dim_homog(n, m));

  CorollaryReport rep;
  rep.gram.resize(rm, rm);
  for (Eigen::Index i = 0; i < rm; ++i) {
    const Polynomial pq = basis.polynomial(first + static_cast<std::size_t>(i)) * q.q;
    for (Eigen::Index j = i; j < rm; ++j)
      rep.gram(i, j) = rep.gram(j, i) =
          apply_functional(y, pq * basis.polynomial(first + static_cast<std::size_t>(j)));
  }
  rep.deviation = (rep.gram - Eigen::MatrixXd::Identity(rm, rm)).cwiseAbs().maxCoeff();
  return rep;
}

RemarkReport verify_remark(const MomentSequence& y, const OrthoBasis& basis, const CertificatePolynomial& q,
                           const CubatureRule& rule) {
  const unsigned m = q.m;
  const std::size_t n = y.dimension();
  if (rule.n != n) throw InputError("verify_remark: rule dimension mismatch");
  const auto first = static_cast<Eigen::Index>(dim_total(n, 2 * m - 1));
  const auto r2m = static_cast<Eigen::Index>(dim_homog(n, 2 * m));

  RemarkReport rep;
  Eigen::VectorXd from_rule = Eigen::VectorXd::Zero(r2m);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    from_rule += (rule.weights[k] / rule.scale) * eval_P(basis, 2 * m, rule.nodes[k]);
  rep.u_vs_rule = (from_rule - q.u).cwiseAbs().maxCoeff();

  const Eigen::VectorXd proj = project_onto_basis(y, basis, q.q, 2 * m);
  rep.lower_orthogonality = first > 0 ? proj.head(first).cwiseAbs().maxCoeff() : 0.0;
  rep.top_block = (proj.segment(first, r2m) - static_cast<double>(q.sign) * q.u).cwiseAbs().maxCoeff();
  rep.integral = std::abs(apply_functional(y, q.q));
  return rep;
}

}  // namespace gcub
