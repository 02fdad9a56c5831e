#include "gcub/existence.hpp"

#include <cmath>

#include "gcub/errors.hpp"

namespace gcub {

ExpansionSystem assemble_system(const MomentSequence& y, const OrthoBasis& basis, unsigned m) {
  if (m == 0) throw InputError("existence system needs m >= 1");
  if (!y.normalized()) throw InputError("existence system needs probability-normalized moments");
  y.require_degree(4 * m, "existence system");
  if (basis.degree() < 2 * m)
    throw InputError("existence system needs an orthonormal basis of degree " + std::to_string(2 * m));

  const std::size_t n = y.dimension();
  const GlexTable table(n, 2 * m);
  const std::size_t block_m = table.block_begin(m);
  const auto block_2m = static_cast<Eigen::Index>(table.block_begin(2 * m));
  const auto r2m = static_cast<Eigen::Index>(dim_homog(n, 2 * m));
  const std::vector<IndexPair> layout = pair_layout(n, m);

  ExpansionSystem sys;
  sys.n = n;
  sys.m = m;
  sys.a0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.size()));
  sys.a2m.resize(static_cast<Eigen::Index>(layout.size()), r2m);

  for (std::size_t row = 0; row < layout.size(); ++row) {
    const auto [i, j] = layout[row];
    const auto r = static_cast<Eigen::Index>(row);
    sys.a0[r] = i == j ? 1.0 : 0.0;
    const Polynomial product = basis.polynomial(block_m + i) * basis.polynomial(block_m + j);
    const Eigen::VectorXd coeffs = project_onto_basis(y, basis, product, 2 * m);
    sys.a2m.row(r) = coeffs.segment(block_2m, r2m).transpose();
  }

  sys.singular_values = Eigen::JacobiSVD<Eigen::MatrixXd>(sys.a2m).singularValues();
  return sys;
}

Verdict solve_existence(const ExpansionSystem& system, double tol) {
  if (!system.a0.allFinite() || !system.a2m.allFinite())
    throw InputError("existence system contains non-finite entries");
  if (!(tol > 0.0)) throw InputError("existence tolerance must be positive");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(system.a2m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankThreshold);

  Verdict v;
  v.tolerance = tol;
  v.rank = static_cast<std::size_t>(svd.rank());
  v.u = v.rank == 0 ? Eigen::VectorXd::Zero(system.a2m.cols()) : Eigen::VectorXd(svd.solve(-system.a0));
  v.residual = (system.a0 + system.a2m * v.u).norm();
  const double scale = system.a0.norm();
  v.relative_residual = scale > 0.0 ? v.residual / scale : v.residual;
  v.exists = v.relative_residual <= tol;
  return v;
}

std::vector<Eigen::VectorXd> full_expansion(const OrthoBasis& basis, const MomentSequence& y,
                                            const MultiIndex& gamma, const MultiIndex& beta) {
  if (gamma.degree() != beta.degree()) throw InputError("full_expansion: |gamma| != |beta|");
  const unsigned m = gamma.degree();
  if (basis.degree() < 2 * m) throw InputError("full_expansion: basis degree below 2m");
  const Polynomial product = basis.polynomial(gamma) * basis.polynomial(beta);
  const Eigen::VectorXd coeffs = project_onto_basis(y, basis, product, 2 * m);

  const std::size_t n = basis.dimension();
  std::vector<Eigen::VectorXd> blocks;
  blocks.reserve(2 * m + 1);
  Eigen::Index offset = 0;
  for (unsigned j = 0; j <= 2 * m; ++j) {
    const auto r = static_cast<Eigen::Index>(dim_homog(n, j));
    blocks.emplace_back(coeffs.segment(offset, r));
    offset += r;
  }
  return blocks;
}

}  // namespace gcub
