#include "gcub/cubature.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gcub/errors.hpp"

namespace gcub {

namespace {

Eigen::Index as_index(std::size_t v) { return static_cast<Eigen::Index>(v); }

// Degree d with s_d == count, if any.
std::optional<unsigned> degree_for_count(std::size_t n, std::size_t count) {
  for (unsigned d = 0;; ++d) {
    const Count s = dim_total(n, d);
    if (s == count) return d;
    if (s > count) return std::nullopt;
  }
}

}  // namespace

ExtendedMoments complete_moments(const MomentSequence& y, const OrthoBasis& basis, const Eigen::VectorXd& u,
                                 unsigned m) {
  if (m == 0) throw InputError("complete_moments: m must be >= 1");
  y.require_degree(2 * m - 1, "moment completion");
  if (basis.degree() < 2 * m) throw InputError("complete_moments: basis degree below 2m");
  const std::size_t n = y.dimension();
  const auto lower = as_index(dim_total(n, 2 * m - 1));
  const auto r2m = as_index(dim_homog(n, 2 * m));
  if (u.size() != r2m) throw InputError("complete_moments: u has wrong length");

  const Eigen::MatrixXd& s = basis.change_of_basis();
  const Eigen::MatrixXd diag_block = s.block(lower, lower, r2m, r2m);
  const Eigen::MatrixXd theta = s.block(lower, 0, r2m, lower);
  if (diag_block.diagonal().minCoeff() <= 0.0)
    throw NumericalError("complete_moments: degree-2m block of S is singular");

  Eigen::VectorXd known(lower);
  for (Eigen::Index k = 0; k < lower; ++k) known[k] = y.at_rank(static_cast<std::size_t>(k));
  // S_2m z_2m + Theta y_{2m-1} = u.
  const Eigen::VectorXd top = diag_block.triangularView<Eigen::Lower>().solve(u - theta * known);

  std::vector<double> values(y.values().begin(), y.values().begin() + lower);
  values.insert(values.end(), top.data(), top.data() + top.size());
  MomentSequence z(n, 2 * m, std::move(values), y.normalized(), y.scale());
  z.set_box_support(y.box_support());
  z.set_provenance(y.provenance() + " (degree-2m completion)");

  Eigen::VectorXd all(lower + r2m);
  all << known, top;
  const double consistency = (s.block(lower, 0, r2m, lower + r2m) * all - u).cwiseAbs().maxCoeff();
  return {std::move(z), consistency};
}

FlatnessReport flatness_check(const MomentSequence& z, const OrthoBasis& basis, unsigned m, double tol) {
  if (m == 0) throw InputError("flatness_check: m must be >= 1");
  const Eigen::MatrixXd g = gram_in_ortho_basis(z, basis, m).matrix;
  const std::size_t n = z.dimension();
  const auto lead = as_index(dim_total(n, m - 1));
  const auto rm = as_index(dim_homog(n, m));

  FlatnessReport rep;
  rep.identity_deviation =
      (g.topLeftCorner(lead, lead) - Eigen::MatrixXd::Identity(lead, lead)).cwiseAbs().maxCoeff();
  rep.off_diagonal_norm = g.topRightCorner(lead, rm).cwiseAbs().maxCoeff();
  rep.block_norm = g.bottomRightCorner(rm, rm).cwiseAbs().maxCoeff();

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  rep.min_eigenvalue = lambda.minCoeff();
  const double cutoff = tol * std::max(1.0, lambda.maxCoeff());
  rep.rank = static_cast<std::size_t>((lambda.array() > cutoff).count());

  rep.flat = rep.min_eigenvalue >= -tol && rep.block_norm <= tol && rep.off_diagonal_norm <= tol &&
             rep.identity_deviation <= tol && rep.rank == static_cast<std::size_t>(lead);
  return rep;
}

MultiplicationOperators multiplication_operators(const MomentSequence& y, const OrthoBasis& basis, unsigned m) {
  if (m == 0) throw InputError("multiplication_operators: m must be >= 1");
  y.require_degree(2 * m - 1, "multiplication operators");
  if (basis.degree() + 1 < m) throw InputError("multiplication_operators: basis degree below m-1");
  const std::size_t n = y.dimension();
  const auto s = as_index(dim_total(n, m - 1));
  const Eigen::MatrixXd lead = basis.change_of_basis().topLeftCorner(s, s);

  MultiplicationOperators ops;
  ops.m = m;
  ops.matrices.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::MatrixXd op = lead * shifted_moment_matrix(y, m - 1, MultiIndex::unit(n, i)) * lead.transpose();
    const double asym = (op - op.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * std::max(1.0, op.cwiseAbs().maxCoeff()))
      throw NumericalError("multiplication operator N_" + std::to_string(i + 1) + " is not symmetric");
    ops.matrices.push_back(0.5 * (op + op.transpose()));
  }
  return ops;
}

double commutation_defect(const MultiplicationOperators& ops) {
  double defect = 0.0;
  for (std::size_t i = 0; i < ops.matrices.size(); ++i)
    for (std::size_t j = i + 1; j < ops.matrices.size(); ++j) {
      const Eigen::MatrixXd& a = ops.matrices[i];
      const Eigen::MatrixXd& b = ops.matrices[j];
      defect = std::max(defect, (a * b - b * a).cwiseAbs().maxCoeff());
    }
  return defect;
}

bool operators_commute(const MultiplicationOperators& ops, double tol) {
  double norm = 1.0;
  for (const auto& op : ops.matrices) norm = std::max(norm, op.cwiseAbs().maxCoeff());
  return commutation_defect(ops) <= tol * norm * norm;
}

std::vector<Point> extract_nodes(const MultiplicationOperators& ops, double tol, std::uint64_t seed) {
  if (ops.matrices.empty()) throw InputError("extract_nodes: no operators");
  if (!operators_commute(ops, tol))
    throw NumericalError("extract_nodes: multiplication operators do not commute (defect " +
                         std::to_string(commutation_defect(ops)) + ")");
  constexpr int kAttempts = 5;
  constexpr double kSeparation = 1e-7;

  const std::size_t n = ops.dimension();
  const auto s = ops.matrices.front().rows();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> draw(0.05, 1.0);

  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::vector<double> c(n);
    double total = 0.0;
    for (double& ci : c) total += ci = draw(rng);
    Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(s, s);
    for (std::size_t i = 0; i < n; ++i) combo += (c[i] / total) * ops.matrices[i];

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(combo);
    if (eig.info() != Eigen::Success) continue;
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const double spread = std::max(1.0, lambda.cwiseAbs().maxCoeff());
    bool separated = true;
    for (Eigen::Index k = 1; k < s; ++k)
      if (lambda[k] - lambda[k - 1] <= kSeparation * spread) separated = false;
    if (!separated) continue;

    std::vector<Point> nodes(static_cast<std::size_t>(s), Point(n));
    for (Eigen::Index k = 0; k < s; ++k) {
      const Eigen::VectorXd v = eig.eigenvectors().col(k);
      for (std::size_t i = 0; i < n; ++i) nodes[static_cast<std::size_t>(k)][i] = v.dot(ops.matrices[i] * v);
    }
    std::sort(nodes.begin(), nodes.end());
    return nodes;
  }
  throw NumericalError("extract_nodes: degenerate spectrum after " + std::to_string(kAttempts) + " draws");
}

std::vector<double> compute_weights(const MomentSequence& y, const OrthoBasis& basis, const std::vector<Point>& nodes,
                                    double weight_tol) {
  const std::size_t n = y.dimension();
  const auto d = degree_for_count(n, nodes.size());
  if (!d) throw InputError("compute_weights: node count " + std::to_string(nodes.size()) + " is not some s_d");
  if (basis.degree() < *d) throw InputError("compute_weights: basis degree too small");
  const OrthoBasis lead = basis.truncated(*d);
  const auto s = as_index(nodes.size());

  Eigen::MatrixXd interp(s, s);
  for (Eigen::Index k = 0; k < s; ++k) interp.col(k) = lead.evaluate(nodes[static_cast<std::size_t>(k)]);
  Eigen::VectorXd rhs(s);
  for (Eigen::Index a = 0; a < s; ++a) rhs[a] = apply_functional(y, lead.polynomial(static_cast<std::size_t>(a)));

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(interp);
  if (!lu.isInvertible()) throw NumericalError("compute_weights: interpolation matrix is singular");
  const Eigen::VectorXd w = lu.solve(rhs);

  const double mass = y.values().front() * y.scale();
  std::vector<double> weights(static_cast<std::size_t>(s));
  for (Eigen::Index k = 0; k < s; ++k) {
    weights[static_cast<std::size_t>(k)] = w[k] * y.scale();
    if (!(weights[static_cast<std::size_t>(k)] > weight_tol * mass))
      throw NumericalError("not a Gaussian rule: weight " + std::to_string(k) + " = " +
                           std::to_string(weights[static_cast<std::size_t>(k)]) + " is not positive");
  }
  return weights;
}

VerificationReport verify_exactness(const CubatureRule& rule, const MomentSequence& y, const OrthoBasis& basis,
                                    unsigned degree) {
  if (rule.n != y.dimension()) throw InputError("verify_exactness: dimension mismatch");
  if (rule.nodes.size() != rule.weights.size()) throw InputError("verify_exactness: nodes/weights mismatch");
  y.require_degree(degree, "exactness check");
  const std::size_t s = dim_total(y.dimension(), degree);
  const double scale = y.scale();

  VerificationReport rep;
  rep.degree = degree;
  Eigen::VectorXd quad = Eigen::VectorXd::Zero(as_index(s));
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    quad += rule.weights[k] * monomial_values(y.dimension(), degree, rule.nodes[k]);
  for (std::size_t a = 0; a < s; ++a) {
    const double exact = y.at_rank(a) * scale;
    const double err = std::abs(quad[as_index(a)] - exact);
    rep.max_exactness_error = std::max(rep.max_exactness_error, err);
    rep.max_relative_error = std::max(rep.max_relative_error, err / (scale * std::max(1.0, std::abs(y.at_rank(a)))));
  }
  rep.min_weight = rule.weights.empty() ? 0.0 : *std::min_element(rule.weights.begin(), rule.weights.end());
  for (double w : rule.weights) rep.weight_sum += w;

  if (basis.degree() >= rule.m) {
    for (const Point& x : rule.nodes)
      rep.node_residual = std::max(rep.node_residual, eval_P(basis, rule.m, x).cwiseAbs().maxCoeff());
  }
  if (!y.box_support().empty()) {
    bool inside = true;
    for (const Point& x : rule.nodes)
      for (std::size_t i = 0; i < x.size(); ++i)
        inside = inside && y.box_support()[i].lo < x[i] && x[i] < y.box_support()[i].hi;
    rep.inside_support = inside;
  }
  return rep;
}

CubatureRule construct_rule(const MomentSequence& y, const OrthoBasis& basis, unsigned m,
                            const CubatureOptions& options) {
  if (basis.degree() < m) throw InputError("construct_rule: basis degree below m");
  const MultiplicationOperators ops = multiplication_operators(y, basis, m);
  CubatureRule rule;
  rule.n = y.dimension();
  rule.m = m;
  rule.precision = 2 * m - 1;
  rule.scale = y.values().front() * y.scale();
  rule.nodes = extract_nodes(ops, options.commutation_tol, options.seed);
  rule.weights = compute_weights(y, basis, rule.nodes, options.weight_tol);
  rule.report = verify_exactness(rule, y, basis, 2 * m - 1);
  return rule;
}

MomentSequence atomic_moments(const CubatureRule& rule, unsigned d) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(as_index(dim_total(rule.n, d)));
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    acc += (rule.weights[k] / rule.scale) * monomial_values(rule.n, d, rule.nodes[k]);
  return MomentSequence(rule.n, d, std::vector<double>(acc.data(), acc.data() + acc.size()), false, 1.0);
}

}  // namespace gcub
