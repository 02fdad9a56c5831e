#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "gcub/cubature.hpp"
#include "gcub/errors.hpp"
#include "gcub/existence.hpp"
#include "oracles.hpp"

using namespace gcub;

namespace {

MomentSequence catalog(const std::string& spec, unsigned d) { return catalog_moments(MeasureSpec::parse(spec), d); }

struct Solved {
  MomentSequence y;
  OrthoBasis basis;
  Verdict verdict;
};

Solved solve(const std::string& spec, unsigned m) {
  MomentSequence y = catalog(spec, 4 * m);
  OrthoBasis basis = build_orthobasis(y, 2 * m);
  Verdict verdict = solve_existence(assemble_system(y, basis, m));
  return {std::move(y), std::move(basis), std::move(verdict)};
}

const WeightTag kTags[] = {WeightTag::lebesgue, WeightTag::chebyshev1, WeightTag::chebyshev2, WeightTag::hermite};

}  // namespace

TEST_CASE("completion for the one-point rule") {
  const Solved s = solve("lebesgue^1", 1);
  const ExtendedMoments ext = complete_moments(s.y, s.basis, s.verdict.u, 1);
  REQUIRE(ext.z.max_degree() == 2);
  CHECK(ext.z.at_rank(0) == 1.0);
  CHECK(ext.z.at_rank(1) == s.y.at_rank(1));
  CHECK(std::abs(ext.z.at_rank(2)) < 1e-14);
  CHECK(ext.consistency <= 1e-9);

  const FlatnessReport flat = flatness_check(ext.z, s.basis, 1);
  CHECK(flat.flat);
  CHECK(flat.rank == 1);
  CHECK(flat.block_norm <= 1e-12);

  Eigen::VectorXd perturbed = s.verdict.u;
  perturbed[0] += 0.1;
  const FlatnessReport off = flatness_check(complete_moments(s.y, s.basis, perturbed, 1).z, s.basis, 1);
  CHECK_FALSE(off.flat);
  CHECK(off.block_norm > 1e-2);

  // Without replacing the degree-2m block, the degree-m block is the identity.
  const MomentSequence y2 = catalog("lebesgue^2", 8);
  const OrthoBasis b2 = build_orthobasis(y2, 4);
  const FlatnessReport untouched = flatness_check(y2.truncated(4), b2, 2);
  CHECK_FALSE(untouched.flat);
  CHECK(untouched.block_norm == doctest::Approx(1.0));
  CHECK(untouched.rank == dim_total(2, 2));
}

TEST_CASE("completed moments copy y below degree 2m") {
  for (const char* spec : {"symmetrized:0.5", "chebyshev2^1", "lebesgue^2"}) {
    for (unsigned m = 1; m <= 3; ++m) {
      const Solved s = solve(spec, m);
      const ExtendedMoments ext = complete_moments(s.y, s.basis, s.verdict.u, m);
      const std::size_t below = static_cast<std::size_t>(dim_total(s.y.dimension(), 2 * m - 1));
      for (std::size_t k = 0; k < below; ++k) CHECK(ext.z.at_rank(k) == s.y.at_rank(k));
      CHECK(ext.consistency <= 1e-9);
      // Off-diagonal blocks of the orthonormal moment matrix vanish.
      const OrthoMomentMatrix g = gram_in_ortho_basis(ext.z, s.basis, m);
      const Eigen::Index lead = static_cast<Eigen::Index>(dim_total(s.y.dimension(), m - 1));
      CHECK(g.matrix.topRightCorner(lead, g.matrix.cols() - lead).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK((g.matrix.topLeftCorner(lead, lead) - Eigen::MatrixXd::Identity(lead, lead)).cwiseAbs().maxCoeff() <=
            1e-9);
    }
  }
}

TEST_CASE("multiplication operators") {
  const MomentSequence y = catalog("lebesgue^1", 4);
  const OrthoBasis basis = build_orthobasis(y, 2);
  const MultiplicationOperators ops = multiplication_operators(y, basis, 2);
  REQUIRE(ops.dimension() == 1);
  REQUIRE(ops.size() == 2);
  const Eigen::MatrixXd& n1 = ops.matrices[0];
  CHECK(std::abs(n1(0, 0)) < 1e-15);
  CHECK(std::abs(n1(1, 1)) < 1e-15);
  CHECK(n1(0, 1) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(n1(1, 0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(commutation_defect(ops) == 0.0);
  CHECK(operators_commute(ops));

  // Truncated Jacobi matrices of the classical recurrences.
  for (WeightTag tag : kTags) {
    const MomentSequence z = catalog(std::string(to_string(tag)) + "^1", 11);
    const OrthoBasis b = build_orthobasis(z, 5);
    const Eigen::MatrixXd j = multiplication_operators(z, b, 6).matrices[0];
    for (int k = 0; k < 6; ++k)
      for (int l = 0; l < 6; ++l) {
        const double expected = std::abs(k - l) == 1 ? oracle::recurrence_offdiagonal(tag, std::max(k, l)) : 0.0;
        CHECK(j(k, l) == doctest::Approx(expected).scale(1.0).epsilon(1e-10));
      }
  }

  // Symmetry and the product measure commutators.
  const MomentSequence leb2 = catalog("lebesgue^2", 3);
  const MultiplicationOperators p = multiplication_operators(leb2, build_orthobasis(leb2, 1), 2);
  REQUIRE(p.size() == 3);
  for (const auto& n : p.matrices) CHECK((n - n.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(commutation_defect(p) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(commutation_defect(p) > 100 * kDefaultCommutationTolerance);
  CHECK_FALSE(operators_commute(p));

  const MomentSequence ch2 = catalog("chebyshev1^2", 3);
  CHECK(commutation_defect(multiplication_operators(ch2, build_orthobasis(ch2, 1), 2)) ==
        doctest::Approx(0.5).epsilon(1e-12));

  const MomentSequence sym = catalog("symmetrized:0.5", 3);
  CHECK(commutation_defect(multiplication_operators(sym, build_orthobasis(sym, 1), 2)) <= kDefaultCommutationTolerance);

  CHECK_THROWS_AS(multiplication_operators(catalog("lebesgue^1", 2), basis, 2), InputError);
}

TEST_CASE("Gauss-Legendre three-point rule") {
  const Solved s = solve("lebesgue^1", 3);
  const CubatureRule rule = construct_rule(s.y, s.basis, 3);
  REQUIRE(rule.nodes.size() == 3);
  CHECK(rule.precision == 5);
  CHECK(rule.scale == 2.0);
  const double r = std::sqrt(0.6);
  CHECK(rule.nodes[0][0] == doctest::Approx(-r).epsilon(1e-12));
  CHECK(std::abs(rule.nodes[1][0]) < 1e-12);
  CHECK(rule.nodes[2][0] == doctest::Approx(r).epsilon(1e-12));
  CHECK(rule.weights[0] == doctest::Approx(2.0 * 5.0 / 18.0).epsilon(1e-12));
  CHECK(rule.weights[1] == doctest::Approx(2.0 * 4.0 / 9.0).epsilon(1e-12));
  CHECK(rule.weights[2] == doctest::Approx(2.0 * 5.0 / 18.0).epsilon(1e-12));
  CHECK(rule.report.max_exactness_error <= 1e-12);
  CHECK(rule.report.weight_sum == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rule.report.node_residual <= 1e-8);
  REQUIRE(rule.report.inside_support);
  CHECK(*rule.report.inside_support);

  const CubatureRule one = construct_rule(solve("lebesgue^1", 1).y, solve("lebesgue^1", 1).basis, 1);
  REQUIRE(one.nodes.size() == 1);
  CHECK(std::abs(one.nodes[0][0]) < 1e-15);
  CHECK(one.weights[0] == doctest::Approx(2.0));
}

TEST_CASE("one-dimensional rules reproduce Golub-Welsch") {
  for (WeightTag tag : kTags) {
    const std::string spec = std::string(to_string(tag)) + "^1";
    for (unsigned m = 1; m <= 6; ++m) {
      const Solved s = solve(spec, m);
      const CubatureRule rule = construct_rule(s.y, s.basis, m);
      const auto gw = oracle::golub_welsch(tag, static_cast<int>(m));
      REQUIRE(rule.nodes.size() == m);
      for (unsigned k = 0; k < m; ++k) {
        CHECK_MESSAGE(std::abs(rule.nodes[k][0] - gw.nodes[k]) <= 1e-8, spec << " m=" << m);
        CHECK_MESSAGE(std::abs(rule.weights[k] / rule.scale - gw.weights[k]) <= 1e-8, spec << " m=" << m);
      }
    }
  }
}

TEST_CASE("symmetrized two-dimensional rules") {
  for (unsigned m = 2; m <= 3; ++m) {
    const Solved s = solve("symmetrized:0.5", m);
    REQUIRE(s.verdict.exists);
    const CubatureRule rule = construct_rule(s.y, s.basis, m);
    CHECK(rule.nodes.size() == dim_total(2, m - 1));
    CHECK(rule.report.min_weight > 0.0);
    CHECK(rule.report.max_relative_error <= 1e-8);
    CHECK(rule.report.node_residual <= 1e-8);
    REQUIRE(rule.report.inside_support);
    CHECK(*rule.report.inside_support);
    CHECK(std::is_sorted(rule.nodes.begin(), rule.nodes.end()));

    // The atomic measure of the rule is the flat extension z.
    const ExtendedMoments ext = complete_moments(s.y, s.basis, s.verdict.u, m);
    const FlatnessReport flat = flatness_check(ext.z, s.basis, m);
    CHECK(flat.flat);
    CHECK(flat.rank == dim_total(2, m - 1));
    CHECK(flat.block_norm <= 1e-8);
    const MomentSequence atoms = atomic_moments(rule, 2 * m);
    for (std::size_t k = 0; k < atoms.values().size(); ++k)
      CHECK(std::abs(atoms.at_rank(k) - ext.z.at_rank(k)) <= 1e-8);
  }
}

TEST_CASE("rules integrate random polynomials exactly") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> coef(0.0, 1.0);
  const std::pair<const char*, unsigned> cases[] = {
      {"lebesgue^1", 4}, {"hermite^1", 5}, {"chebyshev1^1", 6}, {"symmetrized:0.5", 2},
      {"symmetrized:0.5", 3}, {"lebesgue^2", 1}, {"chebyshev2^3", 1},
  };
  for (const auto& [spec, m] : cases) {
    const Solved s = solve(spec, m);
    REQUIRE(s.verdict.exists);
    const CubatureRule rule = construct_rule(s.y, s.basis, m);
    CHECK(rule.report.min_weight > 0.0);
    const std::size_t n = s.y.dimension();
    const Eigen::Index len = static_cast<Eigen::Index>(dim_total(n, 2 * m - 1));
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::VectorXd c(len);
      for (Eigen::Index i = 0; i < len; ++i) c[i] = coef(rng);
      const Polynomial q(n, 2 * m - 1, c);
      double sum = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) sum += rule.weights[k] * q.evaluate(rule.nodes[k]);
      const double exact = apply_functional(s.y, q) * s.y.scale();
      double magnitude = 0.0;
      for (Eigen::Index i = 0; i < len; ++i) magnitude += std::abs(c[i] * s.y.at_rank(static_cast<std::size_t>(i)));
      CHECK_MESSAGE(std::abs(sum - exact) <= 1e-8 * s.y.scale() * std::max(1.0, magnitude), spec << " m=" << m);
    }
  }
}

TEST_CASE("extraction refuses non-commuting operators") {
  const MomentSequence y = catalog("lebesgue^2", 4);
  const OrthoBasis basis = build_orthobasis(y, 2);
  const MultiplicationOperators ops = multiplication_operators(y, basis, 2);
  CHECK_THROWS_AS(extract_nodes(ops), NumericalError);
  CHECK_THROWS_AS(construct_rule(y, basis, 2), NumericalError);
}

TEST_CASE("extraction is deterministic and seed independent") {
  const Solved s = solve("symmetrized:0.5", 3);
  const MultiplicationOperators ops = multiplication_operators(s.y, s.basis, 3);
  const auto a = extract_nodes(ops, kDefaultCommutationTolerance, 1);
  const auto b = extract_nodes(ops, kDefaultCommutationTolerance, 1);
  const auto c = extract_nodes(ops, kDefaultCommutationTolerance, 777);
  REQUIRE(a.size() == c.size());
  CHECK(a == b);
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(a[k][i] - c[k][i]) <= 1e-10);
}

TEST_CASE("weights") {
  const Solved s = solve("lebesgue^1", 3);
  const double r = std::sqrt(0.6);
  const auto w = compute_weights(s.y, s.basis, {{-r}, {0.0}, {r}});
  CHECK(w[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-13));
  CHECK(w[0] + w[1] + w[2] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(compute_weights(s.y, s.basis, {{0.1}, {0.1}, {0.5}}), NumericalError);
  // Interpolatory but not positive: nodes far outside the support.
  CHECK_THROWS_AS(compute_weights(s.y, s.basis, {{0.0}, {0.1}, {5.0}}), NumericalError);
}

TEST_CASE("rule files round trip") {
  const Solved s = solve("symmetrized:0.5", 2);
  const CubatureRule rule = construct_rule(s.y, s.basis, 2);
  std::stringstream buffer;
  write_rule(rule, buffer);
  const CubatureRule back = read_rule(buffer);
  CHECK(back.n == rule.n);
  CHECK(back.m == rule.m);
  CHECK(back.precision == rule.precision);
  CHECK(back.scale == rule.scale);
  CHECK(back.nodes == rule.nodes);
  CHECK(back.weights == rule.weights);

  std::istringstream truncated("n: 1\nm: 2\nprecision: 3\nscale: 0x1p+1\nnodes: 2\n-0x1p-1 : 0x1p+0\n");
  CHECK_THROWS_AS(read_rule(truncated), InputError);
  std::istringstream wrong("n: 1\nm: 2\nprecision: 4\nscale: 0x1p+1\nnodes: 1\n0x0p+0 : 0x1p+1\n");
  CHECK_THROWS_AS(read_rule(wrong), InputError);
}
