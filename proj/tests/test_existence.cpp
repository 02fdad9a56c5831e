#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <string>

#include "gcub/cubature.hpp"
#include "gcub/errors.hpp"
#include "gcub/existence.hpp"
#include "oracles.hpp"

using namespace gcub;

namespace {

MultiIndex mi(std::initializer_list<unsigned> e) { return MultiIndex(std::vector<unsigned>(e)); }

MomentSequence catalog(const std::string& spec, unsigned d) { return catalog_moments(MeasureSpec::parse(spec), d); }

struct Instance {
  MomentSequence y;
  OrthoBasis basis;
  ExpansionSystem system;
  Verdict verdict;
};

Instance solve(const std::string& spec, unsigned m) {
  MomentSequence y = catalog(spec, 4 * m);
  OrthoBasis basis = build_orthobasis(y, 2 * m);
  ExpansionSystem system = assemble_system(y, basis, m);
  Verdict verdict = solve_existence(system);
  return {std::move(y), std::move(basis), std::move(system), std::move(verdict)};
}

const WeightTag kTags[] = {WeightTag::lebesgue, WeightTag::chebyshev1, WeightTag::chebyshev2, WeightTag::hermite};

}  // namespace

TEST_CASE("a0 is the vectorized Kronecker delta") {
  for (std::size_t n = 1; n <= 3; ++n)
    for (unsigned m = 1; m <= (n == 3 ? 2u : 3u); ++m) {
      const MomentSequence y = catalog("chebyshev2^" + std::to_string(n), 4 * m);
      const ExpansionSystem sys = assemble_system(y, build_orthobasis(y, 2 * m), m);
      const Count r_m = dim_homog(n, m);
      REQUIRE(sys.rows() == pair_count(n, m));
      REQUIRE(sys.cols() == dim_homog(n, 2 * m));
      std::size_t ones = 0, zeros = 0;
      for (Eigen::Index i = 0; i < sys.a0.size(); ++i) {
        if (sys.a0[i] == 1.0) ++ones;
        if (sys.a0[i] == 0.0) ++zeros;
      }
      CHECK(ones == r_m);
      CHECK(zeros == pair_count(n, m) - r_m);
      const auto layout = pair_layout(n, m);
      const GlexTable t(n, m);
      for (std::size_t row = 0; row < layout.size(); ++row)
        CHECK(sys.a0[static_cast<Eigen::Index>(row)] == (layout[row].first == layout[row].second ? 1.0 : 0.0));
      CHECK(sys.a0.norm() == doctest::Approx(std::sqrt(static_cast<double>(r_m))));
    }
}

TEST_CASE("one-point Lebesgue system") {
  const Instance inst = solve("lebesgue^1", 1);
  REQUIRE(inst.system.rows() == 1);
  REQUIRE(inst.system.cols() == 1);
  CHECK_FALSE(inst.system.overdetermined());
  CHECK(inst.system.a2m(0, 0) == doctest::Approx(0.4 * std::sqrt(5.0)).epsilon(1e-14));
  CHECK(inst.verdict.exists);
  CHECK(inst.verdict.u[0] == doctest::Approx(-std::sqrt(5.0) / 2.0).epsilon(1e-13));
  CHECK(inst.verdict.residual <= 1e-14);
  CHECK(inst.verdict.rank == 1);
  // The one-point Gauss rule sits at 0 with weight 1: u = P_2(0).
  CHECK(inst.verdict.u[0] == doctest::Approx(oracle::orthonormal_value(WeightTag::lebesgue, 2, 0.0)).epsilon(1e-13));
}

TEST_CASE("one-dimensional measures always admit the Gaussian rule") {
  for (WeightTag tag : kTags) {
    const std::string spec = std::string(to_string(tag)) + "^1";
    for (unsigned m = 1; m <= 6; ++m) {
      const Instance inst = solve(spec, m);
      CHECK_MESSAGE(inst.verdict.exists, spec << " m=" << m);
      CHECK_MESSAGE(inst.verdict.relative_residual <= 1e-10, spec << " m=" << m << " " << inst.verdict.relative_residual);
      CHECK(inst.system.rows() == 1);
      // u = sum_k w_k P_2m(x_k) over the m-point Gauss rule.
      const auto rule = oracle::golub_welsch(tag, static_cast<int>(m));
      double expected = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        expected += rule.weights[k] * oracle::orthonormal_value(tag, static_cast<int>(2 * m), rule.nodes[k]);
      CHECK_MESSAGE(std::abs(inst.verdict.u[0] - expected) <= 1e-8 * std::max(1.0, std::abs(expected)),
                    spec << " m=" << m << " u=" << inst.verdict.u[0] << " oracle=" << expected);
    }
  }
}

TEST_CASE("product measures in two variables have no Gaussian rule at m = 2") {
  for (const char* spec : {"lebesgue^2", "chebyshev1^2", "chebyshev2^2"}) {
    const Instance inst = solve(spec, 2);
    CHECK(inst.system.rows() == 6);
    CHECK(inst.system.cols() == 5);
    CHECK(inst.system.overdetermined());
    CHECK_FALSE(inst.verdict.exists);
    CHECK(inst.verdict.relative_residual > 1e-2);
    const MultiplicationOperators ops = multiplication_operators(inst.y, inst.basis, 2);
    CHECK(operators_commute(ops) == inst.verdict.exists);
  }
  // Least squares of the 6x5 system worked out independently.
  CHECK(solve("lebesgue^2", 2).verdict.relative_residual == doctest::Approx(0.4508).epsilon(1e-3));
}

TEST_CASE("verdicts agree with the commutation criterion") {
  const std::pair<const char*, unsigned> cases[] = {
      {"lebesgue^1", 3},      {"hermite^1", 4},        {"lebesgue^2", 1},       {"lebesgue^2", 2},
      {"lebesgue^2", 3},      {"chebyshev1^2", 2},     {"chebyshev1^2", 3},     {"hermite^2", 2},
      {"symmetrized:0.5", 1}, {"symmetrized:0.5", 2},  {"symmetrized:0.5", 3},  {"chebyshev2*hermite", 2},
      {"lebesgue^3", 1},      {"lebesgue^3", 2},       {"chebyshev1^3", 2},
  };
  for (const auto& [spec, m] : cases) {
    const Instance inst = solve(spec, m);
    const MultiplicationOperators ops = multiplication_operators(inst.y, inst.basis, m);
    CHECK_MESSAGE(inst.verdict.exists == operators_commute(ops),
                  spec << " m=" << m << " residual=" << inst.verdict.relative_residual
                       << " defect=" << commutation_defect(ops));
  }
}

TEST_CASE("rows for (gamma, beta) and (beta, gamma) coincide") {
  for (const char* spec : {"lebesgue^2", "symmetrized:0.5", "chebyshev2^3"}) {
    const unsigned m = 2;
    const MomentSequence y = catalog(spec, 4 * m);
    const OrthoBasis basis = build_orthobasis(y, 2 * m);
    const ExpansionSystem sys = assemble_system(y, basis, m);
    const std::size_t n = y.dimension();
    const GlexTable t(n, 2 * m);
    for (std::size_t g = t.block_begin(m); g < t.block_end(m); ++g)
      for (std::size_t b = g; b < t.block_end(m); ++b) {
        const Eigen::Index row = static_cast<Eigen::Index>(pair_rank(t[g], t[b], m));
        for (std::size_t k = t.block_begin(2 * m); k < t.block_end(2 * m); ++k) {
          const Eigen::Index col = static_cast<Eigen::Index>(k - t.block_begin(2 * m));
          CHECK_MESSAGE(std::abs(sys.a2m(row, col) - triple_product(y, basis, t[b], t[g], t[k])) <= 1e-10, spec);
        }
      }
  }
}

TEST_CASE("the verdict does not depend on the mass of the measure") {
  for (const char* spec : {"lebesgue^1", "symmetrized:0.5", "chebyshev1^2"}) {
    const unsigned m = 2;
    const MomentSequence y = catalog(spec, 4 * m);
    const Verdict base = solve_existence(assemble_system(y, build_orthobasis(y, 2 * m), m));
    for (double lambda : {0.001, 3.7, 250.0}) {
      std::vector<double> raw = y.values();
      for (double& v : raw) v *= lambda;
      const MomentSequence scaled = normalize_probability(MomentSequence(y.dimension(), y.max_degree(), raw));
      const Verdict v = solve_existence(assemble_system(scaled, build_orthobasis(scaled, 2 * m), m));
      CHECK(v.exists == base.exists);
      CHECK((v.u - base.u).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, base.u.cwiseAbs().maxCoeff()));
      CHECK(scaled.scale() == doctest::Approx(lambda));
    }
  }
}

TEST_CASE("overdetermination grows with n and m") {
  for (std::size_t n = 2; n <= 6; ++n) {
    CHECK(pair_count(n, 1) == dim_homog(n, 2));
    Count previous = 0;
    for (unsigned m = 2; m <= 6; ++m) {
      const Count excess = pair_count(n, m) - dim_homog(n, 2 * m);
      CHECK(pair_count(n, m) > dim_homog(n, 2 * m));
      CHECK(excess > previous);
      previous = excess;
      if (n > 2) CHECK(excess > pair_count(n - 1, m) - dim_homog(n - 1, 2 * m));
    }
  }
  CHECK(pair_count(1, 3) == 1);
  CHECK(dim_homog(1, 6) == 1);
}

TEST_CASE("full expansion of P_gamma P_beta") {
  const MomentSequence y = catalog("lebesgue^1", 4);
  const OrthoBasis basis = build_orthobasis(y, 2);
  const auto blocks = full_expansion(basis, y, mi({1}), mi({1}));
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[0][0] == doctest::Approx(1.0));
  CHECK(std::abs(blocks[1][0]) < 1e-15);
  CHECK(blocks[2][0] == doctest::Approx(0.4 * std::sqrt(5.0)).epsilon(1e-14));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const char* spec : {"symmetrized:0.5", "chebyshev1*lebesgue", "hermite^2"}) {
    const unsigned m = 2;
    const MomentSequence z = catalog(spec, 4 * m);
    const OrthoBasis b = build_orthobasis(z, 2 * m);
    const ExpansionSystem sys = assemble_system(z, b, m);
    const GlexTable t(2, m);
    for (std::size_t g = t.block_begin(m); g < t.block_end(m); ++g)
      for (std::size_t h = g; h < t.block_end(m); ++h) {
        const auto parts = full_expansion(b, z, t[g], t[h]);
        REQUIRE(parts.size() == 2 * m + 1);
        const Eigen::Index row = static_cast<Eigen::Index>(pair_rank(t[g], t[h], m));
        CHECK(parts[0][0] == doctest::Approx(sys.a0[row]).scale(1.0).epsilon(1e-12));
        CHECK((parts[2 * m] - sys.a2m.row(row).transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        const Polynomial prod = b.polynomial(g) * b.polynomial(h);
        for (int trial = 0; trial < 20; ++trial) {
          const std::array<double, 2> x{u(rng), u(rng)};
          const Eigen::VectorXd values = b.evaluate(x);
          double rebuilt = 0.0;
          Eigen::Index offset = 0;
          for (const auto& part : parts) {
            rebuilt += part.dot(values.segment(offset, part.size()));
            offset += part.size();
          }
          CHECK(rebuilt == doctest::Approx(prod.evaluate(x)).scale(1.0).epsilon(1e-9));
        }
      }
  }
}

TEST_CASE("existence input validation") {
  const MomentSequence y = catalog("lebesgue^1", 3);
  CHECK_THROWS_AS(assemble_system(y, build_orthobasis(y, 1), 1), InputError);
  const MomentSequence y4 = catalog("lebesgue^1", 4);
  CHECK_THROWS_AS(assemble_system(y4, build_orthobasis(y4, 1), 1), InputError);
  CHECK_THROWS_AS(assemble_system(MomentSequence(1, 4, {2.0, 0.0, 1.0, 0.0, 1.0}), build_orthobasis(y4, 2), 1),
                  InputError);

  ExpansionSystem sys = assemble_system(y4, build_orthobasis(y4, 2), 1);
  sys.a2m(0, 0) = std::nan("");
  CHECK_THROWS_AS(solve_existence(sys), InputError);
}
