#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gcub/measures.hpp"
#include "gcub/ortho.hpp"

namespace gcub {

inline constexpr double kDefaultCommutationTolerance = 1e-8;
inline constexpr double kDefaultFlatnessTolerance = 1e-8;
inline constexpr double kDefaultNodeTolerance = 1e-8;
// Weights must exceed this fraction of the total mass.
inline constexpr double kDefaultWeightTolerance = 1e-10;
inline constexpr std::uint64_t kDefaultSeed = 20260118;

using Point = std::vector<double>;

// ---------------------------------------------------------------------------
// Moment completion and flatness.

// z agrees with y through degree 2m-1; its degree-2m block is chosen so that
// L_z(P_kappa) = u_kappa for every |kappa| = 2m.
struct ExtendedMoments {
  MomentSequence z;
  double consistency = 0.0;  // max |L_z(P_kappa) - u_kappa|
};

ExtendedMoments complete_moments(const MomentSequence& y, const OrthoBasis& basis, const Eigen::VectorXd& u,
                                 unsigned m);

struct FlatnessReport {
  bool flat = false;
  std::size_t rank = 0;             // numerical rank of the orthonormal moment matrix of z
  double block_norm = 0.0;          // max |L_z(P_m P_m^T)|
  double off_diagonal_norm = 0.0;   // max |L_z(P_i P_m^T)|, i < m
  double identity_deviation = 0.0;  // leading block against I
  double min_eigenvalue = 0.0;
};

// Checks that the moment matrix of z in the orthonormal basis is positive
// semidefinite with vanishing degree-m block, i.e. a flat extension of rank
// s_{m-1}.
FlatnessReport flatness_check(const MomentSequence& z, const OrthoBasis& basis, unsigned m,
                              double tol = kDefaultFlatnessTolerance);

// ---------------------------------------------------------------------------
// Multiplication operators (truncated Jacobi matrices).

// N_i(beta, alpha) = L_y(x_i P_alpha P_beta), |alpha|, |beta| <= m-1.
struct MultiplicationOperators {
  unsigned m = 0;
  std::vector<Eigen::MatrixXd> matrices;  // one per coordinate, s_{m-1} square

  std::size_t dimension() const noexcept { return matrices.size(); }
  std::size_t size() const noexcept { return matrices.empty() ? 0 : static_cast<std::size_t>(matrices[0].rows()); }
};

MultiplicationOperators multiplication_operators(const MomentSequence& y, const OrthoBasis& basis, unsigned m);

// max_{i<j} ||N_i N_j - N_j N_i||_max; 0 when n = 1.
double commutation_defect(const MultiplicationOperators& ops);

// defect <= tol * max(1, max_i ||N_i||_max^2).
bool operators_commute(const MultiplicationOperators& ops, double tol = kDefaultCommutationTolerance);

// Joint eigenvalues of the operators: nodes of the Gaussian rule, sorted
// lexicographically. Throws NumericalError when the operators do not commute
// or when every random combination has a repeated eigenvalue.
std::vector<Point> extract_nodes(const MultiplicationOperators& ops, double tol = kDefaultCommutationTolerance,
                                 std::uint64_t seed = kDefaultSeed);

// Solves sum_k w_k P_alpha(x_k) = L_y(P_alpha), |alpha| <= m-1, and rescales
// by the measure mass. Throws NumericalError when the interpolation matrix is
// singular or a weight is not positive.
std::vector<double> compute_weights(const MomentSequence& y, const OrthoBasis& basis, const std::vector<Point>& nodes,
                                    double weight_tol = kDefaultWeightTolerance);

// ---------------------------------------------------------------------------
// Rules and verification.

struct VerificationReport {
  unsigned degree = 0;
  double max_exactness_error = 0.0;  // max_alpha |sum w_k x_k^alpha - scale * y_alpha|
  double max_relative_error = 0.0;   // same, divided by scale * max(1, |y_alpha|)
  double min_weight = 0.0;
  double weight_sum = 0.0;
  double node_residual = 0.0;  // max_k ||P_m(x_k)||_inf
  std::optional<bool> inside_support;
};

struct CubatureRule {
  std::size_t n = 0;
  unsigned m = 0;
  unsigned precision = 0;  // 2m - 1
  double scale = 1.0;      // mass of the measure; weights sum to it
  std::vector<Point> nodes;
  std::vector<double> weights;
  VerificationReport report;
};

VerificationReport verify_exactness(const CubatureRule& rule, const MomentSequence& y, const OrthoBasis& basis,
                                    unsigned degree);

struct CubatureOptions {
  double commutation_tol = kDefaultCommutationTolerance;
  double weight_tol = kDefaultWeightTolerance;
  std::uint64_t seed = kDefaultSeed;
};

// Operators -> nodes -> weights -> verification. basis must reach degree m.
CubatureRule construct_rule(const MomentSequence& y, const OrthoBasis& basis, unsigned m,
                            const CubatureOptions& options = {});

// Moments through degree d of sum_k (w_k / scale) delta_{x_k}.
MomentSequence atomic_moments(const CubatureRule& rule, unsigned d);

// Rule file: header lines "n:", "m:", "precision:", "scale:", "nodes:", then
// one "x1 ... xn : weight" record per node in hex floats, then an optional
// "[report]" block that readers skip.
void write_rule(const CubatureRule& rule, std::ostream& out);
CubatureRule read_rule(std::istream& in);

}  // namespace gcub
