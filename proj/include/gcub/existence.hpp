#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gcub/indexing.hpp"
#include "gcub/measures.hpp"
#include "gcub/ortho.hpp"

namespace gcub {

inline constexpr double kDefaultExistenceTolerance = 1e-8;
// Singular values below this fraction of the largest count as zero.
inline constexpr double kRankThreshold = 1e-10;

// The linear system a0 + A u = 0 whose solvability decides existence of a
// Gaussian cubature of degree 2m - 1. Row pair_rank(gamma, beta) collects
// the constant and degree-2m coefficients of P_gamma P_beta expanded in the
// orthonormal basis, |gamma| = |beta| = m:
//   a0[row]       = L_y(P_gamma P_beta) = delta_{gamma = beta}
//   A(row, kappa) = L_y(P_gamma P_beta P_kappa),  |kappa| = 2m.
struct ExpansionSystem {
  std::size_t n = 0;
  unsigned m = 0;
  Eigen::VectorXd a0;               // t_m
  Eigen::MatrixXd a2m;              // t_m x r_{2m}
  Eigen::VectorXd singular_values;  // of a2m, descending

  std::size_t rows() const noexcept { return static_cast<std::size_t>(a2m.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(a2m.cols()); }
  // More equations than unknowns. Holds for every n >= 2, m >= 2; at m = 1
  // the system is square.
  bool overdetermined() const noexcept { return rows() > cols(); }
};

struct Verdict {
  bool exists = false;
  Eigen::VectorXd u;  // least-squares (minimum-norm) solution, length r_{2m}
  double residual = 0.0;           // ||a0 + A u||_2
  double relative_residual = 0.0;  // residual / ||a0||_2
  std::size_t rank = 0;
  double tolerance = kDefaultExistenceTolerance;
};

// Requires probability-normalized y with moments to degree 4m and a basis of
// degree >= 2m.
ExpansionSystem assemble_system(const MomentSequence& y, const OrthoBasis& basis, unsigned m);

Verdict solve_existence(const ExpansionSystem& system, double tol = kDefaultExistenceTolerance);

// Coefficients of P_gamma P_beta in the orthonormal basis, grouped by degree:
// element j holds the r_j coefficients multiplying the degree-j block.
std::vector<Eigen::VectorXd> full_expansion(const OrthoBasis& basis, const MomentSequence& y,
                                            const MultiIndex& gamma, const MultiIndex& beta);

}  // namespace gcub
