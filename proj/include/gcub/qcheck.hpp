#pragma once

#include <Eigen/Dense>

#include "gcub/cubature.hpp"
#include "gcub/measures.hpp"
#include "gcub/ortho.hpp"
#include "gcub/polynomial.hpp"

namespace gcub {

// With u solving a0 + A u = 0, L_y(P_gamma P_beta u^T P_2m) = -delta, so the
// certificate satisfying L_y(P_gamma P_beta Q) = delta is Q = -u^T P_2m.
inline constexpr int kCertificateSign = -1;
// Q = +u^T P_2m, as literally written in the corollary statement.
inline constexpr int kLiteralSign = +1;

struct CertificatePolynomial {
  unsigned m = 0;
  int sign = kCertificateSign;
  Eigen::VectorXd u;  // length r_{2m}
  Polynomial q;       // sign * u^T P_2m in monomial coefficients
};

CertificatePolynomial build_Q(const OrthoBasis& basis, const Eigen::VectorXd& u, unsigned m,
                              int sign = kCertificateSign);

struct CorollaryReport {
  Eigen::MatrixXd gram;  // (gamma, beta) -> L_y(P_gamma P_beta Q), |gamma| = |beta| = m
  double deviation = 0.0;  // ||gram - I||_max
};

CorollaryReport verify_corollary(const MomentSequence& y, const OrthoBasis& basis, const CertificatePolynomial& q);

struct RemarkReport {
  double u_vs_rule = 0.0;          // ||u - sum_k w_k P_2m(x_k)||_inf, probability weights
  double lower_orthogonality = 0.0;  // max_{|alpha| < 2m} |L_y(P_alpha Q)|
  double top_block = 0.0;          // max_{|alpha| = 2m} |L_y(P_alpha Q) - sign u_alpha|
  double integral = 0.0;           // |L_y(Q)|

  bool passed(double tol) const {
    return u_vs_rule <= tol && lower_orthogonality <= tol && top_block <= tol && integral <= tol;
  }
};

RemarkReport verify_remark(const MomentSequence& y, const OrthoBasis& basis, const CertificatePolynomial& q,
                           const CubatureRule& rule);

}  // namespace gcub
