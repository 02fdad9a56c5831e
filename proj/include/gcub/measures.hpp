#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcub/indexing.hpp"
#include "gcub/polynomial.hpp"

namespace gcub {

// One-dimensional weights with closed-form moments.
enum class WeightTag {
  lebesgue,    // 1 on [-1, 1]
  chebyshev1,  // (1 - t^2)^(-1/2) on [-1, 1]
  chebyshev2,  // (1 - t^2)^(1/2) on [-1, 1]
  hermite,     // exp(-t^2) on R
};

std::string_view to_string(WeightTag tag);
WeightTag parse_weight_tag(std::string_view name);

// Moment of order k of the probability-normalized weight.
double weight_moment(WeightTag tag, unsigned k);
// Total mass of the unnormalized weight.
double weight_mass(WeightTag tag);

struct MeasureSpec {
  enum class Kind { product_1d, symmetrized_2d, file };

  Kind kind = Kind::product_1d;
  std::vector<WeightTag> factors;  // product_1d: one per coordinate
  double alpha = 0.5;              // symmetrized_2d exponent
  std::filesystem::path path;      // file

  std::size_t dimension() const;
  std::string to_string() const;

  // Catalog grammar: "NAME^n" (e.g. "chebyshev1^2"), "NAME*NAME*..." for
  // mixed products, "symmetrized:0.5" for the symmetrized 2-D family.
  static MeasureSpec parse(std::string_view text);
  static MeasureSpec file(std::filesystem::path path);
};

struct Interval {
  double lo;
  double hi;
};

// Moments y_alpha for all |alpha| <= d_max, stored in Glex order.
class MomentSequence {
 public:
  MomentSequence(std::size_t n, unsigned d_max, std::vector<double> values, bool normalized = false,
                 double scale = 1.0);

  std::size_t dimension() const noexcept { return n_; }
  unsigned max_degree() const noexcept { return d_max_; }
  bool normalized() const noexcept { return normalized_; }
  // Mass of the original measure before probability normalization.
  double scale() const noexcept { return scale_; }

  double operator[](const MultiIndex& alpha) const;
  double at_rank(std::size_t rank) const { return values_.at(rank); }
  const std::vector<double>& values() const noexcept { return values_; }

  // Box containing the support, when the source declares one (catalog only).
  const std::vector<Interval>& box_support() const noexcept { return box_; }
  void set_box_support(std::vector<Interval> box);
  const std::string& provenance() const noexcept { return provenance_; }
  void set_provenance(std::string text) { provenance_ = std::move(text); }

  MomentSequence truncated(unsigned d_max) const;

  // Throws InputError naming the operation when fewer than `degree` moments exist.
  void require_degree(unsigned degree, std::string_view what) const;

  friend bool operator==(const MomentSequence& a, const MomentSequence& b);

 private:
  std::size_t n_;
  unsigned d_max_;
  std::vector<double> values_;
  bool normalized_;
  double scale_;
  std::vector<Interval> box_;
  std::string provenance_;
};

MomentSequence catalog_moments(const MeasureSpec& spec, std::size_t n, unsigned d_max);
MomentSequence catalog_moments(const MeasureSpec& spec, unsigned d_max);

// Divides by y_0; scale is multiplied by y_0. Idempotent on normalized input.
MomentSequence normalize_probability(const MomentSequence& seq);

// L_y(f) = sum_alpha f_alpha y_alpha.
double apply_functional(const MomentSequence& seq, const Polynomial& f);

struct MomentMatrix {
  unsigned degree;
  Eigen::MatrixXd matrix;  // s_d x s_d, Glex layout
};

// M_d(y), entry (alpha, beta) = y_{alpha+beta}.
MomentMatrix moment_matrix(const MomentSequence& seq, unsigned d);

// Entry (alpha, beta) = y_{alpha+beta+shift} over |alpha|, |beta| <= d.
Eigen::MatrixXd shifted_moment_matrix(const MomentSequence& seq, unsigned d, const MultiIndex& shift);

inline constexpr double kDefaultPdTolerance = 1e-10;

struct CholeskyResult {
  Eigen::MatrixXd lower;                     // M = L L^T when positive definite
  std::optional<std::size_t> failing_pivot;  // set when not positive definite
  double min_pivot = 0.0;

  bool positive_definite() const noexcept { return !failing_pivot.has_value(); }
};

// Cholesky factorization that rejects pivots below eps * max(1, ||M||_inf).
// Asymmetric input (beyond 1e-12 relative) is an InputError.
CholeskyResult psd_cholesky(const Eigen::MatrixXd& matrix, double eps = kDefaultPdTolerance);
CholeskyResult psd_cholesky(const MomentMatrix& matrix, double eps = kDefaultPdTolerance);

// Moment file (text): "n:", "d_max:", "normalized:", "scale:" header lines,
// then one `"a1,...,an": value` record per multi-index. Values are written as
// hex floats; decimal is accepted on input. '#' starts a comment.
MomentSequence read_moments(std::istream& in);
void write_moments(const MomentSequence& seq, std::ostream& out);
MomentSequence load_moments(const std::filesystem::path& path);
void store_moments(const MomentSequence& seq, const std::filesystem::path& path);

// Either the catalog entry or the file named by the spec, probability-normalized.
MomentSequence resolve_measure(const MeasureSpec& spec, unsigned d_max);

}  // namespace gcub
