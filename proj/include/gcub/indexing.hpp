#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gcub {

using Count = std::uint64_t;

// Exponent vector of a monomial x^alpha in n variables.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<unsigned> exponents);

  // x_i^1, 0-based variable index.
  static MultiIndex unit(std::size_t n, std::size_t i);
  static MultiIndex zero(std::size_t n);

  std::size_t dimension() const noexcept { return exponents_.size(); }
  unsigned degree() const noexcept { return degree_; }
  unsigned operator[](std::size_t i) const { return exponents_[i]; }
  const std::vector<unsigned>& exponents() const noexcept { return exponents_; }

  MultiIndex operator+(const MultiIndex& other) const;

  // "2,1" for x1^2 x2.
  std::string to_string() const;
  static MultiIndex parse(std::string_view text);

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<unsigned> exponents_;
  unsigned degree_ = 0;
};

// Graded lexicographic comparison: total degree first, then the larger
// exponent on the earliest variable comes first (1, x1, x2, x1^2, x1x2, x2^2).
std::strong_ordering glex_compare(const MultiIndex& a, const MultiIndex& b);

// Binomial coefficient with overflow detection (throws InputError).
Count binomial(Count n, Count k);

// s_d = C(n+d, d): number of monomials of degree <= d.
Count dim_total(std::size_t n, unsigned d);
// r_d = C(n+d-1, d): number of monomials of degree exactly d.
Count dim_homog(std::size_t n, unsigned d);
// t_m = r_m (r_m + 1) / 2: number of unordered pairs of degree-m indices.
Count pair_count(std::size_t n, unsigned m);

// Position of alpha in the Glex enumeration of all indices of its dimension.
std::size_t glex_rank(const MultiIndex& alpha);

// All multi-indices of degree <= d_max in Glex order, with rank lookup.
class GlexTable {
 public:
  GlexTable(std::size_t n, unsigned d_max);

  std::size_t dimension() const noexcept { return n_; }
  unsigned max_degree() const noexcept { return d_max_; }
  std::size_t size() const noexcept { return indices_.size(); }

  const MultiIndex& operator[](std::size_t rank) const { return indices_[rank]; }
  std::size_t rank(const MultiIndex& alpha) const;

  // Ranks [first, last) occupied by the indices of degree exactly k.
  std::size_t block_begin(unsigned k) const;
  std::size_t block_end(unsigned k) const;

  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

 private:
  std::size_t n_;
  unsigned d_max_;
  std::vector<MultiIndex> indices_;
};

GlexTable glex_enumerate(std::size_t n, unsigned d_max);

// Row layout for unordered pairs {gamma, beta} with |gamma| = |beta| = m:
// upper triangle, Glex-major. With i <= j the within-degree positions of the
// two indices, rows run (0,0), (0,1), ..., (0,r-1), (1,1), (1,2), ...
std::size_t pair_rank(const MultiIndex& gamma, const MultiIndex& beta, unsigned m);

struct IndexPair {
  std::size_t first;   // position within the degree-m block
  std::size_t second;  // first <= second
};

// Inverse of pair_rank in terms of within-block positions, for all t_m rows.
std::vector<IndexPair> pair_layout(std::size_t n, unsigned m);

}  // namespace gcub
