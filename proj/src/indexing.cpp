#include "gcub/indexing.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>

#include "gcub/errors.hpp"

namespace gcub {

MultiIndex::MultiIndex(std::vector<unsigned> exponents)
    : exponents_(std::move(exponents)),
      degree_(std::accumulate(exponents_.begin(), exponents_.end(), 0u)) {
  if (exponents_.empty()) throw InputError("multi-index must have dimension >= 1");
}

MultiIndex MultiIndex::unit(std::size_t n, std::size_t i) {
  std::vector<unsigned> e(n, 0);
  e.at(i) = 1;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::zero(std::size_t n) { return MultiIndex(std::vector<unsigned>(n, 0)); }

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.dimension() != dimension()) throw InputError("multi-index dimension mismatch");
  std::vector<unsigned> e(exponents_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exponents_[i];
  return MultiIndex(std::move(e));
}

std::string MultiIndex::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(exponents_[i]);
  }
  return out;
}

MultiIndex MultiIndex::parse(std::string_view text) {
  std::vector<unsigned> e;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    std::string_view field = text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
      throw InputError("malformed multi-index '" + std::string(text) + "'");
    e.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return MultiIndex(std::move(e));
}

std::strong_ordering glex_compare(const MultiIndex& a, const MultiIndex& b) {
  if (a.dimension() != b.dimension()) throw InputError("glex_compare: dimension mismatch");
  if (auto c = a.degree() <=> b.degree(); c != 0) return c;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    // Higher exponent on an earlier variable sorts first.
    if (a[i] != b[i]) return b[i] <=> a[i];
  }
  return std::strong_ordering::equal;
}

__extension__ using Wide = unsigned __int128;

Count binomial(Count n, Count k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Wide result = 1;
  for (Count i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<Count>::max())
      throw InputError("binomial(" + std::to_string(n) + ", " + std::to_string(k) + ") overflows");
  }
  return static_cast<Count>(result);
}

Count dim_total(std::size_t n, unsigned d) {
  if (n == 0) throw InputError("dimension must be >= 1");
  return binomial(n + d, d);
}

Count dim_homog(std::size_t n, unsigned d) {
  if (n == 0) throw InputError("dimension must be >= 1");
  return binomial(n + d - 1, d);
}

Count pair_count(std::size_t n, unsigned m) {
  const Count r = dim_homog(n, m);
  return r * (r + 1) / 2;
}

namespace {

// Position of alpha among the indices of degree |alpha| (Glex order).
std::size_t position_in_block(const MultiIndex& alpha) {
  const std::size_t n = alpha.dimension();
  std::size_t pos = 0;
  unsigned remaining = alpha.degree();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t tail_vars = n - i - 1;
    // Every index sharing the prefix but carrying a larger exponent at i
    // comes earlier.
    for (unsigned e = alpha[i] + 1; e <= remaining; ++e)
      pos += binomial(remaining - e + tail_vars - 1, tail_vars - 1);
    remaining -= alpha[i];
  }
  return pos;
}

}  // namespace

std::size_t glex_rank(const MultiIndex& alpha) {
  const std::size_t offset = alpha.degree() == 0 ? 0 : dim_total(alpha.dimension(), alpha.degree() - 1);
  return offset + position_in_block(alpha);
}

namespace {

void enumerate_degree(std::size_t n, unsigned degree, std::vector<unsigned>& prefix,
                      std::vector<MultiIndex>& out) {
  const std::size_t i = prefix.size();
  if (i + 1 == n) {
    prefix.push_back(degree);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (unsigned e = degree + 1; e-- > 0;) {
    prefix.push_back(e);
    enumerate_degree(n, degree - e, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

GlexTable::GlexTable(std::size_t n, unsigned d_max) : n_(n), d_max_(d_max) {
  const Count total = dim_total(n, d_max);
  indices_.reserve(total);
  std::vector<unsigned> prefix;
  prefix.reserve(n);
  for (unsigned k = 0; k <= d_max; ++k) enumerate_degree(n, k, prefix, indices_);
}

std::size_t GlexTable::rank(const MultiIndex& alpha) const {
  if (alpha.dimension() != n_ || alpha.degree() > d_max_)
    throw InputError("multi-index " + alpha.to_string() + " outside table");
  return glex_rank(alpha);
}

std::size_t GlexTable::block_begin(unsigned k) const { return k == 0 ? 0 : dim_total(n_, k - 1); }

std::size_t GlexTable::block_end(unsigned k) const { return dim_total(n_, k); }

GlexTable glex_enumerate(std::size_t n, unsigned d_max) { return GlexTable(n, d_max); }

std::size_t pair_rank(const MultiIndex& gamma, const MultiIndex& beta, unsigned m) {
  if (gamma.degree() != m || beta.degree() != m)
    throw InputError("pair_rank: both indices must have degree " + std::to_string(m));
  if (gamma.dimension() != beta.dimension()) throw InputError("pair_rank: dimension mismatch");
  const std::size_t r = dim_homog(gamma.dimension(), m);
  std::size_t i = position_in_block(gamma);
  std::size_t j = position_in_block(beta);
  if (i > j) std::swap(i, j);
  return i * (2 * r - i + 1) / 2 + (j - i);
}

std::vector<IndexPair> pair_layout(std::size_t n, unsigned m) {
  const std::size_t r = dim_homog(n, m);
  std::vector<IndexPair> rows;
  rows.reserve(r * (r + 1) / 2);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) rows.push_back({i, j});
  return rows;
}

}  // namespace gcub
