#include "gcub/measures.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <numbers>

#include "gcub/errors.hpp"

namespace gcub {

namespace {

constexpr unsigned kMaxCatalogDegree = 100;

constexpr std::pair<WeightTag, std::string_view> kTagNames[] = {
    {WeightTag::lebesgue, "lebesgue"},
    {WeightTag::chebyshev1, "chebyshev1"},
    {WeightTag::chebyshev2, "chebyshev2"},
    {WeightTag::hermite, "hermite"},
};

double ipow(double base, unsigned exponent) {
  double result = 1.0;
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Integral of (t1+t2)^a (t1 t2)^b (t1-t2)^2 against the tensor Chebyshev
// weight, by an N-point Gauss-Chebyshev rule in each variable.
class SymmetrizedIntegrator {
 public:
  explicit SymmetrizedIntegrator(unsigned d_max) {
    // Per-variable degree of the integrand is at most d_max + 2; the rule
    // is exact through degree 2N - 1 >= d_max + 4.
    const unsigned n_points = (d_max + 6) / 2;
    nodes_.assign(n_points, 0.0);
    for (unsigned k = 0; k < n_points / 2; ++k) {
      const double t = std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n_points));
      nodes_[k] = t;
      nodes_[n_points - 1 - k] = -t;
    }
    weight_ = std::numbers::pi / n_points;
  }

  double integrate(unsigned a, unsigned b) const {
    const std::size_t n = nodes_.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        // Pairing each node pair with its mirror image makes terms odd in
        // (t1, t2) -> (-t1, -t2) cancel exactly.
        sum += term(nodes_[i], nodes_[j], a, b) + term(nodes_[n - 1 - i], nodes_[n - 1 - j], a, b);
      }
    }
    return 0.5 * sum * weight_ * weight_;
  }

 private:
  static double term(double t1, double t2, unsigned a, unsigned b) {
    const double diff = t1 - t2;
    return ipow(t1 + t2, a) * ipow(t1 * t2, b) * diff * diff;
  }

  std::vector<double> nodes_;
  double weight_ = 0.0;
};

}  // namespace

std::string_view to_string(WeightTag tag) {
  for (const auto& [t, name] : kTagNames)
    if (t == tag) return name;
  return "unknown";
}

WeightTag parse_weight_tag(std::string_view name) {
  for (const auto& [t, tag_name] : kTagNames)
    if (tag_name == name) return t;
  throw InputError("unknown weight '" + std::string(name) + "'");
}

double weight_moment(WeightTag tag, unsigned k) {
  if (k % 2 == 1) return 0.0;
  const unsigned j = k / 2;
  switch (tag) {
    case WeightTag::lebesgue:
      return 1.0 / (k + 1.0);
    case WeightTag::chebyshev1:
    case WeightTag::chebyshev2: {
      // C(2j, j) / 4^j as a running product.
      double central = 1.0;
      for (unsigned i = 1; i <= j; ++i) central *= (2.0 * i - 1.0) / (2.0 * i);
      return tag == WeightTag::chebyshev1 ? central : central / (j + 1.0);
    }
    case WeightTag::hermite: {
      double value = 1.0;
      for (unsigned i = 1; i <= j; ++i) value *= (2.0 * i - 1.0) / 2.0;
      return value;
    }
  }
  throw InputError("unknown weight tag");
}

double weight_mass(WeightTag tag) {
  switch (tag) {
    case WeightTag::lebesgue:
      return 2.0;
    case WeightTag::chebyshev1:
      return std::numbers::pi;
    case WeightTag::chebyshev2:
      return std::numbers::pi / 2.0;
    case WeightTag::hermite:
      return std::sqrt(std::numbers::pi);
  }
  throw InputError("unknown weight tag");
}

std::size_t MeasureSpec::dimension() const {
  switch (kind) {
    case Kind::product_1d:
      return factors.size();
    case Kind::symmetrized_2d:
      return 2;
    case Kind::file:
      return 0;
  }
  return 0;
}

std::string MeasureSpec::to_string() const {
  switch (kind) {
    case Kind::product_1d: {
      const bool uniform = std::all_of(factors.begin(), factors.end(),
                                       [&](WeightTag t) { return t == factors.front(); });
      if (uniform) return std::string(gcub::to_string(factors.front())) + "^" + std::to_string(factors.size());
      std::string out;
      for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) out += '*';
        out += gcub::to_string(factors[i]);
      }
      return out;
    }
    case Kind::symmetrized_2d: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "symmetrized:%g", alpha);
      return buf;
    }
    case Kind::file:
      return "file:" + path.string();
  }
  return {};
}

MeasureSpec MeasureSpec::parse(std::string_view text) {
  text = trim(text);
  MeasureSpec spec;
  if (text.starts_with("symmetrized:")) {
    const std::string value(text.substr(12));
    char* end = nullptr;
    const double alpha = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') throw InputError("malformed symmetrized parameter '" + value + "'");
    if (alpha != 0.5) throw InputError("symmetrized family is only available for alpha = 0.5");
    spec.kind = Kind::symmetrized_2d;
    spec.alpha = alpha;
    return spec;
  }
  spec.kind = Kind::product_1d;
  if (const auto caret = text.find('^'); caret != std::string_view::npos) {
    const WeightTag tag = parse_weight_tag(text.substr(0, caret));
    const std::string_view count = text.substr(caret + 1);
    unsigned n = 0;
    const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
    if (ec != std::errc{} || ptr != count.data() + count.size() || n == 0)
      throw InputError("malformed catalog dimension in '" + std::string(text) + "'");
    spec.factors.assign(n, tag);
    return spec;
  }
  std::size_t pos = 0;
  while (true) {
    const auto star = text.find('*', pos);
    spec.factors.push_back(parse_weight_tag(text.substr(pos, star == std::string_view::npos ? text.npos : star - pos)));
    if (star == std::string_view::npos) break;
    pos = star + 1;
  }
  return spec;
}

MeasureSpec MeasureSpec::file(std::filesystem::path path) {
  MeasureSpec spec;
  spec.kind = Kind::file;
  spec.path = std::move(path);
  return spec;
}

MomentSequence::MomentSequence(std::size_t n, unsigned d_max, std::vector<double> values, bool normalized,
                               double scale)
    : n_(n), d_max_(d_max), values_(std::move(values)), normalized_(normalized), scale_(scale) {
  if (n == 0) throw InputError("moment sequence dimension must be >= 1");
  if (static_cast<Count>(values_.size()) != dim_total(n, d_max))
    throw InputError("moment sequence has " + std::to_string(values_.size()) + " values, expected " +
                     std::to_string(dim_total(n, d_max)));
  for (double v : values_)
    if (!std::isfinite(v)) throw InputError("moment sequence contains a non-finite value");
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw InputError("moment scale must be positive");
  if (normalized_ && values_.front() != 1.0) throw InputError("normalized moment sequence must have y_0 = 1");
}

double MomentSequence::operator[](const MultiIndex& alpha) const {
  if (alpha.dimension() != n_) throw InputError("moment lookup: dimension mismatch");
  if (alpha.degree() > d_max_)
    throw InputError("moment y_" + alpha.to_string() + " exceeds available degree " + std::to_string(d_max_));
  return values_[glex_rank(alpha)];
}

void MomentSequence::set_box_support(std::vector<Interval> box) {
  if (!box.empty() && box.size() != n_) throw InputError("box support has wrong dimension");
  box_ = std::move(box);
}

MomentSequence MomentSequence::truncated(unsigned d_max) const {
  require_degree(d_max, "truncation");
  std::vector<double> head(values_.begin(), values_.begin() + dim_total(n_, d_max));
  MomentSequence out(n_, d_max, std::move(head), normalized_, scale_);
  out.box_ = box_;
  out.provenance_ = provenance_;
  return out;
}

void MomentSequence::require_degree(unsigned degree, std::string_view what) const {
  if (degree > d_max_)
    throw InputError(std::string(what) + " needs moments up to degree " + std::to_string(degree) + ", only " +
                     std::to_string(d_max_) + " available");
}

bool operator==(const MomentSequence& a, const MomentSequence& b) {
  return a.n_ == b.n_ && a.d_max_ == b.d_max_ && a.normalized_ == b.normalized_ && a.scale_ == b.scale_ &&
         a.values_ == b.values_;
}

MomentSequence catalog_moments(const MeasureSpec& spec, std::size_t n, unsigned d_max) {
  if (spec.kind == MeasureSpec::Kind::file) throw InputError("catalog_moments: spec refers to a file");
  if (spec.dimension() != n)
    throw InputError("catalog entry " + spec.to_string() + " has dimension " + std::to_string(spec.dimension()) +
                     ", requested " + std::to_string(n));
  if (d_max > kMaxCatalogDegree)
    throw InputError("catalog moments limited to degree " + std::to_string(kMaxCatalogDegree));

  const GlexTable table(n, d_max);
  std::vector<double> values(table.size());
  double mass = 1.0;
  std::vector<Interval> box;

  if (spec.kind == MeasureSpec::Kind::product_1d) {
    for (std::size_t k = 0; k < table.size(); ++k) {
      double v = 1.0;
      for (std::size_t i = 0; i < n; ++i) v *= weight_moment(spec.factors[i], table[k][i]);
      values[k] = v;
    }
    bool bounded = true;
    for (WeightTag tag : spec.factors) {
      mass *= weight_mass(tag);
      bounded = bounded && tag != WeightTag::hermite;
    }
    if (bounded) box.assign(n, Interval{-1.0, 1.0});
  } else {
    const SymmetrizedIntegrator integrator(d_max);
    for (std::size_t k = 0; k < table.size(); ++k) values[k] = integrator.integrate(table[k][0], table[k][1]);
    mass = values[0];
    for (double& v : values) v /= mass;
    values[0] = 1.0;
    // Image of [-1,1]^2 under (t1, t2) -> (t1 + t2, t1 t2).
    box = {{-2.0, 2.0}, {-1.0, 1.0}};
  }

  MomentSequence seq(n, d_max, std::move(values), true, mass);
  seq.set_box_support(std::move(box));
  seq.set_provenance("catalog:" + spec.to_string());
  return seq;
}

MomentSequence catalog_moments(const MeasureSpec& spec, unsigned d_max) {
  return catalog_moments(spec, spec.dimension(), d_max);
}

MomentSequence normalize_probability(const MomentSequence& seq) {
  const double y0 = seq.values().front();
  if (!(y0 > 0.0)) throw InputError("cannot normalize: y_0 must be positive");
  if (seq.normalized() && y0 == 1.0) return seq;
  std::vector<double> values(seq.values());
  for (double& v : values) v /= y0;
  values.front() = 1.0;
  MomentSequence out(seq.dimension(), seq.max_degree(), std::move(values), true, seq.scale() * y0);
  out.set_box_support(seq.box_support());
  out.set_provenance(seq.provenance());
  return out;
}

double apply_functional(const MomentSequence& seq, const Polynomial& f) {
  if (f.dimension() != seq.dimension()) throw InputError("functional: dimension mismatch");
  seq.require_degree(f.degree(), "L_y(f)");
  const auto& c = f.coefficients();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) sum += c[k] * seq.values()[k];
  return sum;
}

MomentMatrix moment_matrix(const MomentSequence& seq, unsigned d) {
  return {d, shifted_moment_matrix(seq, d, MultiIndex::zero(seq.dimension()))};
}

Eigen::MatrixXd shifted_moment_matrix(const MomentSequence& seq, unsigned d, const MultiIndex& shift) {
  seq.require_degree(2 * d + shift.degree(), "moment matrix");
  const GlexTable table(seq.dimension(), d);
  const auto s = static_cast<Eigen::Index>(table.size());
  Eigen::MatrixXd m(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    const MultiIndex row = table[i] + shift;
    for (Eigen::Index j = i; j < s; ++j) {
      m(i, j) = m(j, i) = seq.at_rank(glex_rank(row + table[j]));
    }
  }
  return m;
}

CholeskyResult psd_cholesky(const Eigen::MatrixXd& matrix, double eps) {
  if (matrix.rows() != matrix.cols()) throw InputError("psd_cholesky: matrix is not square");
  const double norm = matrix.cwiseAbs().rowwise().sum().maxCoeff();
  const double scale = std::max(1.0, norm);
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InputError("psd_cholesky: matrix is not symmetric");

  const Eigen::Index s = matrix.rows();
  CholeskyResult result;
  result.lower = Eigen::MatrixXd::Zero(s, s);
  result.min_pivot = s > 0 ? matrix(0, 0) : 0.0;
  Eigen::MatrixXd& l = result.lower;
  const double threshold = eps * scale;
  for (Eigen::Index j = 0; j < s; ++j) {
    const double pivot = matrix(j, j) - l.row(j).head(j).squaredNorm();
    result.min_pivot = std::min(result.min_pivot, pivot);
    if (!(pivot > threshold)) {
      result.failing_pivot = static_cast<std::size_t>(j);
      return result;
    }
    l(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < s; ++i)
      l(i, j) = (matrix(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
  }
  return result;
}

CholeskyResult psd_cholesky(const MomentMatrix& matrix, double eps) { return psd_cholesky(matrix.matrix, eps); }

MomentSequence resolve_measure(const MeasureSpec& spec, unsigned d_max) {
  if (spec.kind == MeasureSpec::Kind::file) return normalize_probability(load_moments(spec.path));
  return catalog_moments(spec, d_max);
}

}  // namespace gcub
