#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "gcub/errors.hpp"
#include "gcub/measures.hpp"

namespace gcub {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view text, std::size_t line) {
  const std::string value(trim(text));
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || *end != '\0')
    throw InputError("moment file line " + std::to_string(line) + ": malformed number '" + value + "'");
  if (!std::isfinite(v))
    throw InputError("moment file line " + std::to_string(line) + ": non-finite value");
  return v;
}

unsigned parse_count(std::string_view text, std::size_t line) {
  const std::string value(trim(text));
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (value.empty() || *end != '\0' || v < 0)
    throw InputError("moment file line " + std::to_string(line) + ": malformed integer '" + value + "'");
  return static_cast<unsigned>(v);
}

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

}  // namespace

MomentSequence read_moments(std::istream& in) {
  std::optional<unsigned> n;
  std::optional<unsigned> d_max;
  bool normalized = false;
  double scale = 1.0;
  std::vector<double> values;
  std::vector<bool> seen;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '"') {
      if (!n || !d_max)
        throw InputError("moment file line " + std::to_string(line_no) + ": record before n/d_max header");
      const auto close = line.find('"', 1);
      if (close == std::string_view::npos)
        throw InputError("moment file line " + std::to_string(line_no) + ": unterminated index");
      const MultiIndex alpha = MultiIndex::parse(line.substr(1, close - 1));
      std::string_view rest = trim(line.substr(close + 1));
      if (rest.empty() || rest.front() != ':')
        throw InputError("moment file line " + std::to_string(line_no) + ": expected ':' after index");
      if (alpha.dimension() != *n)
        throw InputError("moment file line " + std::to_string(line_no) + ": index " + alpha.to_string() +
                         " has dimension " + std::to_string(alpha.dimension()) + ", expected " +
                         std::to_string(*n));
      if (alpha.degree() > *d_max)
        throw InputError("moment file line " + std::to_string(line_no) + ": index " + alpha.to_string() +
                         " exceeds d_max");
      const std::size_t k = glex_rank(alpha);
      if (seen[k]) throw InputError("moment file: duplicate index " + alpha.to_string());
      seen[k] = true;
      values[k] = parse_real(rest.substr(1), line_no);
      continue;
    }

    const auto colon = line.find(':');
    if (colon == std::string_view::npos)
      throw InputError("moment file line " + std::to_string(line_no) + ": expected 'key: value'");
    const std::string_view key = trim(line.substr(0, colon));
    const std::string_view value = trim(line.substr(colon + 1));
    if (key == "n" || key == "d_max") {
      if (!values.empty()) throw InputError("moment file: header after records");
      (key == "n" ? n : d_max) = parse_count(value, line_no);
      if (n && *n == 0) throw InputError("moment file: n must be >= 1");
      if (n && d_max) {
        values.assign(dim_total(*n, *d_max), 0.0);
        seen.assign(values.size(), false);
      }
    } else if (key == "normalized") {
      if (value != "true" && value != "false")
        throw InputError("moment file line " + std::to_string(line_no) + ": normalized must be true/false");
      normalized = value == "true";
    } else if (key == "scale") {
      scale = parse_real(value, line_no);
    } else {
      throw InputError("moment file line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
  }

  if (!n || !d_max) throw InputError("moment file: missing n or d_max header");
  const GlexTable table(*n, *d_max);
  for (std::size_t k = 0; k < seen.size(); ++k)
    if (!seen[k]) throw InputError("moment file: missing index " + table[k].to_string());
  if (normalized && values.front() != 1.0) throw InputError("moment file: normalized but y_0 != 1");
  return MomentSequence(*n, *d_max, std::move(values), normalized, scale);
}

void write_moments(const MomentSequence& seq, std::ostream& out) {
  out << "n: " << seq.dimension() << '\n';
  out << "d_max: " << seq.max_degree() << '\n';
  out << "normalized: " << (seq.normalized() ? "true" : "false") << '\n';
  out << "scale: " << hex(seq.scale()) << '\n';
  if (!seq.provenance().empty()) out << "# source: " << seq.provenance() << '\n';
  const GlexTable table(seq.dimension(), seq.max_degree());
  for (std::size_t k = 0; k < table.size(); ++k)
    out << '"' << table[k].to_string() << "\": " << hex(seq.at_rank(k)) << '\n';
}

MomentSequence load_moments(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open moment file " + path.string());
  MomentSequence seq = read_moments(in);
  seq.set_provenance("file:" + path.string());
  return seq;
}

void store_moments(const MomentSequence& seq, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write moment file " + path.string());
  write_moments(seq, out);
  if (!out) throw InputError("failed writing moment file " + path.string());
}

}  // namespace gcub
