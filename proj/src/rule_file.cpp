#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "gcub/cubature.hpp"
#include "gcub/errors.hpp"

namespace gcub {

namespace {

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(const std::string& token, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || *end != '\0' || !std::isfinite(v))
    throw InputError("rule file line " + std::to_string(line) + ": bad number '" + token + "'");
  return v;
}

unsigned parse_unsigned(std::string_view text, std::size_t line) {
  const std::string token(text);
  char* end = nullptr;
  const long v = std::strtol(token.c_str(), &end, 10);
  if (token.empty() || *end != '\0' || v < 0)
    throw InputError("rule file line " + std::to_string(line) + ": bad integer '" + token + "'");
  return static_cast<unsigned>(v);
}

}  // namespace

void write_rule(const CubatureRule& rule, std::ostream& out) {
  out << "# gaussian cubature rule\n";
  out << "n: " << rule.n << '\n';
  out << "m: " << rule.m << '\n';
  out << "precision: " << rule.precision << '\n';
  out << "scale: " << hex(rule.scale) << '\n';
  out << "nodes: " << rule.nodes.size() << '\n';
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    for (double x : rule.nodes[k]) out << hex(x) << ' ';
    out << ": " << hex(rule.weights[k]) << '\n';
  }
  const VerificationReport& r = rule.report;
  out << "[report]\n";
  out << "degree: " << r.degree << '\n';
  out << "max_exactness_error: " << sci(r.max_exactness_error) << '\n';
  out << "max_relative_error: " << sci(r.max_relative_error) << '\n';
  out << "min_weight: " << sci(r.min_weight) << '\n';
  out << "weight_sum: " << sci(r.weight_sum) << '\n';
  out << "node_residual: " << sci(r.node_residual) << '\n';
  if (r.inside_support) out << "inside_support: " << (*r.inside_support ? "true" : "false") << '\n';
}

CubatureRule read_rule(std::istream& in) {
  CubatureRule rule;
  std::optional<unsigned> n, m, count;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "[report]") break;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos)
      throw InputError("rule file line " + std::to_string(line_no) + ": expected ':'");
    const std::string_view key = trim(line.substr(0, colon));
    const std::string_view value = trim(line.substr(colon + 1));
    const bool is_record = !key.empty() && (std::isdigit(static_cast<unsigned char>(key.front())) ||
                                            key.front() == '-' || key.front() == '+' || key.front() == '.');
    if (is_record) {
      if (!n) throw InputError("rule file: node record before 'n' header");
      std::istringstream coords{std::string(key)};
      Point x;
      std::string token;
      while (coords >> token) x.push_back(parse_real(token, line_no));
      if (x.size() != *n)
        throw InputError("rule file line " + std::to_string(line_no) + ": node has " + std::to_string(x.size()) +
                         " coordinates, expected " + std::to_string(*n));
      rule.nodes.push_back(std::move(x));
      rule.weights.push_back(parse_real(std::string(value), line_no));
    } else if (key == "n") {
      n = parse_unsigned(value, line_no);
    } else if (key == "m") {
      m = parse_unsigned(value, line_no);
    } else if (key == "precision") {
      rule.precision = parse_unsigned(value, line_no);
    } else if (key == "scale") {
      rule.scale = parse_real(std::string(value), line_no);
    } else if (key == "nodes") {
      count = parse_unsigned(value, line_no);
    } else {
      throw InputError("rule file line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
  }
  if (!n || *n == 0 || !m || *m == 0) throw InputError("rule file: missing or invalid n/m header");
  rule.n = *n;
  rule.m = *m;
  if (rule.precision != 2 * rule.m - 1) throw InputError("rule file: precision must equal 2m-1");
  if (count && *count != rule.nodes.size())
    throw InputError("rule file: declared " + std::to_string(*count) + " nodes, found " +
                     std::to_string(rule.nodes.size()));
  if (rule.nodes.empty()) throw InputError("rule file: no nodes");
  return rule;
}

}  // namespace gcub
