#include "gcub/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "gcub/errors.hpp"
#include "gcub/existence.hpp"
#include "gcub/measures.hpp"
#include "gcub/ortho.hpp"
#include "gcub/qcheck.hpp"

namespace gcub::cli {

namespace {

using Json = nlohmann::ordered_json;

Json to_json(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

void render_text(const Json& value, std::ostream& out, const std::string& indent) {
  for (auto it = value.begin(); it != value.end(); ++it) {
    const Json& v = it.value();
    out << indent << it.key() << ':';
    if (v.is_object()) {
      out << '\n';
      render_text(v, out, indent + "  ");
    } else if (v.is_array() && !v.empty() && v.front().is_array()) {
      out << '\n';
      for (const Json& row : v) {
        out << indent << "  -";
        for (const Json& x : row) out << ' ' << x.dump();
        out << '\n';
      }
    } else if (v.is_array()) {
      for (const Json& x : v) out << ' ' << (x.is_string() ? x.get<std::string>() : x.dump());
      out << '\n';
    } else {
      out << ' ' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
  }
}

void emit(const Json& report, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::machine)
    out << report.dump(2) << '\n';
  else
    render_text(report, out, "");
}

MomentSequence load_source(const RunConfig& config, unsigned d_max) {
  if (config.catalog) return catalog_moments(MeasureSpec::parse(*config.catalog), d_max);
  return normalize_probability(load_moments(*config.moments_file));
}

std::string source_name(const RunConfig& config) {
  return config.catalog ? "catalog:" + *config.catalog : "file:" + config.moments_file->string();
}

Json dimensions(std::size_t n, unsigned m) {
  Json d;
  d["n"] = n;
  d["m"] = m;
  d["t_m"] = pair_count(n, m);
  d["r_2m"] = dim_homog(n, 2 * m);
  d["s_m_minus_1"] = dim_total(n, m - 1);
  return d;
}

Json rule_json(const CubatureRule& rule) {
  Json nodes = Json::array();
  for (const Point& x : rule.nodes) nodes.push_back(x);
  Json j;
  j["precision"] = rule.precision;
  j["scale"] = rule.scale;
  j["nodes"] = std::move(nodes);
  j["weights"] = rule.weights;
  return j;
}

Json report_json(const VerificationReport& r) {
  Json j;
  j["degree"] = r.degree;
  j["max_exactness_error"] = r.max_exactness_error;
  j["max_relative_error"] = r.max_relative_error;
  j["min_weight"] = r.min_weight;
  j["weight_sum"] = r.weight_sum;
  j["node_residual"] = r.node_residual;
  if (r.inside_support) j["inside_support"] = *r.inside_support;
  return j;
}

struct ExistenceRun {
  MomentSequence y;
  OrthoBasis basis;
  ExpansionSystem system;
  Verdict verdict;
  MultiplicationOperators ops;
  double defect;
  bool commute;
};

ExistenceRun run_existence(const RunConfig& config) {
  const unsigned m = config.m;
  MomentSequence y = load_source(config, 4 * m);
  OrthoBasis basis = build_orthobasis(y, 2 * m);
  ExpansionSystem system = assemble_system(y, basis, m);
  Verdict verdict = solve_existence(system, config.tol);
  MultiplicationOperators ops = multiplication_operators(y, basis, m);
  const double defect = commutation_defect(ops);
  const bool commute = operators_commute(ops, config.commutation_tol);
  return {std::move(y), std::move(basis), std::move(system), std::move(verdict), std::move(ops), defect, commute};
}

Json existence_json(const RunConfig& config, const ExistenceRun& r) {
  Json j;
  j["command"] = "exists";
  j["source"] = source_name(config);
  j["verdict"] = r.verdict.exists ? "exists" : "does_not_exist";
  j["dimensions"] = dimensions(r.y.dimension(), config.m);
  j["overdetermined"] = r.system.overdetermined();
  j["residual"] = r.verdict.residual;
  j["relative_residual"] = r.verdict.relative_residual;
  j["tolerance"] = r.verdict.tolerance;
  j["rank"] = r.verdict.rank;
  j["singular_values"] = to_json(r.system.singular_values);
  j["u"] = to_json(r.verdict.u);
  j["commutation_defect"] = r.defect;
  j["operators_commute"] = r.commute;
  j["oracle_agrees"] = r.commute == r.verdict.exists;
  j["scale"] = r.y.scale();
  return j;
}

int cmd_moments(const RunConfig& config, std::ostream& out) {
  const unsigned d_max = config.d_max.value_or(4 * config.m);
  MomentSequence seq = load_source(config, d_max);
  if (seq.max_degree() > d_max) seq = seq.truncated(d_max);
  if (!config.out) {
    write_moments(seq, out);
    return exit_code::success;
  }
  store_moments(seq, *config.out);
  Json j;
  j["command"] = "moments";
  j["source"] = source_name(config);
  j["n"] = seq.dimension();
  j["d_max"] = seq.max_degree();
  j["scale"] = seq.scale();
  j["out"] = config.out->string();
  emit(j, config.format, out);
  return exit_code::success;
}

int cmd_ortho(const RunConfig& config, std::ostream& out) {
  if (!config.sigma) throw InputError("ortho needs --sigma");
  const MultiIndex sigma = MultiIndex::parse(*config.sigma);
  const MomentSequence y = load_source(config, 2 * sigma.degree());
  if (sigma.dimension() != y.dimension()) throw InputError("--sigma dimension does not match the measure");
  const OrthoBasis basis = build_orthobasis(y, sigma.degree());
  const Polynomial p = basis.polynomial(sigma);
  const GlexTable table(y.dimension(), sigma.degree());

  Json coeffs;
  for (std::size_t k = 0; k < table.size(); ++k) coeffs[table[k].to_string()] = p.coefficients()[static_cast<Eigen::Index>(k)];
  Json j;
  j["command"] = "ortho";
  j["source"] = source_name(config);
  j["sigma"] = sigma.to_string();
  j["degree"] = sigma.degree();
  j["coefficients"] = std::move(coeffs);
  j["polynomial"] = p.to_string();
  emit(j, config.format, out);
  return exit_code::success;
}

int cmd_exists(const RunConfig& config, std::ostream& out) {
  const ExistenceRun r = run_existence(config);
  emit(existence_json(config, r), config.format, out);
  return r.verdict.exists ? exit_code::success : exit_code::no_cubature;
}

int cmd_cubature(const RunConfig& config, std::ostream& out) {
  const unsigned m = config.m;
  const ExistenceRun r = run_existence(config);
  Json j = existence_json(config, r);
  j["command"] = "cubature";
  if (!r.verdict.exists) {
    emit(j, config.format, out);
    return exit_code::no_cubature;
  }
  CubatureOptions options;
  options.commutation_tol = config.commutation_tol;
  options.weight_tol = config.weight_tol;
  options.seed = config.seed;
  const CubatureRule rule = construct_rule(r.y, r.basis, m, options);

  const ExtendedMoments ext = complete_moments(r.y, r.basis, r.verdict.u, m);
  const FlatnessReport flat = flatness_check(ext.z, r.basis, m, config.flatness_tol);
  const MomentSequence atomic = atomic_moments(rule, 2 * m);
  double atomic_gap = 0.0;
  for (std::size_t k = 0; k < atomic.values().size(); ++k)
    atomic_gap = std::max(atomic_gap, std::abs(atomic.at_rank(k) - ext.z.at_rank(k)));

  j["seed"] = config.seed;
  j["rule"] = rule_json(rule);
  j["verification"] = report_json(rule.report);
  Json fj;
  fj["flat"] = flat.flat;
  fj["rank"] = flat.rank;
  fj["block_norm"] = flat.block_norm;
  fj["off_diagonal_norm"] = flat.off_diagonal_norm;
  fj["min_eigenvalue"] = flat.min_eigenvalue;
  fj["completion_consistency"] = ext.consistency;
  fj["atomic_vs_completed"] = atomic_gap;
  j["flatness"] = std::move(fj);
  if (config.out) {
    std::ofstream file(*config.out);
    if (!file) throw InputError("cannot write rule file " + config.out->string());
    write_rule(rule, file);
    j["out"] = config.out->string();
  }
  emit(j, config.format, out);
  return exit_code::success;
}

int cmd_qcheck(const RunConfig& config, std::ostream& out) {
  const unsigned m = config.m;
  const ExistenceRun r = run_existence(config);
  const int sign = config.literal_sign ? kLiteralSign : kCertificateSign;
  const CertificatePolynomial q = build_Q(r.basis, r.verdict.u, m, sign);
  const CorollaryReport cor = verify_corollary(r.y, r.basis, q);

  Json j;
  j["command"] = "qcheck";
  j["source"] = source_name(config);
  j["verdict"] = r.verdict.exists ? "exists" : "does_not_exist";
  j["sign"] = sign;
  j["q"] = q.q.to_string();
  j["corollary_deviation"] = cor.deviation;
  bool ok = r.verdict.exists && cor.deviation <= config.tol;
  if (r.verdict.exists) {
    CubatureOptions options;
    options.commutation_tol = config.commutation_tol;
    options.weight_tol = config.weight_tol;
    options.seed = config.seed;
    const CubatureRule rule = construct_rule(r.y, r.basis, m, options);
    const RemarkReport rem = verify_remark(r.y, r.basis, q, rule);
    Json rj;
    rj["u_matches_rule"] = rem.u_vs_rule;
    rj["lower_orthogonality"] = rem.lower_orthogonality;
    rj["top_block"] = rem.top_block;
    rj["integral_of_q"] = rem.integral;
    rj["passed"] = rem.passed(config.tol);
    j["remark"] = std::move(rj);
    ok = ok && rem.passed(config.tol);
  }
  emit(j, config.format, out);
  return ok ? exit_code::success : exit_code::no_cubature;
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
  if (!config.rule) throw InputError("verify needs --rule");
  std::ifstream file(*config.rule);
  if (!file) throw InputError("cannot open rule file " + config.rule->string());
  const CubatureRule rule = read_rule(file);
  const MomentSequence y = load_source(config, 2 * rule.m);
  if (y.dimension() != rule.n) throw InputError("rule dimension does not match the measure");
  const OrthoBasis basis = build_orthobasis(y, rule.m);
  const VerificationReport rep = verify_exactness(rule, y, basis, rule.precision);

  const bool ok = rep.max_relative_error <= config.tol && rep.min_weight > 0.0;
  Json j;
  j["command"] = "verify";
  j["source"] = source_name(config);
  j["rule"] = config.rule->string();
  j["verification"] = report_json(rep);
  j["passed"] = ok;
  emit(j, config.format, out);
  return ok ? exit_code::success : exit_code::no_cubature;
}

}  // namespace

void RunConfig::validate() const {
  if (catalog.has_value() == moments_file.has_value())
    throw InputError("exactly one of --catalog or --moments is required");
  if (m < 1) throw InputError("--m must be >= 1");
  if (!(tol > 0) || !(commutation_tol > 0) || !(flatness_tol > 0) || !(weight_tol > 0))
    throw InputError("tolerances must be positive");
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig config;
  CLI::App app{"Existence and construction of Gaussian cubature formulas from moments", "gcub"};
  app.require_subcommand(1);

  std::string catalog, moments_file, out_path, rule_path, sigma, format = "text";
  unsigned d_max = 0;
  CLI::Option* d_max_option = nullptr;

  const std::pair<Subcommand, const char*> commands[] = {
      {Subcommand::moments, "emit a moment file"},
      {Subcommand::ortho, "print an orthonormal polynomial P_sigma"},
      {Subcommand::exists, "decide existence of a Gaussian cubature of degree 2m-1"},
      {Subcommand::cubature, "construct and verify the Gaussian cubature rule"},
      {Subcommand::qcheck, "check the certificate polynomial identities"},
      {Subcommand::verify, "re-verify a rule file against a measure"},
  };
  const char* names[] = {"moments", "ortho", "exists", "cubature", "qcheck", "verify"};

  std::vector<std::pair<Subcommand, CLI::App*>> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], commands[i].second);
    auto* cat = sub->add_option("--catalog", catalog, "catalog measure, e.g. lebesgue^2 or symmetrized:0.5");
    auto* mom = sub->add_option("--moments", moments_file, "moment file");
    cat->excludes(mom);
    auto* m_option = sub->add_option("--m", config.m, "half degree m (precision 2m-1)")->check(CLI::PositiveNumber);
    const Subcommand kind = commands[i].first;
    if (kind == Subcommand::exists || kind == Subcommand::cubature || kind == Subcommand::qcheck) m_option->required();
    sub->add_option("--tol", config.tol, "existence / verification tolerance");
    sub->add_option("--commutation-tol", config.commutation_tol, "commutation tolerance");
    sub->add_option("--flatness-tol", config.flatness_tol, "flatness tolerance");
    sub->add_option("--weight-tol", config.weight_tol, "weight positivity threshold (fraction of mass)");
    sub->add_option("--seed", config.seed, "seed for the joint diagonalization");
    sub->add_option("--out", out_path, "output path");
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"text", "machine"}));
    if (commands[i].first == Subcommand::moments)
      d_max_option = sub->add_option("--dmax", d_max, "max moment degree (default 4m)");
    if (commands[i].first == Subcommand::ortho) sub->add_option("--sigma", sigma, "multi-index, e.g. 1,1")->required();
    if (commands[i].first == Subcommand::verify) sub->add_option("--rule", rule_path, "rule file")->required();
    if (commands[i].first == Subcommand::qcheck)
      sub->add_flag("--literal-sign", config.literal_sign, "form Q = +u^T P_2m");
    subs.emplace_back(commands[i].first, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw InputError(e.what());
  }

  for (const auto& [cmd, sub] : subs)
    if (sub->parsed()) config.subcommand = cmd;
  if (!catalog.empty()) config.catalog = catalog;
  if (!moments_file.empty()) config.moments_file = moments_file;
  if (!out_path.empty()) config.out = out_path;
  if (!rule_path.empty()) config.rule = rule_path;
  if (!sigma.empty()) config.sigma = sigma;
  if (d_max_option != nullptr && d_max_option->count() > 0) config.d_max = d_max;
  config.format = format == "machine" ? ReportFormat::machine : ReportFormat::text;
  config.validate();
  return config;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    switch (config.subcommand) {
      case Subcommand::moments:
        return cmd_moments(config, out);
      case Subcommand::ortho:
        return cmd_ortho(config, out);
      case Subcommand::exists:
        return cmd_exists(config, out);
      case Subcommand::cubature:
        return cmd_cubature(config, out);
      case Subcommand::qcheck:
        return cmd_qcheck(config, out);
      case Subcommand::verify:
        return cmd_verify(config, out);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::input_error;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_code::numerical_failure;
  }
  return exit_code::input_error;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    config = parse_args(argc, argv, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::input_error;
  }
  if (!config) return exit_code::success;
  return run(*config, out, err);
}

}  // namespace gcub::cli
