#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "gcub/cubature.hpp"
#include "gcub/existence.hpp"

namespace gcub::cli {

enum class Subcommand { moments, ortho, exists, cubature, qcheck, verify };
enum class ReportFormat { text, machine };

namespace exit_code {
inline constexpr int success = 0;
inline constexpr int no_cubature = 10;  // also: a verified rule or certificate fails its checks
inline constexpr int input_error = 20;
inline constexpr int numerical_failure = 30;
}  // namespace exit_code

struct RunConfig {
  Subcommand subcommand = Subcommand::exists;
  std::optional<std::string> catalog;
  std::optional<std::filesystem::path> moments_file;
  unsigned m = 1;
  double tol = kDefaultExistenceTolerance;
  double commutation_tol = kDefaultCommutationTolerance;
  double flatness_tol = kDefaultFlatnessTolerance;
  double weight_tol = kDefaultWeightTolerance;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> rule;  // verify
  std::optional<unsigned> d_max;              // moments
  std::optional<std::string> sigma;           // ortho
  bool literal_sign = false;                  // qcheck
  ReportFormat format = ReportFormat::text;

  // Throws InputError.
  void validate() const;
};

// Parses argv (argv[0] is the program name). Throws InputError on bad usage;
// returns nullopt after printing help.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

// Executes one subcommand; reports go to `out`, diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_args + run with exit-code mapping; what main() calls.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gcub::cli
