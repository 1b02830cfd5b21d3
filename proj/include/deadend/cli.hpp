#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "deadend/cayley.hpp"
#include "deadend/errors.hpp"
#include "deadend/json_io.hpp"

namespace deadend::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kParse = 2, kBudget = 3, kVerification = 4 };

/// Everything a command needs. Filled from flags, then from the optional
/// --config file for flags that were not given.
struct RunConfig {
  std::string command;

  std::string group;
  std::string gens;
  int int_bits = 64;

  std::string quotient;         // cyclic:m or cyclic:m/c1,c2,...
  std::string quotient_target;  // target group for word-based maps
  std::string quotient_images;  // one target element per generator, ';' separated
  std::string family;           // "cyclic"
  std::int64_t min_m = 2;
  std::int64_t max_m = 100'000;
  std::string quotient_mode = "greedy";

  std::uint32_t target_depth = 0;
  std::string bound_mode = "paper";

  std::uint64_t budget_elements = Budget{}.max_elements;
  std::uint32_t budget_radius = Budget{}.max_radius;
  double budget_seconds = 600;

  std::string element;
  std::string word;
  std::optional<std::uint32_t> radius;
  std::optional<std::uint32_t> cap;

  std::string out;
  std::string csv;
  std::string cache_dir;
  std::string input;
  std::string config;

  Budget budget() const;
};

/// --help; what() holds the help text.
struct HelpRequested : Error {
  using Error::Error;
};

/// Parses argv (argv[0] is the program name). Throws ParseError.
RunConfig parse_args(int argc, const char* const* argv);

/// Runs one command, writing the JSON report to `out` (or --out) and
/// diagnostics to `err`. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Report envelope: schema, command, inputs, inputs_digest, results,
/// timing, version. Everything except "timing" is deterministic.
Json make_report(const std::string& command, Json inputs, Json results, double seconds);

}  // namespace deadend::cli
