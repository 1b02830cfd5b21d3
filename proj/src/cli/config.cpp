#include <algorithm>
#include <chrono>
#include <vector>

#include <CLI11.hpp>

#include "deadend/cli.hpp"
#include "deadend/errors.hpp"

namespace deadend::cli {

Budget RunConfig::budget() const {
  Budget b;
  b.max_elements = budget_elements;
  b.max_radius = budget_radius;
  b.max_time = std::chrono::milliseconds(static_cast<std::int64_t>(budget_seconds * 1000));
  b.validate();
  return b;
}

namespace {

// "--max-m,--max_m": config files spell keys with underscores.
std::string flag(std::string name) {
  std::string under = name;
  std::replace(under.begin(), under.end(), '-', '_');
  return "--" + name + ",--" + under;
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig c;
  CLI::App app{"Word metrics, dead-end depth and dead-end constructions", "deadend"};
  app.fallthrough();
  app.require_subcommand(1);
  // Flat key = value file; names mirror the long flags.
  app.set_config("--config", "", "Read defaults from a key = value file");
  app.allow_config_extras(false);

  app.add_option("--group", c.group, "zz | grid:d | cyclic:m | dihedral:m | lamplighter | table:FILE");
  app.add_option("--gens", c.gens, "Comma separated generator literals");
  app.add_option(flag("int-bits"), c.int_bits, "Bound on integer coordinates")->check(CLI::Range(8, 64));
  app.add_option("--quotient", c.quotient, "cyclic:m or cyclic:m/c1,c2,...");
  app.add_option(flag("quotient-target"), c.quotient_target, "Target group of a word-based quotient");
  app.add_option(flag("quotient-images"), c.quotient_images, "Images of the generators, ';' separated");
  app.add_option("--family", c.family, "Quotient family to search (cyclic)");
  app.add_option(flag("min-m"), c.min_m, "Smallest family member");
  app.add_option(flag("max-m"), c.max_m, "Largest family member");
  app.add_option(flag("quotient-mode"), c.quotient_mode, "greedy | paper-safe")->check(CLI::IsMember({"greedy", "paper-safe"}));
  app.add_option(flag("target-depth"), c.target_depth, "Depth D to construct (D >= 2)");
  app.add_option(flag("bound-mode"), c.bound_mode, "paper | tight")->check(CLI::IsMember({"paper", "tight"}));
  app.add_option(flag("budget-elements"), c.budget_elements, "Element budget for each ball");
  app.add_option(flag("budget-radius"), c.budget_radius, "Radius budget");
  app.add_option(flag("budget-seconds"), c.budget_seconds, "Time budget for each ball");
  app.add_option("--element", c.element, "Element literal");
  app.add_option("--word", c.word, "S-word such as [+1,-2]");
  app.add_option("--radius", c.radius, "Ball radius");
  app.add_option("--cap", c.cap, "Depth search cap");
  app.add_option("--out", c.out, "Write the JSON report here instead of stdout");
  app.add_option("--csv", c.csv, "Write per-element CSV rows here");
  app.add_option(flag("cache-dir"), c.cache_dir, "Ball cache directory");
  app.add_option("--input", c.input, "Report to re-check (verify)");

  for (const char* name : {"construct", "verify", "certify", "depth", "profile", "ball", "diameter"}) {
    app.add_subcommand(name)->callback([&c, name] { c.command = name; });
  }
  app.get_subcommand("construct")->description("Build A for a target depth and verify the witness");
  app.get_subcommand("verify")->description("Re-run a construct report (--input) and compare");
  app.get_subcommand("certify")->description("Factorization certificate for one element");
  app.get_subcommand("depth")->description("Dead-end depth of one element");
  app.get_subcommand("profile")->description("Depth of every element of a ball");
  app.get_subcommand("ball")->description("Sphere sizes of a ball");
  app.get_subcommand("diameter")->description("Diameter of a finite group");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw ParseError(e.what());
  }
  if (auto* opt = app.get_option("--config"); opt->count() > 0) c.config = opt->as<std::string>();
  c.budget();
  return c;
}

}  // namespace deadend::cli
