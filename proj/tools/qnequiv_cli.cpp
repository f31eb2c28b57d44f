// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qnequiv.h"

namespace {

constexpr int kExitUsage = 3;

int fail_status(qn_status status) {
  std::fprintf(stderr, "qnequiv: %s: %s\n", qn_status_name(status), qn_last_error());
  return qn_status_exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quotient-bounded operator analysis on calibrated spaces", "qnequiv"};
  app.footer(
      "Commands:\n"
      "  validate <scenario>\n"
      "  analyze <scenario> <op>\n"
      "  spectrum <scenario> <op>\n"
      "  radius <scenario> <op>\n"
      "  neumann <scenario> <op>\n"
      "  equiv <scenario> <op1> <op2>\n"
      "  decay <scenario> <op1> <op2>\n"
      "  local <scenario> <op> <vec>\n"
      "  transfer <scenario> <op1> <op2> <vec> <lambda>\n"
      "  gen <kind>            kinds: shared-semisimple, nilpotent-pair, permuted-diagonal, random-dense\n"
      "\nExit codes: 0 ok, 2 analytic negative, 3 invalid input, 4 numerical failure.");

  std::string command;
  std::vector<std::string> rest;
  double tol_rel = 0.0;
  long long n_max = 0;
  double cluster_tol = 0.0;
  std::string format = "text";
  std::uint64_t seed = 1;
  std::size_t dim = 3;
  bool timing = false;

  app.add_option("command", command, "Command to run")->required();
  app.add_option("args", rest, "Scenario file followed by command arguments");
  app.add_option("--tol-rel", tol_rel, "Relative tolerance of the equivalence decision")
      ->check(CLI::PositiveNumber);
  app.add_option("--n-max", n_max, "Series / table length")->check(CLI::PositiveNumber);
  app.add_option("--cluster-tol", cluster_tol, "Eigenvalue clustering tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--seed", seed, "Seed for gen");
  app.add_option("--dim", dim, "Dimension for gen")->check(CLI::PositiveNumber);
  app.add_flag("--timing", timing, "Include wall time in the report (breaks byte-identical output)");
  app.positionals_at_end(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  qn_scenario* scenario = nullptr;
  std::vector<std::string> args = rest;
  if (command != "gen") {
    if (args.empty()) {
      std::fprintf(stderr, "qnequiv: %s: a scenario file is required\n", command.c_str());
      return kExitUsage;
    }
    const qn_status st = qn_scenario_load(args.front().c_str(), &scenario);
    if (st != QN_OK) return fail_status(st);
    args.erase(args.begin());
  }

  qn_options opts;
  qn_options_init(&opts);
  opts.tol_rel = tol_rel;
  opts.n_max = n_max;
  opts.cluster_tol = cluster_tol;
  opts.format = format.c_str();
  opts.seed = seed;
  opts.dim = dim;
  opts.timing = timing ? 1 : 0;

  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());

  qn_report* report = nullptr;
  const qn_status st = qn_run_command(command.c_str(), cargs.size(), cargs.data(), scenario, &opts, &report);
  qn_scenario_free(scenario);
  if (st != QN_OK) return fail_status(st);

  std::fputs(qn_report_output(report), stdout);
  std::fputs(qn_report_diagnostics(report), stderr);
  const int code = qn_report_exit_code(report);
  qn_report_free(report);
  return code;
}
