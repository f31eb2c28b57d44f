// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QNEQUIV_SCENARIO_HPP
#define QNEQUIV_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qnequiv/calibration.hpp"
#include "qnequiv/corpus.hpp"
#include "qnequiv/linalg.hpp"

namespace qnequiv {

struct ScenarioSettings {
  std::optional<double> tol_rel;
  std::optional<std::size_t> n_max;
  std::optional<double> cluster_tol;
  std::optional<double> support_tol;
  bool allow_degenerate = false;

  friend bool operator==(const ScenarioSettings&, const ScenarioSettings&) = default;
};

struct NamedSeminorm {
  std::string name;
  Matrix matrix;

  friend bool operator==(const NamedSeminorm&, const NamedSeminorm&) = default;
};

/// Parsed input file. Operators and vectors keep file order.
struct Scenario {
  std::size_t space_dim = 0;
  std::vector<NamedSeminorm> calibration;
  std::vector<std::pair<std::string, Matrix>> operators;
  std::vector<std::pair<std::string, Vector>> vectors;
  ScenarioSettings settings;

  Calibration build_calibration() const;
  /// Throws ValidationError naming the missing entry.
  const Matrix& op(std::string_view name) const;
  const Vector& vec(std::string_view name) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws ParseError for malformed text or wrongly typed fields, and
/// ValidationError (with a field path) for structural problems.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

/// Canonical JSON form; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

/// FNV-1a 64 of the canonical form, as 16 hex digits.
std::string scenario_digest(const Scenario& scenario);

/// Operators T, S, R, vector x, Euclidean calibration.
Scenario generate_corpus(std::uint64_t seed, std::size_t dim, CorpusKind kind);

/// Accepts "a", "a+bi", "a-bi", "bi", or "[a, b]". Throws InvalidArgument.
Complex parse_complex(std::string_view text);

enum class OutputFormat { Text, Csv, Json };

/// Throws InvalidArgument.
OutputFormat parse_output_format(std::string_view name);

struct CommandOptions {
  std::optional<double> tol_rel;
  std::optional<std::size_t> n_max;
  std::optional<double> cluster_tol;
  OutputFormat format = OutputFormat::Text;
  std::uint64_t seed = 1;
  std::size_t dim = 3;
  /// Adds wall time to the report, which then is no longer reproducible.
  bool timing = false;
};

struct CommandResult {
  int exit_code = 0;
  std::string output;       // report, for stdout
  std::string diagnostics;  // human-readable, for stderr
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitNumerical = 4;

int exit_code_for(ErrorCode code) noexcept;

/// Runs one command. Never throws for library errors: they are mapped to an
/// exit code and recorded in the report. `scenario` may be null only for gen.
CommandResult run_command(std::string_view command, const std::vector<std::string>& args,
                          const Scenario* scenario, const CommandOptions& options);

}  // namespace qnequiv

#endif  // QNEQUIV_SCENARIO_HPP
