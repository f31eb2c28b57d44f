// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnequiv/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qnequiv/equivalence.hpp"
#include "qnequiv/local_spectral.hpp"
#include "qnequiv/spectral.hpp"

namespace qnequiv {

using Json = nlohmann::ordered_json;

namespace {

// ---- parsing -------------------------------------------------------------

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  fail(ErrorCode::ParseError, path + ": " + what);
}

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  fail(ErrorCode::ValidationError, path + ": " + what);
}

Complex read_complex(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  parse_fail(path, "expected a number or a [re, im] pair");
}

Vector read_vector(const Json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array()) parse_fail(path, "expected an array");
  if (j.size() != dim) {
    invalid(path, "length " + std::to_string(j.size()) + ", expected " + std::to_string(dim));
  }
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = read_complex(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Matrix read_matrix(const Json& j, const std::string& path, std::optional<std::size_t> rows, std::size_t cols) {
  if (!j.is_array()) parse_fail(path, "expected an array of rows");
  if (rows && j.size() != *rows) {
    invalid(path, std::to_string(j.size()) + " rows, expected " + std::to_string(*rows));
  }
  if (j.empty()) invalid(path, "matrix has no rows");
  Matrix m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array()) parse_fail(row_path, "expected an array");
    if (j[i].size() != cols) {
      invalid(row_path, std::to_string(j[i].size()) + " columns, expected " + std::to_string(cols));
    }
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = read_complex(j[i][k], row_path + "[" + std::to_string(k) + "]");
  }
  return m;
}

double read_positive(const Json& j, const std::string& path) {
  if (!j.is_number()) parse_fail(path, "expected a number");
  const double v = j.get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) invalid(path, "must be positive and finite");
  return v;
}

void check_unique(std::vector<std::string> names, const std::string& path) {
  std::sort(names.begin(), names.end());
  for (std::size_t i = 1; i < names.size(); ++i) {
    if (names[i] == names[i - 1]) invalid(path, "duplicate name '" + names[i] + "'");
  }
}

ScenarioSettings read_settings(const Json& j) {
  ScenarioSettings s;
  if (!j.is_object()) parse_fail("settings", "expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string path = "settings." + key;
    if (key == "tol_rel") {
      s.tol_rel = read_positive(value, path);
    } else if (key == "n_max") {
      if (!value.is_number_integer() || value.get<long long>() < 1) invalid(path, "must be a positive integer");
      s.n_max = value.get<std::size_t>();
    } else if (key == "cluster_tol") {
      s.cluster_tol = read_positive(value, path);
    } else if (key == "support_tol") {
      s.support_tol = read_positive(value, path);
    } else if (key == "allow_degenerate") {
      if (!value.is_boolean()) parse_fail(path, "expected true or false");
      s.allow_degenerate = value.get<bool>();
    } else {
      invalid(path, "unknown setting");
    }
  }
  return s;
}

// ---- serialization -------------------------------------------------------

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (const Complex& z : v.entries()) out.push_back(complex_json(z));
  return out;
}

Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(complex_json(m(i, k)));
    out.push_back(std::move(row));
  }
  return out;
}

Json complex_list_json(const std::vector<Complex>& values) {
  Json out = Json::array();
  for (const Complex& z : values) out.push_back(complex_json(z));
  return out;
}

Json scenario_json(const Scenario& s) {
  Json j;
  j["space_dim"] = s.space_dim;
  Json cal = Json::array();
  for (const auto& p : s.calibration) cal.push_back({{"name", p.name}, {"matrix", matrix_json(p.matrix)}});
  j["calibration"] = std::move(cal);
  Json ops = Json::object();
  for (const auto& [name, m] : s.operators) ops[name] = matrix_json(m);
  j["operators"] = std::move(ops);
  Json vecs = Json::object();
  for (const auto& [name, v] : s.vectors) vecs[name] = vector_json(v);
  j["vectors"] = std::move(vecs);
  Json settings = Json::object();
  if (s.settings.tol_rel) settings["tol_rel"] = *s.settings.tol_rel;
  if (s.settings.n_max) settings["n_max"] = *s.settings.n_max;
  if (s.settings.cluster_tol) settings["cluster_tol"] = *s.settings.cluster_tol;
  if (s.settings.support_tol) settings["support_tol"] = *s.settings.support_tol;
  if (s.settings.allow_degenerate) settings["allow_degenerate"] = true;
  j["settings"] = std::move(settings);
  return j;
}

std::size_t array_depth(const Json& j) {
  if (!j.is_array()) return 0;
  std::size_t d = 0;
  for (const auto& e : j) d = std::max(d, array_depth(e));
  return d + 1;
}

bool holds_object(const Json& j) {
  if (j.is_object()) return true;
  if (j.is_array()) {
    for (const auto& e : j) {
      if (holds_object(e)) return true;
    }
  }
  return false;
}

// Pretty printer that keeps vectors and matrix rows on one line.
void dump_compact(const Json& j, std::size_t indent, std::string& out) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    std::size_t i = 0;
    for (const auto& [key, value] : j.items()) {
      out += inner + Json(key).dump() + ": ";
      dump_compact(value, indent + 2, out);
      out += (++i < j.size()) ? ",\n" : "\n";
    }
    out += pad + "}";
  } else if (j.is_array() && (holds_object(j) || array_depth(j) > 2)) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += inner;
      dump_compact(j[i], indent + 2, out);
      out += (i + 1 < j.size()) ? ",\n" : "\n";
    }
    out += pad + "]";
  } else {
    std::string flat = j.dump();
    if (j.is_array()) {
      // ",[" and "," separators get a space for readability.
      std::string spaced;
      bool in_string = false;
      for (std::size_t i = 0; i < flat.size(); ++i) {
        const char c = flat[i];
        if (c == '"' && (i == 0 || flat[i - 1] != '\\')) in_string = !in_string;
        spaced += c;
        if (c == ',' && !in_string) spaced += ' ';
      }
      flat = std::move(spaced);
    }
    out += flat;
  }
}

std::string to_compact(const Json& j) {
  std::string out;
  dump_compact(j, 0, out);
  return out + "\n";
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

Calibration Scenario::build_calibration() const {
  std::vector<Seminorm> family;
  family.reserve(calibration.size());
  for (const auto& p : calibration) family.emplace_back(p.name, p.matrix);
  return Calibration(space_dim, std::move(family), settings.allow_degenerate);
}

const Matrix& Scenario::op(std::string_view name) const {
  for (const auto& [n, m] : operators) {
    if (n == name) return m;
  }
  fail(ErrorCode::ValidationError, "operators." + std::string(name) + ": no such operator");
}

const Vector& Scenario::vec(std::string_view name) const {
  for (const auto& [n, v] : vectors) {
    if (n == name) return v;
  }
  fail(ErrorCode::ValidationError, "vectors." + std::string(name) + ": no such vector");
}

Scenario parse_scenario(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::ParseError, std::string("malformed scenario: ") + e.what());
  }
  if (!j.is_object()) parse_fail("<root>", "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "space_dim" && key != "calibration" && key != "operators" && key != "vectors" && key != "settings") {
      invalid(key, "unknown field");
    }
  }

  Scenario s;
  if (!j.contains("space_dim")) invalid("space_dim", "missing");
  if (!j["space_dim"].is_number_integer() || j["space_dim"].get<long long>() < 1) {
    invalid("space_dim", "must be a positive integer");
  }
  s.space_dim = j["space_dim"].get<std::size_t>();

  if (j.contains("settings")) s.settings = read_settings(j["settings"]);

  if (!j.contains("calibration")) invalid("calibration", "missing");
  const Json& cal = j["calibration"];
  if (!cal.is_array()) parse_fail("calibration", "expected an array");
  if (cal.empty()) invalid("calibration", "at least one seminorm is required");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < cal.size(); ++i) {
    const std::string path = "calibration[" + std::to_string(i) + "]";
    if (!cal[i].is_object()) parse_fail(path, "expected an object");
    if (!cal[i].contains("name") || !cal[i]["name"].is_string()) invalid(path + ".name", "missing or not a string");
    if (!cal[i].contains("matrix")) invalid(path + ".matrix", "missing");
    NamedSeminorm p{cal[i]["name"].get<std::string>(),
                    read_matrix(cal[i]["matrix"], path + ".matrix", std::nullopt, s.space_dim)};
    names.push_back(p.name);
    s.calibration.push_back(std::move(p));
  }
  check_unique(names, "calibration");

  if (j.contains("operators")) {
    const Json& ops = j["operators"];
    if (!ops.is_object()) parse_fail("operators", "expected an object");
    for (const auto& [name, value] : ops.items()) {
      s.operators.emplace_back(name, read_matrix(value, "operators." + name, s.space_dim, s.space_dim));
    }
  }
  if (j.contains("vectors")) {
    const Json& vecs = j["vectors"];
    if (!vecs.is_object()) parse_fail("vectors", "expected an object");
    for (const auto& [name, value] : vecs.items()) {
      s.vectors.emplace_back(name, read_vector(value, "vectors." + name, s.space_dim));
    }
  }

  // Surfaces non-separating families and rank problems at load time.
  try {
    (void)s.build_calibration();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ValidationError && std::string_view(e.what()).rfind("calibration", 0) != 0) {
      invalid("calibration", e.what());
    }
    throw;
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ParseError, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& scenario) { return to_compact(scenario_json(scenario)); }

std::string scenario_digest(const Scenario& scenario) { return hex64(fnv1a64(serialize_scenario(scenario))); }

Scenario generate_corpus(std::uint64_t seed, std::size_t dim, CorpusKind kind) {
  Rng rng(seed);
  const OperatorTriple triple = make_triple(rng, dim, kind);
  Scenario s;
  s.space_dim = dim;
  s.calibration.push_back({"euclidean", Matrix::identity(dim)});
  s.operators.emplace_back("T", triple.t);
  s.operators.emplace_back("S", triple.s);
  s.operators.emplace_back("R", triple.r);
  s.vectors.emplace_back("x", random_vector(rng, dim));
  return s;
}

Complex parse_complex(std::string_view text) {
  const std::string s(text);
  auto bad = [&]() -> Complex { fail(ErrorCode::InvalidArgument, "cannot parse complex number '" + s + "'"); };
  auto number = [&](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      bad();
    }
    if (used != part.size() || !std::isfinite(v)) bad();
    return v;
  };
  if (s.empty()) bad();
  if (s.front() == '[') {
    Json j;
    try {
      j = Json::parse(s);
    } catch (const Json::parse_error&) {
      bad();
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) bad();
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (s.back() != 'i') return {number(s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    if (body.empty()) return {0.0, 1.0};
    return {0.0, number(body)};
  }
  return {number(body.substr(0, split)), number(body.substr(split))};
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "text") return OutputFormat::Text;
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  fail(ErrorCode::InvalidArgument, "unknown format '" + std::string(name) + "' (expected text, csv, json)");
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotQuotientBounded:
    case ErrorCode::NotEquivalent:
    case ErrorCode::RadiusNotLessThanOne:
      return kExitNegative;
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::InvalidArgument:
    case ErrorCode::UnknownKind:
      return kExitValidation;
    case ErrorCode::SingularMatrix:
    case ErrorCode::NoConvergence:
    case ErrorCode::ClusterSeparationFailure:
    case ErrorCode::SpectrumHit:
    case ErrorCode::Overflow:
    case ErrorCode::DivergenceDetected:
    case ErrorCode::LocalSpectrumHit:
      return kExitNumerical;
  }
  return kExitNumerical;
}

// ---- commands ------------------------------------------------------------

namespace {

struct Context {
  const Scenario& scenario;
  Calibration calibration;
  EquivalenceOptions equiv;
  std::optional<std::size_t> n_max;
  double support_tol;
};

struct Outcome {
  Json result = Json::object();
  int exit_code = kExitOk;
  std::string status = "ok";
  std::optional<std::pair<std::string, std::string>> error;  // code, message
};

void expect_args(const std::vector<std::string>& args, std::size_t n, std::string_view usage) {
  if (args.size() != n) {
    fail(ErrorCode::InvalidArgument, "usage: " + std::string(usage));
  }
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json certificates_json(const QuotientBoundedness& qb) {
  Json out = Json::array();
  for (const auto& c : qb.certificates) {
    Json row{{"seminorm", c.seminorm}, {"invariant", c.invariant}, {"defect", c.defect}, {"threshold", c.threshold}};
    row["bound"] = c.invariant ? Json(c.bound) : Json(nullptr);
    out.push_back(std::move(row));
  }
  return out;
}

Outcome negative(Json result, const std::string& code, const std::string& message) {
  Outcome o;
  o.result = std::move(result);
  o.exit_code = kExitNegative;
  o.status = "analytic-negative";
  o.error = std::make_pair(code, message);
  return o;
}

Outcome cmd_validate(const Context& ctx) {
  Outcome o;
  const Scenario& s = ctx.scenario;
  o.result["space_dim"] = s.space_dim;
  Json sems = Json::array();
  for (const auto& p : ctx.calibration.seminorms()) {
    sems.push_back({{"name", p.name()}, {"rank", p.rank()}, {"kernel_dim", s.space_dim - p.rank()}});
  }
  o.result["seminorms"] = std::move(sems);
  o.result["separating"] = ctx.calibration.separating();
  Json ops = Json::array();
  for (const auto& [name, m] : s.operators) {
    ops.push_back({{"name", name}, {"quotient_bounded", is_quotient_bounded(m, ctx.calibration).bounded}});
  }
  o.result["operators"] = std::move(ops);
  Json vecs = Json::array();
  for (const auto& [name, v] : s.vectors) vecs.push_back(name);
  o.result["vectors"] = std::move(vecs);
  return o;
}

Outcome cmd_analyze(const Context& ctx, const std::vector<std::string>& args) {
  expect_args(args, 1, "analyze <op>");
  const Matrix& t = ctx.scenario.op(args[0]);
  Json result;
  result["operator"] = args[0];
  const QuotientBoundedness qb = is_quotient_bounded(t, ctx.calibration);
  result["quotient_bounded"] = qb.bounded;
  result["certificates"] = certificates_json(qb);
  if (!qb.bounded) {
    return negative(std::move(result), std::string(to_string(ErrorCode::NotQuotientBounded)),
                    "operator '" + args[0] + "' is not quotient bounded");
  }
  Json norms = Json::array();
  for (const auto& p : ctx.calibration.seminorms()) norms.push_back({{"seminorm", p.name()}, {"phat", phat(t, p)}});
  result["phat"] = std::move(norms);
  result["norm"] = spectral_norm(t);
  result["radius_exact"] = radius_exact(t, ctx.calibration);
  const SpectralDecomposition dec = eigendecompose(t, ctx.equiv.eigen);
  result["cluster_tol"] = dec.cluster_tol;
  result["eigenvalues"] = complex_list_json(dec.eigenvalues);
  Json mult = Json::array();
  for (std::size_t m : dec.multiplicities) mult.push_back(m);
  result["multiplicities"] = std::move(mult);
  result["semisimple_part"] = matrix_json(semisimple_part(t, ctx.equiv.eigen));
  Outcome o;
  o.result = std::move(result);
  return o;
}

Outcome cmd_spectrum(const Context& ctx, const std::vector<std::string>& args) {
  expect_args(args, 1, "spectrum <op>");
  const Matrix& t = ctx.scenario.op(args[0]);
  const SpectralReport rep = qp_spectrum(t, ctx.calibration, ctx.equiv.eigen);
  Outcome o;
  o.result["operator"] = args[0];
  Json clusters = Json::array();
  for (const auto& c : rep.qp_spectrum) {
    Json names = Json::array();
    for (const auto& n : c.seminorms) names.push_back(n);
    clusters.push_back({{"value", complex_json(c.value)}, {"seminorms", std::move(names)}});
  }
  o.result["qp_spectrum"] = std::move(clusters);
  o.result["ambient_spectrum"] = complex_list_json(rep.ambient_spectrum);
  o.result["radius_of_boundedness"] = rep.radius_of_boundedness;
  o.result["regular"] = rep.regular;
  Json radii = Json::array();
  for (const auto& [name, r] : rep.per_seminorm_radii) radii.push_back({{"seminorm", name}, {"radius", r}});
  o.result["per_seminorm_radii"] = std::move(radii);
  return o;
}

Outcome cmd_radius(const Context& ctx, const std::vector<std::string>& args) {
  expect_args(args, 1, "radius <op>");
  const Matrix& t = ctx.scenario.op(args[0]);
  const std::size_t n_max = ctx.n_max.value_or(64);
  Outcome o;
  o.result["operator"] = args[0];
  o.result["radius_exact"] = radius_exact(t, ctx.calibration);
  const std::vector<double> g = radius_estimate(t, ctx.calibration, n_max);
  Json rows = Json::array();
  for (std::size_t n = 0; n < g.size(); ++n) rows.push_back({{"n", n + 1}, {"g_n", number_or_null(g[n])}});
  o.result["estimates"] = std::move(rows);
  return o;
}

Outcome cmd_neumann(const Context& ctx, const std::vector<std::string>& args) {
  expect_args(args, 1, "neumann <op>");
  const Matrix& t = ctx.scenario.op(args[0]);
  const NeumannResult res = neumann_inverse(t, ctx.calibration);
  Outcome o;
  o.result["operator"] = args[0];
  o.result["terms"] = res.terms;
  o.result["certificate_order"] = res.certificate_order;
  o.result["contraction"] = res.contraction;
  o.result["residual"] = res.residual;
  o.result["inverse"] = matrix_json(res.inverse);
  return o;
}

Json decay_rows(const BracketSequence& seq, const Calibration& cal) {
  Json rows = Json::array();
  auto root = [](double b, std::size_t n) { return n == 0 ? b : std::pow(b, 1.0 / static_cast<double>(n)); };
  for (std::size_t n = 0; n < seq.norms.size(); ++n) {
    for (std::size_t p = 0; p < cal.size(); ++p) {
      const double b = seq.seminorm_norms[p][n];
      rows.push_back({{"n", n}, {"b_n", b}, {"root_n", root(b, n)}, {"seminorm", cal[p].name()}});
    }
    rows.push_back({{"n", n}, {"b_n", seq.norms[n]}, {"root_n", root(seq.norms[n], n)}, {"seminorm", "max"}});
  }
  return rows;
}

Outcome cmd_equiv(const Context& ctx, const std::vector<std::string>& args) {
  expect_args(args, 2, "equiv <op1> <op2>");
  const Matrix& t = ctx.scenario.op(args[0]);
  const Matrix& s = ctx.scenario.op(args[1]);
  const EquivalenceVerdict v = decide_equivalence(t, s, ctx.calibration, ctx.equiv);
  Json r;
  r["operators"] = Json::array({args[0], args[1]});
  r["verdict"] = v.flagged() ? "oracle-disagreement" : (v.equivalent ? "equivalent" : "not-equivalent");
  r["equivalent"] = v.equivalent;
  r["cutoff"] = v.cutoff;
  r["residual"] = v.residual;
  r["residual_next"] = v.residual_next;
  r["scale"] = v.scale;
  r["threshold"] = v.threshold;
  r["forward_vanishes"] = v.forward_vanishes;
  r["backward_vanishes"] = v.backward_vanishes;
  r["semisimple_distance"] = v.semisimple_distance;
  r["oracle_equivalent"] = v.oracle_equivalent;
  r["oracle_agrees"] = v.oracle_agrees;
  Json curve = Json::array();
  for (std::size_t n = 0; n < v.decay_curve.size(); ++n) curve.push_back({{"n", n + 1}, {"root_n", v.decay_curve[n]}});
  r["decay_curve"] = std::move(curve);
  if (v.flagged()) {
    Outcome o;
    o.result = std::move(r);
    o.exit_code = kExitNumerical;
    o.status = "numerical-failure";
    o.error = std::make_pair(std::string("OracleDisagreement"),
                             "bracket decision and semisimple-part oracle disagree (tolerance cliff)");
    return o;
  }
  if (!v.equivalent) {
    return negative(std::move(r), std::string(to_string(ErrorCode::NotEquivalent)),
                    "'" + args[0] + "' and '" + args[1] + "' are not quasi-nilpotent equivalent");
  }
  Outcome o;
  o.result = std::move(r);
  return o;
}

Outcome cmd_decay(const Context& ctx, const std::vector<std::string>& args) {
  expect_args(args, 2, "decay <op1> <op2>");
  const Matrix& t = ctx.scenario.op(args[0]);
  const Matrix& s = ctx.scenario.op(args[1]);
  const std::size_t n_max = ctx.n_max.value_or(2 * t.rows() + 1);
  const BracketSequence seq = bracket_sequence(t, s, ctx.calibration, n_max);
  Outcome o;
  o.result["operators"] = Json::array({args[0], args[1]});
  o.result["n_max"] = n_max;
  o.result["cross_check"] = seq.cross_check;
  o.result["rows"] = decay_rows(seq, ctx.calibration);
  return o;
}

Outcome cmd_local(const Context& ctx, const std::vector<std::string>& args) {
  expect_args(args, 2, "local <op> <vec>");
  const Matrix& t = ctx.scenario.op(args[0]);
  const Vector& x = ctx.scenario.vec(args[1]);
  const LocalSpectralAnalyzer analyzer(t, ctx.equiv.eigen, ctx.support_tol);
  const LocalSpectrum ls = analyzer.local_spectrum(x);
  const SpectralDecomposition& dec = analyzer.decomposition();
  Outcome o;
  o.result["operator"] = args[0];
  o.result["vector"] = args[1];
  o.result["support"] = complex_list_json(ls.support);
  o.result["empty"] = ls.empty();
  Json comps = Json::array();
  for (std::size_t i = 0; i < dec.cluster_count(); ++i) {
    comps.push_back({{"eigenvalue", complex_json(dec.eigenvalues[i])}, {"component_norm", ls.component_norms[i]}});
  }
  o.result["components"] = std::move(comps);
  return o;
}

Outcome cmd_transfer(const Context& ctx, const std::vector<std::string>& args) {
  expect_args(args, 4, "transfer <op1> <op2> <vec> <lambda>");
  const Matrix& t = ctx.scenario.op(args[0]);
  const Matrix& s = ctx.scenario.op(args[1]);
  const Vector& x = ctx.scenario.vec(args[2]);
  const Complex lambda = parse_complex(args[3]);
  const EquivalenceVerdict v = decide_equivalence(t, s, ctx.calibration, ctx.equiv);
  Json r;
  r["operators"] = Json::array({args[0], args[1]});
  r["vector"] = args[2];
  r["lambda"] = complex_json(lambda);
  if (v.flagged()) {
    Outcome o;
    o.result = std::move(r);
    o.exit_code = kExitNumerical;
    o.status = "numerical-failure";
    o.error = std::make_pair(std::string("OracleDisagreement"),
                             "bracket decision and semisimple-part oracle disagree (tolerance cliff)");
    return o;
  }
  if (!v.equivalent) {
    return negative(std::move(r), std::string(to_string(ErrorCode::NotEquivalent)),
                    "transfer needs quasi-nilpotent equivalent operators");
  }
  const LocalSpectralAnalyzer analyzer(t, ctx.equiv.eigen, ctx.support_tol);
  const std::size_t terms = std::min(ctx.n_max.value_or(64), v.cutoff);
  const Vector x1 = transfer_local_resolvent(analyzer, s, x, lambda, terms, ctx.equiv.tol_rel);
  Matrix shifted = lambda * Matrix::identity(s.rows());
  shifted -= s;
  r["terms"] = terms;
  r["x1"] = vector_json(x1);
  r["residual"] = norm2(shifted * x1 - x);
  Outcome o;
  o.result = std::move(r);
  return o;
}

// ---- rendering -----------------------------------------------------------

std::string scalar_text(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

bool scalar_or_pair_array(const Json& j) {
  for (const auto& e : j) {
    if (e.is_object()) return false;
    if (e.is_array()) {
      for (const auto& f : e) {
        if (f.is_structured()) return false;
      }
    }
  }
  return true;
}

void render_text(const Json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      render_text(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (j.is_array() && !scalar_or_pair_array(j)) {
    for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out += prefix + ": " + scalar_text(j) + "\n";
  }
}

std::string csv_field(const Json& j) {
  std::string s = scalar_text(j);
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

std::string render_csv(const Json& report) {
  const Json& result = report["result"];
  if (report["command"] == "decay" && result.contains("rows")) {
    std::string out = "n,b_n,root_n,seminorm\n";
    for (const auto& row : result["rows"]) {
      out += row["n"].dump() + "," + row["b_n"].dump() + "," + row["root_n"].dump() + "," +
             csv_field(row["seminorm"]) + "\n";
    }
    return out;
  }
  // Generic key,value listing built from the text rendering.
  std::string text;
  render_text(report, "", text);
  std::string out = "key,value\n";
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    const std::size_t colon = line.find(": ");
    out += csv_field(line.substr(0, colon)) + "," + csv_field(line.substr(colon + 2)) + "\n";
  }
  return out;
}

std::string render(const Json& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::Json: return to_compact(report);
    case OutputFormat::Csv: return render_csv(report);
    case OutputFormat::Text: break;
  }
  std::string out;
  render_text(report, "", out);
  return out;
}

std::string status_for(int exit_code) {
  switch (exit_code) {
    case kExitOk: return "ok";
    case kExitNegative: return "analytic-negative";
    case kExitValidation: return "validation-error";
    default: return "numerical-failure";
  }
}

Json tolerances_json(const Context* ctx) {
  Json t;
  t["tol_rel"] = ctx ? ctx->equiv.tol_rel : kDefaultTolRel;
  t["n_max"] = ctx && ctx->n_max ? Json(*ctx->n_max) : Json("auto");
  t["cluster_tol"] = ctx && ctx->equiv.eigen.cluster_tol > 0.0 ? Json(ctx->equiv.eigen.cluster_tol) : Json("auto");
  t["support_tol"] = ctx ? ctx->support_tol : kDefaultSupportTol;
  t["oracle_tol"] = ctx ? ctx->equiv.oracle_tol : 1e-7;
  t["rank_tol"] = kDefaultRankTol;
  t["invariance_tol"] = kDefaultInvarianceTol;
  return t;
}

}  // namespace

CommandResult run_command(std::string_view command, const std::vector<std::string>& args, const Scenario* scenario,
                          const CommandOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  Json report;
  report["command"] = command;
  Json arg_list = Json::array();
  for (const auto& a : args) arg_list.push_back(a);
  report["args"] = std::move(arg_list);

  CommandResult out;
  Outcome outcome;
  std::optional<Context> ctx;
  try {
    if (command == "gen") {
      expect_args(args, 1, "gen <kind>");
      const CorpusKind kind = parse_corpus_kind(args[0]);
      const Scenario generated = generate_corpus(options.seed, options.dim, kind);
      // gen emits the scenario itself so it can be fed back as input.
      out.output = serialize_scenario(generated);
      return out;
    }
    if (scenario == nullptr) fail(ErrorCode::InvalidArgument, std::string(command) + ": a scenario file is required");
    report["scenario_digest"] = scenario_digest(*scenario);
    const ScenarioSettings& st = scenario->settings;
    EquivalenceOptions eq;
    eq.tol_rel = options.tol_rel.value_or(st.tol_rel.value_or(kDefaultTolRel));
    eq.eigen.cluster_tol = options.cluster_tol.value_or(st.cluster_tol.value_or(0.0));
    ctx.emplace(Context{*scenario, scenario->build_calibration(), eq, options.n_max ? options.n_max : st.n_max,
                        st.support_tol.value_or(kDefaultSupportTol)});

    if (command == "validate") {
      expect_args(args, 0, "validate");
      outcome = cmd_validate(*ctx);
    } else if (command == "analyze") {
      outcome = cmd_analyze(*ctx, args);
    } else if (command == "spectrum") {
      outcome = cmd_spectrum(*ctx, args);
    } else if (command == "radius") {
      outcome = cmd_radius(*ctx, args);
    } else if (command == "neumann") {
      outcome = cmd_neumann(*ctx, args);
    } else if (command == "equiv") {
      outcome = cmd_equiv(*ctx, args);
    } else if (command == "decay") {
      outcome = cmd_decay(*ctx, args);
    } else if (command == "local") {
      outcome = cmd_local(*ctx, args);
    } else if (command == "transfer") {
      outcome = cmd_transfer(*ctx, args);
    } else {
      fail(ErrorCode::InvalidArgument, "unknown command '" + std::string(command) + "'");
    }
  } catch (const Error& e) {
    outcome = Outcome{};
    outcome.result = nullptr;
    outcome.exit_code = exit_code_for(e.code());
    outcome.error = std::make_pair(std::string(to_string(e.code())), std::string(e.what()));
  }

  if (command == "gen") {
    // Only reachable on error: gen has no report otherwise.
    report["scenario_digest"] = nullptr;
  } else if (!report.contains("scenario_digest")) {
    report["scenario_digest"] = nullptr;
  }
  report["tolerances"] = tolerances_json(ctx ? &*ctx : nullptr);
  outcome.status = status_for(outcome.exit_code);
  report["status"] = outcome.status;
  report["exit_code"] = outcome.exit_code;
  report["result"] = std::move(outcome.result);
  if (outcome.error) {
    report["error"] = {{"code", outcome.error->first}, {"message", outcome.error->second}};
    out.diagnostics = "qnequiv: " + outcome.error->first + ": " + outcome.error->second + "\n";
  } else {
    report["error"] = nullptr;
  }
  if (options.timing) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    report["wall_time_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
  }
  out.exit_code = outcome.exit_code;
  out.output = render(report, options.format);
  return out;
}

}  // namespace qnequiv
