#pragma once

// Verification suites shared by the command-line tool and the acceptance
// runner. Each suite produces a report of per-relation rows plus free-form
// records; a report passes iff every row does.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sga/quadrature.hpp"
#include "sga/transform.hpp"

namespace sga::suites {

struct Row {
  std::string id;       // stable relation id, also the tolerance key
  std::string identity; // the identity checked, in formula form
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string worst; // item attaining the residual
  std::size_t samples = 0;
  bool minimum = false; // tolerance is a lower bound (e.g. an observed order)
};

// One (relation, rho, point) residual, for plotting.
struct PlotRow {
  std::string id;
  double rho = 0.0;
  std::size_t point = 0;
  double residual = 0.0;
};

struct Report {
  std::string suite;
  std::string command;
  std::uint64_t seed = 0;
  std::string build_id;
  double wall_seconds = 0.0;
  std::vector<Row> rows;
  std::vector<PlotRow> plot;
  nlohmann::json records = nlohmann::json::object();
  std::vector<std::string> warnings;

  bool pass() const;
  // Timestamp-free unless with_time is set.
  nlohmann::json to_json(bool with_time = true) const;
  std::string rows_csv() const;
  std::string plot_csv() const;
};

struct Config {
  std::uint64_t seed = 20240611;
  std::map<std::string, double> tolerances; // overrides by relation id
  QuadratureSpec quad;
  std::optional<std::vector<double>> rho_list; // restricts quantum rho samples
  std::size_t classical_points = 200;
  std::size_t ladder_points = 50;
  std::size_t jacobi_points = 20;
  std::string command;
};

// Default tolerance per relation id; the set of ids is fixed per suite.
const std::map<std::string, double> &default_tolerances(const std::string &suite);

// Throws ConfigError for ids that no suite knows.
void validate_tolerances(const std::map<std::string, double> &overrides);

// Sets one QuadratureSpec field by name; throws ConfigError for unknown keys or
// malformed values.
void set_quadrature_field(QuadratureSpec &quad, const std::string &key,
                          const std::string &value);

Report verify_classical(const Config &cfg);
Report verify_quantum(const Config &cfg);

enum class Direction { forward, inverse, roundtrip, plancherel, ggpath, refine };
Direction parse_direction(const std::string &s);
std::string direction_name(Direction d);

struct TransformRun {
  Report report;
  std::optional<transform::SpectralFunction> spectrum; // forward direction
  std::vector<std::pair<std::string, std::string>> tables; // (file stem, CSV text)
};

// "name" or "name(p1,p2,...)" as produced by HyperFunction::name; see
// transform::builtin_function for the names. Throws ConfigError.
transform::HyperFunction function_from_spec(const std::string &spec);

// `input` is a spectral file for the inverse direction. Functions empty means
// the five-function suite for plancherel and the named default otherwise.
TransformRun run_transform(const Config &cfg, Direction direction,
                           const std::vector<transform::HyperFunction> &functions,
                           const std::optional<transform::SpectralFunction> &input = {});

} // namespace sga::suites
