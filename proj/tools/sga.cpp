// Command-line front end: verification suites and transforms, with JSON/CSV
// reports written atomically into the output directory.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sga/errors.hpp"
#include "sga/suites.hpp"

namespace fs = std::filesystem;
using namespace sga;

namespace {

enum Exit { ok = 0, verification_failed = 1, config_error = 2, numerical_error = 3 };

struct Options {
  std::uint64_t seed = suites::Config{}.seed;
  std::vector<std::string> tolerances;
  std::vector<std::string> quad;
  std::string out = ".";
  std::string format = "both";
  bool strict = false;
  std::string rho_grid;
  std::string config;
  std::vector<std::string> functions;
  std::vector<double> params;
  std::string direction = "roundtrip";
  std::string input;
};

std::string trim(const std::string &s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::pair<std::string, std::string> split_pair(const std::string &s, const std::string &what) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError(what + " expects key=value, got '" + s + "'");
  return {trim(s.substr(0, eq)), trim(s.substr(eq + 1))};
}

double parse_double(const std::string &s, const std::string &what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError(what + ": not a number '" + s + "'");
  return v;
}

// Accepts ASCII and typographic minus signs.
std::vector<double> parse_list(std::string s, const std::string &what) {
  for (std::size_t p; (p = s.find("\xE2\x88\x92")) != std::string::npos;) s.replace(p, 3, "-");
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(parse_double(trim(cell), what));
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

// Line-oriented key=value; '#' starts a comment. Keys are the long flag
// names. Values apply only where the flag was not given.
void apply_config_file(const std::string &path, Options &o, const CLI::App &app,
                       const CLI::App *transform) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  auto given = [&](const std::string &flag) {
    if (app.get_option_no_throw("--" + flag) && app.count("--" + flag) > 0) return true;
    for (const CLI::App *sub : app.get_subcommands())
      if (sub->get_option_no_throw("--" + flag) && sub->count("--" + flag) > 0) return true;
    return transform && transform->get_option_no_throw("--" + flag) &&
           transform->count("--" + flag) > 0;
  };
  std::vector<std::string> file_tol, file_quad, file_fn;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto [key, value] = split_pair(line, path + ":" + std::to_string(lineno));
    if (key == "seed") {
      if (!given("seed")) o.seed = static_cast<std::uint64_t>(parse_double(value, "seed"));
    } else if (key == "tolerance") {
      file_tol.push_back(value);
    } else if (key == "quad") {
      file_quad.push_back(value);
    } else if (key == "out") {
      if (!given("out")) o.out = value;
    } else if (key == "format") {
      if (!given("format")) o.format = value;
    } else if (key == "strict") {
      if (!given("strict")) o.strict = value == "1" || value == "true";
    } else if (key == "rho-grid") {
      if (!given("rho-grid")) o.rho_grid = value;
    } else if (key == "function") {
      file_fn.push_back(value);
    } else if (key == "params") {
      if (!given("params")) o.params = parse_list(value, "params");
    } else if (key == "direction") {
      if (!given("direction")) o.direction = value;
    } else if (key == "input") {
      if (!given("input")) o.input = value;
    } else {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  // Multi-valued keys: flags come last so they win per key.
  o.tolerances.insert(o.tolerances.begin(), file_tol.begin(), file_tol.end());
  o.quad.insert(o.quad.begin(), file_quad.begin(), file_quad.end());
  if (!given("function")) o.functions = file_fn;
}

suites::Config build_config(const Options &o, const std::string &command) {
  suites::Config cfg;
  cfg.seed = o.seed;
  cfg.command = command;
  for (const auto &t : o.tolerances) {
    const auto [k, v] = split_pair(t, "--tolerance");
    cfg.tolerances[k] = parse_double(v, "--tolerance " + k);
  }
  suites::validate_tolerances(cfg.tolerances);
  for (const auto &q : o.quad) {
    const auto [k, v] = split_pair(q, "--quad");
    suites::set_quadrature_field(cfg.quad, k, v);
  }
  cfg.quad.validate();
  if (!o.rho_grid.empty()) cfg.rho_list = parse_list(o.rho_grid, "--rho-grid");
  if (o.format != "json" && o.format != "csv" && o.format != "both")
    throw ConfigError("--format must be json, csv or both");
  return cfg;
}

void write_atomic(const fs::path &path, const std::string &text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out) throw ConfigError("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

// Collects every output, then writes all files at the end.
void write_outputs(const Options &o, const suites::Report &rep,
                   const std::vector<std::pair<std::string, std::string>> &tables) {
  const fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + o.out + "'");
  std::string base = rep.suite;
  for (char &c : base)
    if (c == ':') c = '_';
  std::vector<std::pair<fs::path, std::string>> files;
  if (o.format != "csv") {
    nlohmann::json j = rep.to_json(true);
    j["timestamp"] = utc_now();
    files.push_back({dir / (base + "_report.json"), j.dump(2) + "\n"});
  }
  if (o.format != "json") {
    files.push_back({dir / (base + "_rows.csv"), rep.rows_csv()});
    if (!rep.plot.empty()) files.push_back({dir / (base + "_plot.csv"), rep.plot_csv()});
  }
  for (const auto &[stem, csv] : tables) files.push_back({dir / (stem + ".csv"), csv});
  for (const auto &[path, text] : files) write_atomic(path, text);
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << std::scientific << v;
  return s.str();
}

void print_summary(const suites::Report &rep) {
  for (const auto &r : rep.rows)
    std::cout << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(26) << r.id
              << " residual " << fmt(r.residual) << (r.minimum ? "  min " : "  tol ")
              << fmt(r.tolerance) << (r.worst.empty() ? "" : "  [" + r.worst + "]") << "\n";
  const auto &rec = rep.records;
  if (rec.contains("roundtrip"))
    for (const auto &e : rec["roundtrip"])
      std::cout << "roundtrip " << e["function"].get<std::string>() << " relative L2 error "
                << fmt(e["relative_error"].get<double>()) << "\n";
  if (rec.contains("relative_error"))
    std::cout << "roundtrip " << rec["function"].get<std::string>() << " relative L2 error "
              << fmt(rec["relative_error"].get<double>()) << "\n";
  if (rec.contains("plancherel")) {
    for (const auto &e : rec["plancherel"])
      std::cout << "plancherel " << e["function"].get<std::string>() << " lhs "
                << fmt(e["lhs"].get<double>()) << " rhs " << fmt(e["rhs"].get<double>())
                << " ratio " << std::setprecision(10) << std::fixed
                << e["ratio"].get<double>() << std::defaultfloat << "\n";
    std::cout << "plancherel constant " << std::setprecision(10) << std::fixed
              << rec["constant"].get<double>() << std::defaultfloat << "\n";
  }
  for (const auto &w : rep.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << rep.suite << ": " << (rep.pass() ? "pass" : "FAIL") << " ("
            << std::setprecision(3) << std::fixed << rep.wall_seconds << " s)"
            << std::defaultfloat << "\n";
}

std::string help_footer() {
  std::ostringstream s;
  const QuadratureSpec q;
  s << "\nQuadrature keys (--quad key=value) and defaults:\n"
    << "  sphere_theta=" << q.sphere_theta << " sphere_phi=" << q.sphere_phi
    << " radial_nodes=" << q.radial_nodes << " polar_nodes=" << q.polar_nodes
    << " azimuth_nodes=" << q.azimuth_nodes << "\n"
    << "  radius=" << q.radius << " (0: from the function's decay) rho_max=" << q.rho_max
    << " rho_count=" << q.rho_count << "\n"
    << "  eval_radial=" << q.eval_radial << " eval_theta=" << q.eval_theta
    << " eval_phi=" << q.eval_phi << " mellin_step=" << q.mellin_step
    << " tail_tolerance=" << q.tail_tolerance << "\n"
    << "\nRelation ids (--tolerance id=value) and defaults:\n";
  for (const char *suite : {"classical", "quantum", "transform"}) {
    s << "  " << suite << ":";
    for (const auto &[id, v] : suites::default_tolerances(suite)) s << " " << id << "=" << v;
    s << "\n";
  }
  s << "  rho_order is a lower bound; the rest are upper bounds.\n"
    << "\nTest functions: gaussian(s) offcenter(cx,cy,cz,s) modulated(s,ax,ay,az)\n"
    << "  bump(cx,cy,cz,a) zero; defaults gaussian(1) offcenter(0.8,0,0,0.7)\n"
    << "  modulated(0.8,1.5,0,0) bump(0.3,0,0,1.2).\n"
    << "\nConfig file: one key=value per line with the long flag names as keys\n"
    << "  (seed, tolerance, quad, out, format, strict, rho-grid, function, params,\n"
    << "  direction, input); flags given on the command line win.\n"
    << "\nExit codes: 0 pass, 1 verification failure, 2 configuration error,\n"
    << "  3 numerical error (quadrature, truncation, or warnings under --strict).\n";
  return s.str();
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"so(4,2) spectrum-generating algebra verification engine"};
  app.require_subcommand(1);
  app.footer(help_footer());
  Options o;

  app.add_option("--seed", o.seed, "Seed for sampled points and labels")->capture_default_str();
  app.add_option("--tolerance", o.tolerances, "Tolerance override id=value (repeatable)");
  app.add_option("--quad", o.quad, "Quadrature override key=value (repeatable)");
  app.add_option("--out", o.out, "Output directory")->capture_default_str();
  app.add_option("--format", o.format, "Report format: json, csv or both")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();
  app.add_flag("--strict", o.strict, "Treat numerical warnings as errors (exit 3)");
  app.add_option("--rho-grid", o.rho_grid, "Comma-separated rho values for the quantum suite");
  app.add_option("--config", o.config, "Config file of key=value lines");

  auto *classical = app.add_subcommand("verify-classical", "Dirac-bracket so(4,2) relations");
  auto *quantum = app.add_subcommand("verify-quantum", "Operator, ladder and g(u, rho) identities");
  auto *transform = app.add_subcommand("transform", "Spectral transform on the hyperboloid");
  for (auto *sub : {classical, quantum, transform}) sub->fallthrough();
  transform
      ->add_option("--function", o.functions,
                   "Test function, name or name(p1,...) (repeatable for roundtrip and plancherel)");
  transform->add_option("--params", o.params, "Parameters for a single --function name");
  transform
      ->add_option("--direction", o.direction,
                   "forward, inverse, roundtrip, plancherel, ggpath or refine")
      ->capture_default_str();
  transform->add_option("--input", o.input, "Spectral CSV for --direction inverse");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::config_error;
  }

  std::string command;
  for (int i = 0; i < argc; ++i) command += (i ? " " : "") + std::string(argv[i]);

  try {
    if (!o.config.empty()) apply_config_file(o.config, o, app, transform);
    const suites::Config cfg = build_config(o, command);

    suites::Report rep;
    std::vector<std::pair<std::string, std::string>> tables;
    if (classical->parsed()) {
      rep = suites::verify_classical(cfg);
    } else if (quantum->parsed()) {
      rep = suites::verify_quantum(cfg);
    } else {
      const suites::Direction dir = suites::parse_direction(o.direction);
      std::vector<transform::HyperFunction> fns;
      for (const auto &name : o.functions) fns.push_back(suites::function_from_spec(name));
      if (!o.params.empty()) {
        if (o.functions.size() != 1) throw ConfigError("--params needs exactly one --function");
        fns.front() = transform::builtin_function(o.functions.front(), o.params);
      }
      std::optional<transform::SpectralFunction> input;
      if (!o.input.empty()) {
        std::ifstream in(o.input);
        if (!in) throw ConfigError("cannot read spectral file '" + o.input + "'");
        input = transform::SpectralFunction::read_csv(in);
      }
      suites::TransformRun run = suites::run_transform(cfg, dir, fns, input);
      rep = std::move(run.report);
      tables = std::move(run.tables);
    }
    write_outputs(o, rep, tables);
    print_summary(rep);
    if (o.strict && !rep.warnings.empty()) return Exit::numerical_error;
    return rep.pass() ? Exit::ok : Exit::verification_failed;
  } catch (const ConfigError &e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return Exit::config_error;
  } catch (const TruncationError &e) {
    std::cerr << "truncation error: " << e.what() << " (suggested radius "
              << e.suggested_radius() << ")\n";
    return Exit::numerical_error;
  } catch (const Error &e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return Exit::numerical_error;
  } catch (const fs::filesystem_error &e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return Exit::config_error;
  }
}
