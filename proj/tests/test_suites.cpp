#include <doctest.h>

#include <cmath>

#include "sga/errors.hpp"
#include "sga/suites.hpp"

using namespace sga;
using namespace sga::suites;

TEST_SUITE("suites") {

TEST_CASE("report passes iff every row passes") {
  Report r;
  r.rows.push_back({"a", "x = x", 0.0, 1.0, true, "", 1, false});
  CHECK(r.pass());
  r.rows.push_back({"b", "y = y", 2.0, 1.0, false, "item", 1, false});
  CHECK_FALSE(r.pass());
  const auto j = r.to_json(false);
  CHECK(j["pass"] == false);
  CHECK_FALSE(j.contains("wall_seconds"));
  CHECK(r.to_json(true).contains("wall_seconds"));
}

TEST_CASE("CSV rows quote fields with commas") {
  Report r;
  r.rows.push_back({"commutators", "[P_a, X_b] = -i", 1e-16, 1e-10, true, "[P0, X0]", 3, false});
  r.rows.push_back({"rho_order", "order", 7.5, 2.0, true, "g", 1, true});
  const std::string csv = r.rows_csv();
  CHECK(csv.find("commutators,\"[P_a, X_b] = -i\",1e-16,1e-10,max,1,\"[P0, X0]\",3\n") !=
        std::string::npos);
  CHECK(csv.find("rho_order,order,7.5,2,min,1,g,1\n") != std::string::npos);
}

TEST_CASE("tolerance overrides are validated") {
  CHECK(default_tolerances("classical").at("structure") == 1e-8);
  CHECK(default_tolerances("transform").at("roundtrip") == 1e-2);
  CHECK_NOTHROW(validate_tolerances({{"structure", 1e-15}, {"roundtrip", 0.5}}));
  CHECK_THROWS_AS(validate_tolerances({{"struct", 1e-8}}), ConfigError);
  CHECK_THROWS_AS(validate_tolerances({{"structure", -1.0}}), ConfigError);
  CHECK_THROWS_AS(default_tolerances("gravity"), ConfigError);
}

TEST_CASE("quadrature fields by name") {
  QuadratureSpec q;
  set_quadrature_field(q, "rho_count", "161");
  set_quadrature_field(q, "radius", "4.5");
  CHECK(q.rho_count == 161);
  CHECK(q.radius == 4.5);
  CHECK_THROWS_AS(set_quadrature_field(q, "rho_count", "16.5"), ConfigError);
  CHECK_THROWS_AS(set_quadrature_field(q, "radius", "wide"), ConfigError);
  CHECK_THROWS_AS(set_quadrature_field(q, "lebedev", "5"), ConfigError);
}

TEST_CASE("function specs round-trip through names") {
  const auto f = function_from_spec("offcenter(0.5,-0.25,0,0.9)");
  CHECK(f.name == "offcenter(0.5,-0.25,0,0.9)");
  CHECK(function_from_spec(f.name).name == f.name);
  CHECK(function_from_spec("gaussian").name == "gaussian(1)");
  CHECK(function_from_spec("bump").name == "bump(0.3,0,0,1.2)");
  CHECK_THROWS_AS(function_from_spec("gaussian(1,2)"), ConfigError);
  CHECK_THROWS_AS(function_from_spec("gaussian(x)"), ConfigError);
  CHECK_THROWS_AS(function_from_spec("gaussian(1"), ConfigError);
}

TEST_CASE("directions by name") {
  for (auto d : {Direction::forward, Direction::inverse, Direction::roundtrip,
                 Direction::plancherel, Direction::ggpath, Direction::refine})
    CHECK(parse_direction(direction_name(d)) == d);
  CHECK_THROWS_AS(parse_direction("sideways"), ConfigError);
}

TEST_CASE("classical suite on a few points") {
  Config cfg;
  cfg.classical_points = 6;
  cfg.jacobi_points = 2;
  const Report a = verify_classical(cfg);
  CHECK(a.pass());
  CHECK(a.rows.size() == 9);
  CHECK(a.to_json(false).dump() == verify_classical(cfg).to_json(false).dump());
  cfg.tolerances["structure"] = 1e-15;
  const Report b = verify_classical(cfg);
  CHECK_FALSE(b.pass());
  cfg.seed = 7;
  cfg.tolerances.clear();
  CHECK(verify_classical(cfg).to_json(false)["seed"] == 7);
}

TEST_CASE("quantum suite restricted to a rho grid") {
  Config cfg;
  cfg.ladder_points = 8;
  cfg.rho_list = std::vector<double>{-3.0, -1.0, 0.5, 2.0};
  const Report r = verify_quantum(cfg);
  CHECK(r.pass());
  for (const PlotRow &p : r.plot) {
    const bool listed = p.rho == -3.0 || p.rho == -1.0 || p.rho == 0.5 || p.rho == 2.0;
    CHECK(listed);
  }
  CHECK(r.records.contains("prefactor_resolution"));
  CHECK(r.records["prefactor_resolution"]["printed_g_i_over_root"].get<double>() ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.records["prefactor_resolution"]["adopted_g_i_over_root"].get<double>() ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("rho zero is skipped by the spectral ladders") {
  Config cfg;
  cfg.ladder_points = 2;
  cfg.rho_list = std::vector<double>{0.0, 1.0};
  const Report r = verify_quantum(cfg);
  CHECK(r.pass());
  CHECK(r.records["ladder_skipped_rho_zero"] == 1);
}

TEST_CASE("inverse direction needs an input") {
  Config cfg;
  CHECK_THROWS_AS(run_transform(cfg, Direction::inverse, {}), ConfigError);
  CHECK_THROWS_AS(run_transform(cfg, Direction::forward,
                                {function_from_spec("gaussian"), function_from_spec("bump")}),
                  ConfigError);
}

} // TEST_SUITE
