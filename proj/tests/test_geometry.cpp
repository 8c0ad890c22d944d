#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "sga/errors.hpp"
#include "sga/geometry.hpp"

using namespace sga;

TEST_SUITE("geometry") {

TEST_CASE("mink_dot") {
  CHECK(mink_dot({{0, 0, 0, 1}}, {{0, 0, 0, 1}}) == -1.0);
  CHECK(mink_dot({{0, 0, 2, 2}}, {{0, 0, 2, 2}}) == 0.0);
  const double s = std::sqrt(2.0);
  // 1*0 + 0*1 + 0 - s*s
  CHECK(mink_dot({{1, 0, 0, s}}, {{0, 1, 0, s}}) == doctest::Approx(-2.0));
}

TEST_CASE("lowering then raising is the identity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 1000; ++i) {
    FourVector v{{u(rng), u(rng), u(rng), u(rng)}};
    CHECK(v.lower().raise() == v);
    CHECK(v.lower()[3] == -v[3]);
  }
}

TEST_CASE("lift") {
  CHECK(lift({0, 0, 0}).x4() == 1.0);
  CHECK(lift({3, 0, 0}).x4() == std::sqrt(10.0));
  CHECK(lift({1, 2, 2}).x4() == doctest::Approx(std::sqrt(1.0 + 4 + 4 + 1)));
  CHECK_THROWS_AS(lift({NAN, 0, 0}), DomainError);
  CHECK_THROWS_AS(lift({0, INFINITY, 0}), DomainError);
}

TEST_CASE("lifted points lie on the sheet") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 2000; ++i) {
    const auto x = lift({u(rng), u(rng), u(rng)}).ambient();
    CHECK(std::abs(mink_dot(x, x) + 1.0) < 1e-12);
  }
}

TEST_CASE("cone vectors") {
  const ConeVector k(2.5, {1, 2, 2}, -1);
  const auto a = k.ambient();
  CHECK(std::abs(norm3(k.direction()) - 1.0) < 4 * 2.3e-16);
  CHECK(std::abs(mink_dot(a, a)) <= 1e-14 * 2.5 * 2.5);
  CHECK_THROWS_AS(ConeVector(0.0, {1, 0, 0}, 1), DomainError);
  CHECK_THROWS_AS(ConeVector(1.0, {0, 0, 0}, 1), DomainError);
  CHECK_THROWS_AS(ConeVector(1.0, {1, 0, 0}, 0), DomainError);
  const auto r = k.reflected().ambient();
  for (int i = 0; i < 4; ++i)
    CHECK(r[i] == doctest::Approx(-a[i]));
}

TEST_CASE("pairing examples") {
  CHECK(pairing(lift({0, 0, 0}), ConeVector(1.7, {0, 1, 0}, 1)) ==
        doctest::Approx(-1.7));
  CHECK(pairing(lift({0, 0, 0}), ConeVector(2.0, {0, 0, 1}, -1)) == 2.0);
  const double f = pairing(lift({3, 0, 0}), ConeVector(1.0, {1, 0, 0}, 1));
  CHECK(f == doctest::Approx(3.0 - std::sqrt(10.0)));
  CHECK(f < 0.0);
}

TEST_CASE("pairing sign lemma") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0, 3);
  std::uniform_real_distribution<double> w(0.01, 10);
  for (int i = 0; i < 10000; ++i) {
    const auto x = lift({g(rng), g(rng), g(rng)});
    const int sigma = (i % 2 == 0) ? 1 : -1;
    const ConeVector k(w(rng), {g(rng), g(rng), g(rng) + 1e-9}, sigma);
    const double f = pairing(x, k);
    CHECK(((f > 0) ? 1 : -1) == -sigma);
    CHECK(f == doctest::Approx(mink_dot(x.ambient(), k.ambient())));
  }
}

TEST_CASE("measure weights") {
  CHECK(measure_weight_H3(lift({0, 0, 0})) == 1.0);
  CHECK(measure_weight_H3(lift({3, 0, 0})) == doctest::Approx(1 / std::sqrt(10.0)));
  CHECK(measure_weight_cone(1.0, {0, 0, 1}) == 1.0);
  CHECK(measure_weight_cone(2.0, {0, 0, 1}) == 2.0);
  CHECK_THROWS_AS(measure_weight_cone(0.0, {0, 0, 1}), DomainError);

  // Volume of |x| <= R: 3-D midpoint sum of the weight against the radial
  // closed form 4 pi (R sqrt(R^2+1) - asinh R) / 2.
  const double R = 1.5;
  const int n = 120;
  const double h = 2 * R / n;
  double vol = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Vec3 s{-R + (i + 0.5) * h, -R + (j + 0.5) * h, -R + (k + 0.5) * h};
        if (norm3(s) <= R)
          vol += measure_weight_H3(lift(s)) * h * h * h;
      }
  const double exact = 2 * M_PI * (R * std::sqrt(R * R + 1) - std::asinh(R));
  CHECK(vol == doctest::Approx(exact).epsilon(5e-3));

  // Cone measure over omega in [0,1] and the unit sphere is 2 pi.
  double cone = 0.0;
  for (int i = 0; i < 1000; ++i)
    cone += measure_weight_cone((i + 0.5) / 1000, {0, 0, 1}) / 1000;
  CHECK(cone * 4 * M_PI == doctest::Approx(2 * M_PI).epsilon(1e-12));
}

TEST_CASE("sampling is deterministic") {
  const auto a = sample_hyper_points(100, 42);
  const auto b = sample_hyper_points(100, 42);
  CHECK(a == b);
  std::set<std::array<double, 3>> distinct;
  for (const auto &p : a) {
    distinct.insert(p.spatial());
    const auto x = p.ambient();
    CHECK(std::abs(mink_dot(x, x) + 1.0) < 1e-12);
  }
  CHECK(distinct.size() == 100);
  CHECK(sample_hyper_points(1, 5).size() == 1);
  CHECK(sample_hyper_points(10, 43) != sample_hyper_points(10, 42));
}

} // TEST_SUITE
