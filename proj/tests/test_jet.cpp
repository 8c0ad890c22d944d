#include <doctest.h>

#include <cmath>
#include <complex>

#include "sga/jet.hpp"

using sga::Jet;
using J3 = Jet<double, 3>;
using C3 = Jet<std::complex<double>, 3>;

namespace {

double composite(double x, double y, double z) {
  return std::exp(x * y) * std::sqrt(1.0 + z * z) / (2.0 + x) +
         std::log(3.0 + y * z) * std::pow(1.5 + x, 0.3);
}

J3 composite(const J3 &x, const J3 &y, const J3 &z) {
  return exp(x * y) * sqrt(1.0 + z * z) / (2.0 + x) +
         log(3.0 + y * z) * pow(1.5 + x, 0.3);
}

} // namespace

TEST_SUITE("jet") {

TEST_CASE("variables carry unit gradients") {
  const J3 x = J3::variable(2, 0, 1.5);
  CHECK(x.value() == 1.5);
  CHECK(x.gradient(0) == 1.0);
  CHECK(x.gradient(1) == 0.0);
  CHECK(x.hessian(0, 0) == 0.0);
}

TEST_CASE("products reproduce polynomial derivatives exactly") {
  const J3 x = J3::variable(3, 0, 2.0);
  const J3 y = J3::variable(3, 1, -1.0);
  const J3 f = x * x * y; // x^2 y
  CHECK(f.value() == -4.0);
  CHECK(f.gradient(0) == -4.0); // 2xy
  CHECK(f.gradient(1) == 4.0);  // x^2
  CHECK(f.hessian(0, 0) == -2.0);
  CHECK(f.hessian(0, 1) == 4.0);
  CHECK(f.derivative({2, 1, 0}) == 2.0);
}

TEST_CASE("elementary functions match closed-form derivatives") {
  const double a = 0.7;
  const J3 x = J3::variable(2, 0, a);
  CHECK(exp(x).gradient(0) == doctest::Approx(std::exp(a)).epsilon(1e-15));
  CHECK(log(x).hessian(0, 0) == doctest::Approx(-1.0 / (a * a)).epsilon(1e-15));
  CHECK(sqrt(x).gradient(0) == doctest::Approx(0.5 / std::sqrt(a)).epsilon(1e-15));
  CHECK(pow(x, 2.5).hessian(0, 0) ==
        doctest::Approx(2.5 * 1.5 * std::pow(a, 0.5)).epsilon(1e-14));
  CHECK(reciprocal(x).gradient(0) == doctest::Approx(-1.0 / (a * a)).epsilon(1e-15));
}

TEST_CASE("composite derivatives agree with central finite differences") {
  const double p[3] = {0.3, -0.4, 0.8};
  const J3 x = J3::variable(2, 0, p[0]);
  const J3 y = J3::variable(2, 1, p[1]);
  const J3 z = J3::variable(2, 2, p[2]);
  const J3 f = composite(x, y, z);
  CHECK(f.value() == doctest::Approx(composite(p[0], p[1], p[2])).epsilon(1e-14));

  const double h = 1e-4;
  auto eval = [&](int i, double di, int j, double dj) {
    double q[3] = {p[0], p[1], p[2]};
    q[i] += di;
    q[j] += dj;
    return composite(q[0], q[1], q[2]);
  };
  for (int i = 0; i < 3; ++i) {
    const double fd = (eval(i, h, i, 0) - eval(i, -h, i, 0)) / (2 * h);
    CHECK(f.gradient(i) == doctest::Approx(fd).epsilon(1e-7));
    for (int j = 0; j < 3; ++j) {
      const double fd2 = (eval(i, h, j, h) - eval(i, h, j, -h) -
                          eval(i, -h, j, h) + eval(i, -h, j, -h)) /
                         (4 * h * h);
      CHECK(f.hessian(i, j) == doctest::Approx(fd2).epsilon(1e-5));
    }
  }
}

TEST_CASE("differentiate lowers the order and commutes with evaluation") {
  const J3 x = J3::variable(3, 0, 0.4);
  const J3 y = J3::variable(3, 1, 1.1);
  const J3 f = exp(x) * y * y;
  const J3 fx = f.differentiate(0);
  CHECK(fx.order() == 2);
  CHECK(fx.value() == doctest::Approx(f.gradient(0)));
  CHECK(fx.gradient(1) == doctest::Approx(f.hessian(0, 1)));
  CHECK(fx.differentiate(0).differentiate(1).value() ==
        doctest::Approx(f.derivative({2, 1, 0})));
}

TEST_CASE("mixed orders truncate to the lower one") {
  const J3 a = J3::variable(3, 0, 1.0);
  const J3 b = J3::variable(1, 0, 2.0);
  CHECK((a * b).order() == 1);
  CHECK((a + b).order() == 1);
}

TEST_CASE("order errors") {
  const J3 x = J3::variable(1, 0, 1.0);
  CHECK_THROWS_AS(x.hessian(0, 0), sga::OrderError);
  CHECK_THROWS_AS(J3(0).differentiate(0), sga::OrderError);
  CHECK_THROWS_AS(J3(sga::kMaxJetOrder + 1), sga::OrderError);
  CHECK_THROWS_AS(x.truncated(2), sga::OrderError);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(log(J3::variable(1, 0, -1.0)), sga::DomainError);
  CHECK_THROWS_AS(sqrt(J3::variable(1, 0, 0.0)), sga::DomainError);
  CHECK_THROWS_AS(reciprocal(J3(1, 0.0)), sga::DomainError);
}

TEST_CASE("complex power follows the principal branch") {
  using cd = std::complex<double>;
  const cd base{0.3, 0.0};
  const cd a{-1.0, 2.0};
  const C3 q = C3::variable(2, 0, base);
  const C3 f = pow(q, a);
  CHECK(std::abs(f.value() - std::pow(base, a)) < 1e-15);
  CHECK(std::abs(f.gradient(0) - a * std::pow(base, a - 1.0)) < 1e-13);
  CHECK(std::abs(f.hessian(0, 0) - a * (a - 1.0) * std::pow(base, a - 2.0)) <
        1e-11);
}

} // TEST_SUITE
