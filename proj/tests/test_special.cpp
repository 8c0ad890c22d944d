#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sga/errors.hpp"
#include "sga/special.hpp"

using namespace sga;
using namespace sga::special;
using std::numbers::pi;

namespace {

const cplx I{0.0, 1.0};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace

TEST_SUITE("special") {

TEST_CASE("log_gamma values") {
  CHECK(std::abs(log_gamma(1.0)) < 1e-15);
  CHECK(std::abs(log_gamma(2.0)) < 1e-15);
  CHECK(std::abs(log_gamma(5.0) - std::log(24.0)) < 1e-14);
  // Reference values at 30 significant digits.
  CHECK(rel(log_gamma({0.5, 2.0}), {-2.2226558640532582191, -0.59253698197703458893}) < 1e-13);
  CHECK(rel(log_gamma({-3.7, 0.2}), {-1.6364330925624564172, -12.663282679635771969}) < 1e-13);
  CHECK(rel(log_gamma({-20.5, -5.0}), {-57.132380490858463923, 50.703927930315792033}) < 1e-13);
  CHECK(rel(log_gamma({30.0, -40.0}), {49.232808494070298819, -143.83479582266482462}) < 1e-13);
  CHECK(rel(log_gamma(1e-3), 6.9071788853838536617) < 1e-14);
}

TEST_CASE("log_gamma matches the reflection formula") {
  for (cplx z : {cplx(0.5, 2.0), cplx(0.3, -1.1), cplx(-2.4, 0.7), cplx(3.2, 4.5)}) {
    const cplx lhs = gamma(z) * gamma(1.0 - z);
    const cplx rhs = pi / std::sin(pi * z);
    CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-12);
  }
}

TEST_CASE("log_gamma recurrence and conjugation on a grid") {
  int count = 0;
  for (int a = 0; a < 40; ++a)
    for (int b = 0; b < 25; ++b) {
      const cplx z(-10.0 + 20.0 * (a + 0.37) / 40.0, -10.0 + 20.0 * (b + 0.41) / 25.0);
      const cplx step = log_gamma(z + 1.0) - log_gamma(z) - std::log(z);
      // Equal modulo 2 pi i on the standard branch; exact off the negative axis.
      const double k = std::round(step.imag() / (2 * pi));
      CHECK(std::abs(step - cplx(0.0, 2 * pi * k)) < 1e-12);
      CHECK(std::abs(log_gamma(std::conj(z)) - std::conj(log_gamma(z))) < 1e-12);
      ++count;
    }
  CHECK(count == 1000);
}

TEST_CASE("log_gamma poles") {
  CHECK_THROWS_AS(log_gamma(0.0), PoleError);
  CHECK_THROWS_AS(log_gamma(-3.0), PoleError);
  CHECK_NOTHROW(log_gamma(cplx(-3.0, 1e-9)));
}

TEST_CASE("spectral square root") {
  CHECK(std::abs(spectral_sqrt(4.0) - 2.0) < 1e-15);
  CHECK(std::abs(spectral_sqrt(-4.0) - cplx(0, -2)) < 1e-15);
  CHECK(std::abs(spectral_sqrt({-4.0, 1e-12}) - spectral_sqrt({-4.0, -1e-12})) < 1e-11);
  for (cplx z : {cplx(1, 2), cplx(3, -1), cplx(0.1, -5)})
    CHECK(std::abs(spectral_sqrt(z) - std::sqrt(z)) < 1e-14);
  // Principal sqrt(rho (rho - i)) for rho > 0 and its negative for rho < 0.
  CHECK(std::abs(2.0 * spectral_root(1.9) -
                 cplx(3.9215999299216992238, -0.96899226537773644566)) < 1e-13);
  CHECK(std::abs(2.0 * spectral_root(-1.2) +
                 cplx(2.5746688805427376112, 0.93215870131388791415)) < 1e-13);
}

TEST_CASE("g_of_h values") {
  CHECK(std::abs(g_of_h(0.0) - 0.675978240067284729) < 1e-14);
  CHECK(std::abs(g_of_h(0.0) - 2.0 * gamma(cplx(0.75)) / gamma(cplx(0.25))) < 1e-14);
  CHECK(std::abs(g_of_h(1.3) - 1.5402880133672721784) < 1e-13);
  CHECK(std::abs(g_of_h(-7.25) - 3.8033053819400999244) < 1e-13);
  CHECK(std::abs(g_of_h(9.9) - 4.4468639793139006187) < 1e-13);
  // Off the real axis: reference from (2h + i) / g(h).
  CHECK(std::abs(g_of_h({1.3, 1.0}) - cplx(1.6879959964864351132, 0.64922922941785963675)) < 1e-12);
  CHECK(std::abs(g_of_h({-0.5, 1.0}) - cplx(-1.088146796311024601, 1.088146796311024601)) < 1e-12);
  CHECK(std::abs(g_of_h({-7.25, 1.0}) - cplx(-3.812473242052264799, 0.26292918910705274476)) < 1e-12);
}

TEST_CASE("g_of_h functional equation and positivity") {
  for (int k = 0; k <= 200; ++k) {
    const double h = -10.0 + 0.1 * k;
    const cplx g = g_of_h(h);
    CHECK(std::abs(g.imag()) < 1e-13);
    CHECK(g.real() > 0.0);
    CHECK(std::abs(g * g_of_h(cplx(h, 1.0)) - cplx(2 * h, 1.0)) < 1e-10);
    // Same relation one step down, with h - i and h.
    CHECK(std::abs(g_of_h(cplx(h, -1.0)) * g - cplx(2 * h, -1.0)) < 1e-10);
  }
  CHECK(std::abs(g_of_h(1.3) * g_of_h(cplx(1.3, 1.0)) - cplx(2.6, 1.0)) < 1e-12);
}

TEST_CASE("g_of_h branch points") {
  CHECK_THROWS_AS(g_of_h(cplx(0.0, 0.5)), PoleError);
  CHECK_THROWS_AS(g_of_h(cplx(0.0, -1.5)), PoleError);
  CHECK_THROWS_AS(g_of_h(cplx(-1.0, 2.5)), PoleError);
}

TEST_CASE("ladder coefficient squares") {
  struct Ref {
    double u, rho;
    cplx square;
  };
  const Ref refs[] = {
      {0.7, 1.9, {-0.055439034514225966342, -0.9979363065168722402}},
      {-2.3, 0.4, {0.38610571375433211551, -1.0173377278150357802}},
      {3.1, -1.2, {-182720641.97210345299, 222590190.37634153722}},
  };
  for (const auto &r : refs) {
    const cplx g = ladder_coefficient(r.u, r.rho);
    CHECK(std::abs(g * g - r.square) / std::abs(r.square) < 1e-12);
  }
}

TEST_CASE("ladder boundary values") {
  for (double rho : {-4.0, -1.2, -0.3, 0.2, 1.9, 7.5}) {
    CHECK(ladder_coefficient(0.0, rho) == cplx(1.0, 0.0));
    const cplx gi = ladder_coefficient(I, rho);
    CHECK(std::abs(gi - 2.0 * spectral_root(rho)) < 1e-10 * std::abs(gi));
    const cplx printed = ladder_coefficient(I, rho, LadderPrefactor::two);
    CHECK(std::abs(printed - std::sqrt(2.0) * spectral_root(rho)) < 1e-10 * std::abs(gi));
  }
  // Principal branch agreement for positive rho.
  CHECK(std::abs(ladder_coefficient(I, 1.9) -
                 cplx(3.9215999299216992238, -0.96899226537773644566)) < 1e-10);
}

TEST_CASE("ladder cocycle") {
  const cplx g1 = ladder_coefficient(0.7, 1.9);
  const cplx g2 = ladder_coefficient(-0.3, 1.9 - 0.7);
  CHECK(std::abs(g1 * g2 - ladder_coefficient(0.4, 1.9)) < 1e-12);

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  int n = 0;
  while (n < 1000) {
    const double u = d(rng), v = d(rng), rho = d(rng);
    if (std::abs(rho) < 0.1 || std::abs(rho - u) < 0.1 || std::abs(rho - u - v) < 0.1)
      continue;
    const cplx lhs = ladder_coefficient(u, rho) * ladder_coefficient(v, rho - u);
    const cplx rhs = ladder_coefficient(u + v, rho);
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));
    ++n;
  }
}

TEST_CASE("ladder modulus from the gamma ratio") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    const double u = d(rng), rho = d(rng);
    if (std::abs(rho) < 0.1 || std::abs(rho - u) < 0.1)
      continue;
    const double ratio =
        std::abs(gamma(-I * rho) * gamma(1.0 - I * rho) /
                 (gamma(-I * (rho - u)) * gamma(1.0 - I * (rho - u))));
    const double prefactor = std::exp(pi * u); // |4^{-iu}| = 1
    const double mod2 = std::norm(ladder_coefficient(u, rho));
    CHECK(mod2 == doctest::Approx(ratio * prefactor).epsilon(1e-11));
  }
}

TEST_CASE("ladder coefficient is continuous in u") {
  const double rho = 1.3;
  cplx prev = ladder_coefficient(0.0, rho);
  for (int k = 1; k <= 100; ++k) {
    const double u = -1.0 * k / 100.0;
    const cplx cur = ladder_coefficient(u, rho);
    CHECK(std::abs(cur - prev) < 0.05 * std::max(1.0, std::abs(prev)));
    prev = cur;
  }
}

TEST_CASE("ladder pole proximity") {
  CHECK_THROWS_AS(ladder_coefficient(0.5, 1e-7), NearPoleError);
  CHECK_THROWS_AS(ladder_coefficient(0.5, 0.5 + 1e-8), NearPoleError);
  CHECK_THROWS_AS(ladder_coefficient(0.5, 0.0), PoleError);
  CHECK(ladder_coefficient(0.0, 0.0) == cplx(1.0, 0.0));
  CHECK(ladder_coefficient(0.0, cplx(0.0, -1.0)) == cplx(1.0, 0.0));
  CHECK_NOTHROW(ladder_coefficient(0.5, 0.5 + 1e-5));
}

TEST_CASE("Mellin-Barnes power identity") {
  CHECK(verify_mellin_barnes_power(0.8, 1.0) < 1e-6);
  CHECK(verify_mellin_barnes_power(1.0, 2.0) < 1e-6);
  CHECK(std::abs(mellin_barnes_integral(1.0, 2.0) - std::exp(cplx(0, -std::log(2.0)))) < 1e-6);
  CHECK(verify_mellin_barnes_power(-2.0, 0.5) < 1e-6);
  CHECK_THROWS_AS(verify_mellin_barnes_power(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(verify_mellin_barnes_power(1.0, -1.0), DomainError);
}

} // TEST_SUITE
