#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "sga/errors.hpp"
#include "sga/special.hpp"
#include "sga/transform.hpp"

using namespace sga;
using namespace sga::transform;
using std::numbers::pi;

namespace {


QuadratureSpec light() {
  QuadratureSpec q;
  q.sphere_theta = 12;
  q.sphere_phi = 24;
  q.radial_nodes = 60;
  q.polar_nodes = 32;
  q.azimuth_nodes = 16;
  q.rho_max = 16.0;
  q.rho_count = 161;
  return q;
}

// For f(|x|) the transform reduces to the spherical function sin(rho r) /
// (rho sinh r) in geodesic radius r, |x| = sinh r:
//   phi(rho) = 4 pi int_0^inf f(sinh r) sinh r sin(rho r) / rho dr.
double radial_oracle(double s, double rho) {
  const int n = 20000;
  const double b = std::asinh(6.0 * s); // same truncation as the transform
  const double h = b / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = i * h;
    const double kernel = rho == 0.0 ? r : std::sin(rho * r) / rho;
    const double v = std::exp(-std::sinh(r) * std::sinh(r) / (2 * s * s)) * std::sinh(r) * kernel;
    sum += (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0)) * v;
  }
  return 4 * pi * sum * h / 3.0;
}

// Horosphere integral in chart radius r: x.k = 1 fixes the polar angle, and
// the delta function contributes 1 / (omega r).
cplx horosphere_oracle(const HyperFunction &f, double omega, const Vec3 &n, double R) {
  const double r_min = std::abs(omega - 1.0 / omega) / 2.0;
  const Rule1D rr = gauss_legendre(400, r_min, R);
  const Vec3 e1 = std::abs(n[0]) < 0.9 ? Vec3{0.0, -n[2], n[1]} : Vec3{n[2], 0.0, -n[0]};
  const double l = norm3(e1);
  const Vec3 u{e1[0] / l, e1[1] / l, e1[2] / l};
  const Vec3 v{n[1] * u[2] - n[2] * u[1], n[2] * u[0] - n[0] * u[2], n[0] * u[1] - n[1] * u[0]};
  cplx sum{0.0, 0.0};
  const int na = 64;
  for (std::size_t i = 0; i < rr.nodes.size(); ++i) {
    const double r = rr.nodes[i];
    const double x4 = std::sqrt(1 + r * r);
    const double c = std::clamp((1.0 / omega - x4) / r, -1.0, 1.0);
    const double st = std::sqrt(1 - c * c);
    cplx ring{0.0, 0.0};
    for (int k = 0; k < na; ++k) {
      const double a = 2 * pi * k / na;
      Vec3 x;
      for (int d = 0; d < 3; ++d)
        x[d] = r * (c * n[d] + st * (std::cos(a) * u[d] + std::sin(a) * v[d]));
      ring += f(x);
    }
    sum += rr.weights[i] * r / (omega * x4) * ring * (2 * pi / na);
  }
  return sum;
}

} // namespace

TEST_SUITE("transform") {

TEST_CASE("forward transform of a radial Gaussian") {
  const HyperFunction f = radial_gaussian(1.0);
  const QuadratureSpec q = light();
  for (double rho : {0.0, 0.5, 3.0, 8.0}) {
    const cplx v = forward_at(f, ConeVector(1.0, {0.0, 0.0, 1.0}, -1), rho, q);
    CHECK(std::abs(v - radial_oracle(1.0, rho)) < 1e-8);
  }
  const SpectralFunction phi = forward_transform(f, q);
  const std::size_t zero = phi.rho_count() / 2;
  REQUIRE(phi.rho[zero] == 0.0);
  for (std::size_t j = 1; j < phi.directions(); ++j)
    CHECK(std::abs(phi.at(j, zero) - phi.at(0, zero)) < 1e-10 * std::abs(phi.at(0, zero)));
}

TEST_CASE("forward transform homogeneity and orientation") {
  const HyperFunction f = offcenter_gaussian({0.5, -0.2, 0.1}, 0.8);
  const QuadratureSpec q = light();
  const ConeVector k(1.0, {0.6, 0.0, 0.8}, -1);
  for (double rho : {-2.0, 0.0, 1.3}) {
    const cplx base = forward_at(f, k, rho, q);
    for (double t : {0.3, 2.5}) {
      const cplx scaled = forward_at(f, k.scaled(t), rho, q);
      const cplx factor = std::exp(cplx(-1.0, rho) * std::log(t));
      CHECK(std::abs(scaled - factor * base) < 1e-12 * std::abs(scaled));
    }
    // |x.k| is unchanged by k -> -k.
    CHECK(std::abs(forward_at(f, k.reflected(), rho, q) - base) < 1e-14 * std::abs(base));
  }
}

TEST_CASE("forward transform self-convergence") {
  const HyperFunction f = compact_bump({0.4, 0.2, 0.0}, 1.0);
  const QuadratureSpec q = light();
  QuadratureSpec fine = q;
  fine.radial_nodes *= 2;
  fine.polar_nodes *= 2;
  const ConeVector k(1.0, {0.0, 0.6, 0.8}, -1);
  for (double rho : {-4.0, 0.0, 2.5})
    CHECK(std::abs(forward_at(f, k, rho, q) - forward_at(f, k, rho, fine)) < 1e-6);
}

TEST_CASE("real sources have conjugate-symmetric spectra") {
  const SpectralFunction phi = forward_transform(offcenter_gaussian({0.3, 0.0, 0.2}, 0.7), light());
  const std::size_t m_count = phi.rho_count();
  double worst = 0.0;
  for (std::size_t j = 0; j < phi.directions(); ++j)
    for (std::size_t m = 0; m < m_count; ++m)
      worst = std::max(worst, std::abs(phi.at(j, m_count - 1 - m) - std::conj(phi.at(j, m))));
  CHECK(worst < 1e-10);
  const SpectralFunction mod = forward_transform(modulated_gaussian(0.8, {1.0, 0.0, 0.0}), light());
  CHECK_FALSE(mod.real_source);
}

TEST_CASE("truncation radius") {
  QuadratureSpec q = light();
  const HyperFunction f = radial_gaussian(1.0);
  CHECK(truncation_radius(f, q) == doctest::Approx(6.0));
  q.radius = 2.0;
  try {
    truncation_radius(f, q);
    FAIL("expected a truncation error");
  } catch (const TruncationError &e) {
    CHECK(e.suggested_radius() == doctest::Approx(6.0));
  }
  q.radius = 5.0;
  CHECK(truncation_radius(f, q) == 5.0);
  q.radius = 1.0;
  CHECK_THROWS_AS(forward_transform(compact_bump({0.5, 0, 0}, 1.0), q), TruncationError);
}

TEST_CASE("horosphere integrals") {
  const QuadratureSpec q = light();
  const HyperFunction radial = radial_gaussian(0.9);
  for (double omega : {0.4, 1.0, 2.2}) {
    const cplx h0 = gelfand_graev(radial, ConeVector(omega, {0, 0, 1}, -1), q);
    for (const Vec3 &n : {Vec3{1, 0, 0}, Vec3{0.6, 0.8, 0}, Vec3{0, -0.6, 0.8}})
      CHECK(std::abs(gelfand_graev(radial, ConeVector(omega, n, -1), q) - h0) <
            1e-12 * std::abs(h0));
  }
  const HyperFunction f = offcenter_gaussian({0.6, 0.3, -0.2}, 0.7);
  const Vec3 n{0.0, 0.6, 0.8};
  const double R = truncation_radius(f, q);
  for (double omega : {0.3, 0.8, 1.0, 1.7, 3.0}) {
    const cplx direct = gelfand_graev(f, ConeVector(omega, n, -1), q);
    CHECK(std::abs(direct - horosphere_oracle(f, omega, n, R)) < 1e-6);
  }
  Diagnostics diag;
  CHECK(gelfand_graev(compact_bump({0, 0, 0}, 0.5), ConeVector(50.0, n, -1), q, &diag) ==
        cplx(0.0, 0.0));
  CHECK(diag.warnings.size() == 1);
  CHECK_THROWS_AS(gelfand_graev(f, ConeVector(1.0, n, 1), q), DomainError);
}

TEST_CASE("Mellin transform along a ray") {
  const QuadratureSpec q = light();
  const Vec3 n{0, 0, 1};
  const ConeFunction decaying{[](double t, const Vec3 &) { return cplx(std::exp(-t)); }, {}};
  for (double rho : {-3.0, 0.0, 0.7, 5.0})
    CHECK(std::abs(mellin(decaying, n, rho, q) - special::gamma(cplx(1.0, -rho))) < 1e-12);

  const auto grid = q.rho_grid();
  const auto spectrum = mellin_spectrum(decaying, n, grid, q);
  CHECK(std::abs(mellin_inverse(grid, spectrum, 1.0) - std::exp(-1.0)) < 1e-4);

  // Homogeneous of degree -1 + i rho0: on a log window [-W, W] the transform
  // is 2 sin((rho0 - rho) W) / (rho0 - rho), peaking at rho0 with height 2W.
  const double rho0 = 1.5, W = 10.0;
  const ConeFunction homogeneous{
      [rho0](double t, const Vec3 &) { return std::exp(cplx(-1.0, rho0) * std::log(t)); }, W};
  CHECK(std::abs(mellin(homogeneous, n, rho0, q) - 2 * W) < 1e-9);
  for (double d : {0.05, 0.3, 1.1}) {
    const cplx v = mellin(homogeneous, n, rho0 - d, q);
    CHECK(std::abs(v - 2 * std::sin(d * W) / d) < 1e-3);
    CHECK(std::abs(v) < 2 * W);
  }

  const ConeFunction flat{[](double, const Vec3 &) { return cplx(1.0); }, {}};
  CHECK_THROWS_AS(mellin(flat, n, 0.0, q), QuadratureError);
}

TEST_CASE("Mellin of horosphere integrals reproduces the forward transform") {
  const QuadratureSpec q = light();
  const HyperFunction f = compact_bump({0.3, 0.0, 0.0}, 1.2);
  const ConeFunction h = gelfand_graev_function(f, q);
  const std::vector<double> rho{-6.0, -1.0, 0.0, 0.5, 2.0, 7.0};
  for (const Vec3 &n : {Vec3{0, 0.6, 0.8}, Vec3{1, 0, 0}, Vec3{-0.48, 0.6, 0.64}}) {
    const auto m = mellin_spectrum(h, n, rho, q);
    for (std::size_t i = 0; i < rho.size(); ++i)
      CHECK(std::abs(m[i] - forward_at(f, ConeVector(1.0, n, -1), rho[i], q)) < 1e-4);
  }
}

TEST_CASE("spectral files round-trip bit-exactly") {
  QuadratureSpec q = light();
  q.rho_count = 41;
  const HyperFunction f = modulated_gaussian(0.8, {1.0, 0.5, 0.0});
  const SpectralFunction phi = forward_transform(f, q);
  std::stringstream buf;
  phi.write_csv(buf);
  const SpectralFunction back = SpectralFunction::read_csv(buf);
  CHECK(back.sphere.id == phi.sphere.id);
  CHECK(back.sphere.exactness == phi.sphere.exactness);
  CHECK(back.sphere.nodes == phi.sphere.nodes);
  CHECK(back.sphere.weights == phi.sphere.weights);
  CHECK(back.rho == phi.rho);
  CHECK(back.values == phi.values);
  CHECK(back.real_source == phi.real_source);
  CHECK(back.source == phi.source);
  const auto xs = sample_hyper_points(5, 2, 0.8);
  CHECK(inverse_transform(back, xs) == inverse_transform(phi, xs));

  std::stringstream broken("# sga spectral function v1\nj,m,n_x\n");
  CHECK_THROWS_AS(SpectralFunction::read_csv(broken), ConfigError);
}

TEST_CASE("inverse transform is linear") {
  const QuadratureSpec q = light();
  const SpectralFunction a = forward_transform(radial_gaussian(0.8), q);
  const SpectralFunction b = forward_transform(modulated_gaussian(0.7, {0.0, 1.0, 0.0}), q);
  const cplx ca{0.7, -1.2}, cb{-2.0, 0.4};
  const SpectralFunction c = a.linear_combination(ca, b, cb);
  for (const auto &x : sample_hyper_points(6, 4, 1.0)) {
    const cplx lhs = inverse_transform(c, x);
    const cplx rhs = ca * inverse_transform(a, x) + cb * inverse_transform(b, x);
    CHECK(std::abs(lhs - rhs) < 1e-13 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("round trip, norm identity and rho refinement") {
  const QuadratureSpec q = light();
  const HyperFunction f = radial_gaussian(1.0);
  const SpectralFunction phi = forward_transform(f, q);
  const RoundTrip rt = round_trip(f, phi, q);
  CHECK(rt.relative_error < 3e-2);
  CHECK(rt.diagnostics.warnings.empty());
  const Plancherel p = plancherel_check(f, phi, q);
  CHECK(p.ratio == doctest::Approx(1.0).epsilon(1e-3));
  const Plancherel p2 = plancherel_check(f.scaled(2.0), q);
  CHECK(p2.lhs == doctest::Approx(4 * p.lhs).epsilon(1e-12));
  CHECK(p2.rhs == doctest::Approx(4 * p.rhs).epsilon(1e-12));
  CHECK(p2.ratio == doctest::Approx(p.ratio).epsilon(1e-12));

  const RefinementStudy study = rho_refinement_study(f, q, 17);
  CHECK(study.coarse_spacing == doctest::Approx(2.0));
  CHECK(study.fine_error < study.coarse_error);
  CHECK(study.observed_order >= 2.0);
  CHECK_THROWS_AS(rho_refinement_study(f, q, 16), ConfigError);
}

TEST_CASE("window truncation is reported") {
  QuadratureSpec q = light();
  q.rho_max = 3.0;
  q.rho_count = 31;
  const RoundTrip rt = round_trip(radial_gaussian(0.5), q);
  CHECK(rt.tail_mass > q.tail_tolerance);
  CHECK(rt.diagnostics.warnings.size() == 1);
}

TEST_CASE("double inversion of horosphere integrals") {
  const QuadratureSpec q = light();
  const HyperFunction f = compact_bump({0.3, 0.0, 0.0}, 1.2);
  const ConeFunction h = gelfand_graev_function(f, q);
  const auto xs = sample_hyper_points(10, 3, 0.5);
  const auto rec = double_inverse_gg(h, xs, q);
  const auto direct = inverse_transform(forward_transform(f, q), xs);
  double peak = 0.0, err = 0.0, gap = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    peak = std::max(peak, std::abs(f(xs[i])));
    err = std::max(err, std::abs(rec[i] - f(xs[i])));
    gap = std::max(gap, std::abs(rec[i] - direct[i]));
  }
  CHECK(err / peak < 5e-2);
  CHECK(gap / peak < 1e-4);

  const ConeFunction zero = gelfand_graev_function(zero_function(), q);
  CHECK(double_inverse_gg(zero, lift({0.2, 0.1, 0.0}), q) == cplx(0.0, 0.0));
}

TEST_CASE("named test functions") {
  CHECK(builtin_function("gaussian", {0.5}).scale == 0.5);
  CHECK(builtin_function("bump").decay == DecayClass::compact);
  CHECK_FALSE(builtin_function("modulated").real);
  CHECK(standard_suite().size() == 5);
  CHECK_THROWS_AS(builtin_function("sinc"), ConfigError);
  CHECK_THROWS_AS(builtin_function("gaussian", {1.0, 2.0}), ConfigError);
  const HyperFunction b = compact_bump({0, 0, 0}, 1.0);
  CHECK(b(Vec3{0, 0, 0}) == cplx(1.0, 0.0));
  CHECK(b(Vec3{1.0, 0, 0}) == cplx(0.0, 0.0));
}

} // TEST_SUITE
