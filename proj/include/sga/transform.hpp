#pragma once

// Analysis and synthesis on the hyperboloid with hyperbolic plane waves.
//
// Directions live on the past-cone section k = (n, -1), so the pairing
// q(x, n) = x.n + x4 is positive and every power below has a positive base.
//
//   forward:   phi(n, rho) = int Dx f(x) q^{-1+i rho},      Dx = d^3x / x4
//   inverse:   f(x) = 1/(16 pi^3) int d rho rho^2 int dn phi(n, rho) q^{-1-i rho}
//   horosphere: h(k) = int Dx f(x) delta(x.k - 1)
//   Mellin:    phi(n, rho) = int_0^inf dt h(t k0) t^{-i rho}

#include <complex>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sga/geometry.hpp"
#include "sga/quadrature.hpp"

namespace sga::transform {

using cplx = std::complex<double>;

enum class DecayClass { gaussian_damped, compact, generic };

// A function on the hyperboloid with enough decay information to choose a
// truncation radius. Gaussian-damped: |f| <= amplitude exp(-|x - c|^2 / 2s^2)
// with s = scale. Compact: supported in |x - c| <= scale.
struct HyperFunction {
  std::string name;
  std::function<cplx(const Vec3 &)> eval;
  DecayClass decay = DecayClass::generic;
  double amplitude = 1.0;
  double scale = 1.0;
  Vec3 center{0.0, 0.0, 0.0};
  bool real = false;

  cplx operator()(const Vec3 &x) const { return eval(x); }
  cplx operator()(const HyperPoint &x) const { return eval(x.spatial()); }

  // Radius past which the function is below 1e-8 of its amplitude.
  double natural_radius() const;
  HyperFunction scaled(cplx c) const;
};

HyperFunction radial_gaussian(double s);
HyperFunction offcenter_gaussian(const Vec3 &center, double s);
// exp(-|x|^2 / 2s^2 + i a.x)
HyperFunction modulated_gaussian(double s, const Vec3 &wave);
// exp(1 - 1 / (1 - |x - c|^2 / a^2)) inside the ball, 0 outside.
HyperFunction compact_bump(const Vec3 &center, double a);
HyperFunction zero_function();

// Named construction for the command line: gaussian(s), offcenter(cx,cy,cz,s),
// modulated(s,ax,ay,az), bump(cx,cy,cz,a), zero. Missing parameters take the
// documented defaults; throws ConfigError for unknown names.
HyperFunction builtin_function(const std::string &name,
                               const std::vector<double> &params = {});

// The five functions used for norm-identity and round-trip suites.
std::vector<HyperFunction> standard_suite();

struct SpectralFunction {
  SphereRule sphere;
  std::vector<double> rho;
  std::vector<cplx> values; // values[j * rho.size() + m]
  std::string source;
  bool real_source = false;

  std::size_t directions() const { return sphere.nodes.size(); }
  std::size_t rho_count() const { return rho.size(); }
  cplx &at(std::size_t j, std::size_t m) { return values[j * rho.size() + m]; }
  cplx at(std::size_t j, std::size_t m) const { return values[j * rho.size() + m]; }

  // Trapezoid weights of the rho grid.
  std::vector<double> rho_weights() const;

  // Fraction of int rho^2 |phi|^2 carried by |rho| > 0.9 rho_max.
  double tail_mass() const;

  SpectralFunction linear_combination(cplx a, const SpectralFunction &other,
                                      cplx b) const;

  // CSV with a '#' header carrying the sphere rule id, counts, window and
  // conventions, then rows j,m,n_x,n_y,n_z,weight,rho,re_phi,im_phi. Doubles
  // use the shortest round-trip form, so reading back is bit-exact.
  void write_csv(std::ostream &out) const;
  static SpectralFunction read_csv(std::istream &in);
};

struct Diagnostics {
  std::vector<std::string> warnings;
};

// Truncation radius for f under quad (quad.radius if set). Throws
// TruncationError when quad.radius cuts off more than 1e-3 of the amplitude.
double truncation_radius(const HyperFunction &f, const QuadratureSpec &quad);

SpectralFunction forward_transform(const HyperFunction &f, const QuadratureSpec &quad);

// int Dx f (x.k)^{-1+i rho} for a single past-cone k of any scale.
cplx forward_at(const HyperFunction &f, const ConeVector &k, cplx rho,
                const QuadratureSpec &quad);

// Function on the cone with an optional bound on |log omega| outside which it
// vanishes.
struct ConeFunction {
  std::function<cplx(double omega, const Vec3 &n)> eval;
  std::optional<double> log_support;

  cplx operator()(double omega, const Vec3 &n) const { return eval(omega, n); }
};

// h(k) for k = omega (n, -1). Throws DomainError for sigma = +1. Returns 0
// and records a warning when the horosphere x.k = 1 misses the support.
cplx gelfand_graev(const HyperFunction &f, const ConeVector &k,
                   const QuadratureSpec &quad, Diagnostics *diag = nullptr);
ConeFunction gelfand_graev_function(const HyperFunction &f, const QuadratureSpec &quad);

// int_0^inf dt h(t k0) t^{-i rho}, k0 = (n, -1), by the trapezoid rule in
// log t. Without a support bound the log window grows until the integrand
// has decayed; a ray that does not decay raises QuadratureError.
cplx mellin(const ConeFunction &h, const Vec3 &n, double rho, const QuadratureSpec &quad);
std::vector<cplx> mellin_spectrum(const ConeFunction &h, const Vec3 &n,
                                  const std::vector<double> &rho,
                                  const QuadratureSpec &quad);

// (1/2 pi) int d rho M(rho) t^{i rho - 1} on the given grid.
cplx mellin_inverse(const std::vector<double> &rho, const std::vector<cplx> &values,
                    double t);

cplx inverse_transform(const SpectralFunction &phi, const HyperPoint &x);
std::vector<cplx> inverse_transform(const SpectralFunction &phi,
                                    const std::vector<HyperPoint> &xs);

struct RoundTrip {
  double relative_error = 0.0; // L2(Dx) over the evaluation grid
  double tail_mass = 0.0;
  Diagnostics diagnostics;
};

// Evaluation grid of quad over radius R with its Dx weights.
std::vector<VolumeNode> evaluation_grid(double radius, const QuadratureSpec &quad);

RoundTrip round_trip(const HyperFunction &f, const QuadratureSpec &quad);
RoundTrip round_trip(const HyperFunction &f, const SpectralFunction &phi,
                     const QuadratureSpec &quad);

struct Plancherel {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0; // lhs / rhs
  Diagnostics diagnostics;
};

Plancherel plancherel_check(const HyperFunction &f, const QuadratureSpec &quad);
Plancherel plancherel_check(const HyperFunction &f, const SpectralFunction &phi,
                            const QuadratureSpec &quad);

struct RefinementStudy {
  double coarse_spacing = 0.0;
  double coarse_error = 0.0;
  double fine_error = 0.0;
  double observed_order = 0.0; // log2(coarse / fine)
};

// Round-trip error on a rho grid of coarse_count points and on its 2x
// refinement over the same window.
RefinementStudy rho_refinement_study(const HyperFunction &f, const QuadratureSpec &quad,
                                     int coarse_count);

// Mellin spectrum of h along every direction of quad's sphere.
SpectralFunction cone_spectrum(const ConeFunction &h, const QuadratureSpec &quad);

// f(x) from its horosphere integrals, through the Mellin spectrum along each
// ray and the rho^2-weighted synthesis.
cplx double_inverse_gg(const ConeFunction &h, const HyperPoint &x,
                       const QuadratureSpec &quad);
std::vector<cplx> double_inverse_gg(const ConeFunction &h,
                                    const std::vector<HyperPoint> &xs,
                                    const QuadratureSpec &quad);

} // namespace sga::transform
