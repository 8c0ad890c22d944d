#pragma once

// Fixed quadrature rules: Gauss-Legendre on an interval, a Gauss-Legendre x
// uniform product rule on the unit sphere, and the settings bundle used by
// the transform and hermiticity checks.

#include <string>
#include <vector>

#include "sga/geometry.hpp"

namespace sga {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule mapped to [a, b].
Rule1D gauss_legendre(int n, double a, double b);

struct SphereRule {
  std::vector<Vec3> nodes;
  std::vector<double> weights; // sum to 4 pi
  int exactness = 0;           // highest spherical-harmonic degree integrated exactly
  std::string id;
};

// Gauss-Legendre in cos(theta) times the uniform rule in phi. Exact for
// spherical harmonics of degree <= min(2 n_theta - 1, n_phi - 1).
SphereRule sphere_product_rule(int n_theta, int n_phi);

struct QuadratureSpec {
  // Spectral sphere (directions n of the transform).
  int sphere_theta = 20;
  int sphere_phi = 40;
  // Volume rule over the ball |x| <= radius, oriented along each n: radial
  // Gauss-Legendre, Gauss-Legendre in log(x.k) for the polar angle, uniform
  // azimuth.
  int radial_nodes = 200;
  int polar_nodes = 48;
  int azimuth_nodes = 24;
  double radius = 0.0; // 0: choose from the function's decay
  double rho_max = 24.0;
  int rho_count = 481;
  // Grid for reconstruction errors and norms: radial x sphere product.
  int eval_radial = 24;
  int eval_theta = 8;
  int eval_phi = 16;
  // Trapezoid step in log t for Mellin integrals along cone rays.
  double mellin_step = 0.02;
  // Fraction of the rho^2-weighted spectral mass allowed in the outer tenth
  // of the rho window before a truncation warning.
  double tail_tolerance = 1e-4;

  std::vector<double> rho_grid() const; // uniform, symmetric, includes 0 for odd counts
  double rho_spacing() const;
  SphereRule sphere() const { return sphere_product_rule(sphere_theta, sphere_phi); }

  // Throws ConfigError on non-positive counts or windows.
  void validate() const;
};

struct VolumeNode {
  Vec3 x;
  double weight; // Lebesgue d^3x
};

// Ball |x| <= radius: radial Gauss-Legendre times the sphere rule, with the
// r^2 Jacobian folded into the weights.
std::vector<VolumeNode> ball_rule(int radial_nodes, const SphereRule &sphere,
                                  double radius);

} // namespace sga
