#include "sga/quadrature.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include <gsl/gsl_integration.h>

#include "sga/errors.hpp"

namespace sga {

Rule1D gauss_legendre(int n, double a, double b) {
  if (n < 1)
    throw QuadratureError("Gauss-Legendre rule needs at least one node");
  std::unique_ptr<gsl_integration_glfixed_table,
                  decltype(&gsl_integration_glfixed_table_free)>
      table(gsl_integration_glfixed_table_alloc(static_cast<size_t>(n)),
            &gsl_integration_glfixed_table_free);
  if (!table)
    throw QuadratureError("could not build Gauss-Legendre table");
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i)
    gsl_integration_glfixed_point(a, b, static_cast<size_t>(i), &r.nodes[i],
                                  &r.weights[i], table.get());
  return r;
}

SphereRule sphere_product_rule(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1)
    throw QuadratureError("sphere rule needs positive node counts");
  const Rule1D gl = gauss_legendre(n_theta, -1.0, 1.0);
  SphereRule s;
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  for (int i = 0; i < n_theta; ++i) {
    const double c = gl.nodes[i];
    const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = (j + 0.5) * dphi;
      s.nodes.push_back({sn * std::cos(phi), sn * std::sin(phi), c});
      s.weights.push_back(gl.weights[i] * dphi);
    }
  }
  s.exactness = std::min(2 * n_theta - 1, n_phi - 1);
  s.id = "gl-product-" + std::to_string(n_theta) + "x" + std::to_string(n_phi);
  return s;
}

std::vector<double> QuadratureSpec::rho_grid() const {
  validate();
  std::vector<double> g(rho_count);
  const double h = rho_spacing();
  // Mirrored so that g[M-1-m] == -g[m] exactly.
  for (int m = 0; m < rho_count / 2; ++m) {
    g[m] = -rho_max + m * h;
    g[rho_count - 1 - m] = -g[m];
  }
  if (rho_count % 2 == 1)
    g[rho_count / 2] = 0.0;
  return g;
}

double QuadratureSpec::rho_spacing() const {
  return 2.0 * rho_max / (rho_count - 1);
}

void QuadratureSpec::validate() const {
  if (sphere_theta < 1 || sphere_phi < 1)
    throw ConfigError("sphere node counts must be positive");
  if (radial_nodes < 1 || polar_nodes < 1 || azimuth_nodes < 1)
    throw ConfigError("volume node counts must be positive");
  if (eval_radial < 1 || eval_theta < 1 || eval_phi < 1)
    throw ConfigError("evaluation node counts must be positive");
  if (!(mellin_step > 0.0) || !std::isfinite(mellin_step))
    throw ConfigError("Mellin step must be positive");
  if (!(tail_tolerance > 0.0))
    throw ConfigError("tail tolerance must be positive");
  if (radius < 0.0 || !std::isfinite(radius))
    throw ConfigError("radius must be finite and non-negative");
  if (!(rho_max > 0.0) || !std::isfinite(rho_max))
    throw ConfigError("rho window must be positive");
  if (rho_count < 2)
    throw ConfigError("rho grid needs at least two points");
}

std::vector<VolumeNode> ball_rule(int radial_nodes, const SphereRule &sphere,
                                  double radius) {
  const Rule1D radial = gauss_legendre(radial_nodes, 0.0, radius);
  std::vector<VolumeNode> out;
  out.reserve(radial.nodes.size() * sphere.nodes.size());
  for (std::size_t a = 0; a < radial.nodes.size(); ++a) {
    const double r = radial.nodes[a];
    const double wr = radial.weights[a] * r * r;
    for (std::size_t b = 0; b < sphere.nodes.size(); ++b) {
      const Vec3 &n = sphere.nodes[b];
      out.push_back({{r * n[0], r * n[1], r * n[2]}, wr * sphere.weights[b]});
    }
  }
  return out;
}

} // namespace sga
