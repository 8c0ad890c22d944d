#include "sga/geometry.hpp"

#include <cmath>
#include <random>

#include "sga/errors.hpp"

namespace sga {

double dot3(const Vec3 &a, const Vec3 &b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double norm3(const Vec3 &a) { return std::sqrt(dot3(a, a)); }

FourVector FourVector::lower() const {
  FourVector r = *this;
  r.c[3] = -r.c[3];
  return r;
}

FourVector FourVector::raise() const { return lower(); }

double mink_dot(const FourVector &u, const FourVector &v) {
  return u[0] * v[0] + u[1] * v[1] + u[2] * v[2] - u[3] * v[3];
}

HyperPoint::HyperPoint(const Vec3 &spatial)
    : spatial_(spatial), x4_(std::sqrt(dot3(spatial, spatial) + 1.0)) {}

HyperPoint lift(const Vec3 &spatial) {
  for (double v : spatial)
    if (!std::isfinite(v))
      throw DomainError("lift: non-finite spatial coordinate");
  return HyperPoint(spatial);
}

ConeVector::ConeVector(double omega, const Vec3 &n, int sigma)
    : omega_(omega), sigma_(sigma) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw DomainError("ConeVector: omega must be positive and finite");
  if (sigma != 1 && sigma != -1)
    throw DomainError("ConeVector: sigma must be +1 or -1");
  const double len = norm3(n);
  if (!(len > 0.0) || !std::isfinite(len))
    throw DomainError("ConeVector: direction must be a non-zero finite vector");
  n_ = {n[0] / len, n[1] / len, n[2] / len};
}

double pairing(const HyperPoint &x, const ConeVector &k) {
  return k.omega() * (dot3(x.spatial(), k.direction()) - k.sigma() * x.x4());
}

double measure_weight_H3(const HyperPoint &x) { return 1.0 / x.x4(); }

double measure_weight_cone(double omega, const Vec3 & /*n*/) {
  if (!(omega > 0.0))
    throw DomainError("measure_weight_cone: omega must be positive");
  return omega;
}

std::vector<HyperPoint> sample_hyper_points(std::size_t count,
                                            std::uint64_t seed,
                                            double radius_scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, radius_scale);
  std::vector<HyperPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = gauss(rng);
    const double b = gauss(rng);
    const double c = gauss(rng);
    out.push_back(lift({a, b, c}));
  }
  return out;
}

} // namespace sga
