#pragma once

// Minkowski R^{3,1} with metric diag(1,1,1,-1), the upper sheet of the
// hyperboloid x.x = -1, and the light cone.

#include <array>
#include <cstdint>
#include <vector>

namespace sga {

using Vec3 = std::array<double, 3>;

inline constexpr std::array<double, 4> kMinkowskiMetric{1.0, 1.0, 1.0, -1.0};

double dot3(const Vec3 &a, const Vec3 &b);
double norm3(const Vec3 &a);

// Contravariant or covariant components of an ambient four-vector. The
// variance is a property of how the value is used; lower()/raise() flip it.
struct FourVector {
  std::array<double, 4> c{};

  double operator[](int i) const { return c[i]; }
  double &operator[](int i) { return c[i]; }

  FourVector lower() const;
  FourVector raise() const;

  friend bool operator==(const FourVector &, const FourVector &) = default;
};

double mink_dot(const FourVector &u, const FourVector &v);

// A point on the upper sheet, stored through its chart coordinates x_alpha.
class HyperPoint {
public:
  HyperPoint() : HyperPoint(Vec3{0.0, 0.0, 0.0}) {}

  const Vec3 &spatial() const { return spatial_; }
  double x4() const { return x4_; }
  FourVector ambient() const {
    return {{spatial_[0], spatial_[1], spatial_[2], x4_}};
  }

  friend HyperPoint lift(const Vec3 &spatial);
  friend bool operator==(const HyperPoint &, const HyperPoint &) = default;

private:
  explicit HyperPoint(const Vec3 &spatial);

  Vec3 spatial_;
  double x4_;
};

// x4 = sqrt(|x|^2 + 1). Throws DomainError on non-finite input.
HyperPoint lift(const Vec3 &spatial);

// Null vector k = omega (n, sigma).
class ConeVector {
public:
  // n is normalised; omega must be positive and sigma must be +1 or -1.
  ConeVector(double omega, const Vec3 &n, int sigma);

  double omega() const { return omega_; }
  const Vec3 &direction() const { return n_; }
  int sigma() const { return sigma_; }
  FourVector ambient() const {
    return {{omega_ * n_[0], omega_ * n_[1], omega_ * n_[2],
             sigma_ * omega_}};
  }

  ConeVector scaled(double t) const { return {omega_ * t, n_, sigma_}; }
  // Same null ray through the origin with the opposite time orientation:
  // k -> -k. |x.k| is unchanged.
  ConeVector reflected() const { return {omega_, {-n_[0], -n_[1], -n_[2]}, -sigma_}; }

private:
  double omega_;
  Vec3 n_;
  int sigma_;
};

// f = x.k = omega (x.n - sigma x4). Strictly negative for sigma = +1 and
// strictly positive for sigma = -1.
double pairing(const HyperPoint &x, const ConeVector &k);

// Density of Dx = d^3x / x4 relative to Lebesgue measure in the chart.
double measure_weight_H3(const HyperPoint &x);

// Density of Dk = omega d omega dn relative to d omega dn.
double measure_weight_cone(double omega, const Vec3 &n);

// Deterministic Gaussian spatial samples, lifted to the hyperboloid.
std::vector<HyperPoint> sample_hyper_points(std::size_t count,
                                            std::uint64_t seed,
                                            double radius_scale = 2.0);

} // namespace sga
