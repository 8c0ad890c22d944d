#include "sga/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "sga/errors.hpp"

namespace sga::special {

namespace {

using std::numbers::pi;

constexpr double kShiftTo = 15.0;

// B_2k / (2k (2k - 1)), k = 1..8.
constexpr std::array<double, 8> kStirling{
    1.0 / 12.0,   -1.0 / 360.0,        1.0 / 1260.0, -1.0 / 1680.0,
    1.0 / 1188.0, -691.0 / 360360.0,   1.0 / 156.0,  -3617.0 / 122400.0};

bool is_pole(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 &&
         z.real() == std::round(z.real());
}

double pole_distance(cplx w) {
  if (w.real() > 0.5)
    return INFINITY;
  return std::abs(w - cplx(std::round(w.real()), 0.0));
}

void guard_near_pole(cplx w) {
  if (is_pole(w))
    throw PoleError("gamma argument on a pole");
  if (pole_distance(w) < 1e-6)
    throw NearPoleError("gamma argument within 1e-6 of a pole");
}

} // namespace

cplx log_gamma(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("log_gamma: non-finite argument");
  if (is_pole(z))
    throw PoleError("log_gamma: argument is a non-positive integer");
  cplx shift{0.0, 0.0};
  while (z.real() < kShiftTo) {
    shift += std::log(z);
    z += 1.0;
  }
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series{0.0, 0.0};
  cplx p = inv;
  for (double c : kStirling) {
    series += c * p;
    p *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + series -
         shift;
}

cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

cplx spectral_sqrt(cplx z) {
  double a = std::arg(z);
  if (a > pi / 2)
    a -= 2 * pi;
  return std::polar(std::sqrt(std::abs(z)), a / 2);
}

cplx spectral_root(cplx rho) {
  return spectral_sqrt(rho) * spectral_sqrt(rho - cplx(0.0, 1.0));
}

namespace {

cplx g_ratio(cplx z) {
  const cplx iz2 = cplx(0.0, 0.5) * z;
  return std::exp(log_gamma(iz2 + 0.75) + log_gamma(-iz2 + 0.75) -
                  log_gamma(iz2 + 0.25) - log_gamma(-iz2 + 0.25));
}

cplx nearer_root(cplx r, cplx previous) {
  const cplx s = std::sqrt(r);
  return std::abs(s - previous) <= std::abs(s + previous) ? s : -s;
}

// Continues sqrt(ratio) from `from` (root `root_from`) to `to`, subdividing
// when the root moves too far in one step.
cplx follow(cplx from, cplx to, cplx root_from, int depth = 0) {
  const cplx root_to = nearer_root(g_ratio(to), root_from);
  const double jump = std::abs(root_to - root_from);
  const double scale = std::max(std::abs(root_to), std::abs(root_from));
  if (jump <= 0.25 * scale || depth >= 40)
    return root_to;
  const cplx mid = 0.5 * (from + to);
  const cplx root_mid = follow(from, mid, root_from, depth + 1);
  return follow(mid, to, root_mid, depth + 1);
}

cplx follow_segment(cplx from, cplx to, cplx root) {
  const double len = std::abs(to - from);
  const int steps = std::max(1, static_cast<int>(std::ceil(len / 0.05)));
  cplx prev = from;
  for (int k = 1; k <= steps; ++k) {
    const cplx next = from + (to - from) * (static_cast<double>(k) / steps);
    root = follow(prev, next, root);
    prev = next;
  }
  return root;
}

} // namespace

cplx g_of_h(cplx z) {
  const double x = z.real();
  const double y = z.imag();
  if (!std::isfinite(x) || !std::isfinite(y))
    throw DomainError("g_of_h: non-finite argument");
  const cplx iz2 = cplx(0.0, 0.5) * z;
  for (cplx w : {iz2 + 0.75, -iz2 + 0.75, iz2 + 0.25, -iz2 + 0.25})
    if (is_pole(w))
      throw PoleError("g_of_h: argument is a branch point");
  const double anchor = std::max(x, 0.5);
  if (x < 0.0) {
    // The horizontal leg crosses the imaginary axis at i y.
    const double t = std::abs(y) - 0.5;
    if (t >= 0.0 && std::abs(t - std::round(t)) < 1e-9)
      throw PoleError("g_of_h: continuation path meets a branch point");
  }
  cplx root = std::sqrt(g_ratio(cplx(anchor, 0.0)));
  if (y != 0.0)
    root = follow_segment(cplx(anchor, 0.0), cplx(anchor, y), root);
  if (anchor != x)
    root = follow_segment(cplx(anchor, y), z, root);
  return 2.0 * root;
}

cplx ladder_coefficient(cplx u, cplx rho, LadderPrefactor prefactor) {
  // The gamma ratio is identically 1 at u = 0, poles of rho included.
  if (u == 0.0)
    return 1.0;
  const cplx i{0.0, 1.0};
  const cplx a = -i * rho;
  const cplx b = -i * (rho - u);
  for (cplx w : {a, a + 1.0, b, b + 1.0})
    guard_near_pole(w);
  const double lnK = prefactor == LadderPrefactor::four ? std::log(4.0)
                                                        : std::log(2.0);
  const cplx L = -i * u * lnK + pi * u + (log_gamma(a) - log_gamma(b)) +
                 (log_gamma(a + 1.0) - log_gamma(b + 1.0));
  return std::exp(0.5 * L);
}

cplx mellin_barnes_integral(double u, double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw DomainError("Mellin-Barnes check: mu must be positive");
  if (u == 0.0 || !std::isfinite(u))
    throw DomainError("Mellin-Barnes check: u must be finite and non-zero");
  // int_0^inf z^{iu} e^{-mu z} dz with z = e^t.
  const double t_lo = -45.0;
  const double t_hi = std::log(750.0 / mu);
  auto f = [&](double t) {
    return std::exp(cplx(1.0, u) * t - mu * std::exp(t));
  };
  auto trapezoid = [&](double h) {
    const int n = static_cast<int>(std::ceil((t_hi - t_lo) / h));
    const double step = (t_hi - t_lo) / n;
    cplx s{0.0, 0.0};
    for (int k = 0; k <= n; ++k)
      s += f(t_lo + k * step) * ((k == 0 || k == n) ? 0.5 : 1.0);
    return s * step;
  };
  const cplx coarse = trapezoid(0.05);
  const cplx fine = trapezoid(0.025);
  const double change = std::abs(fine - coarse);
  if (!(change <= 1e-10 * std::max(1.0, std::abs(fine))))
    throw QuadratureError("Mellin-Barnes quadrature did not settle: step "
                          "halving changed the result by " +
                          std::to_string(change));
  // 1 / (iu Gamma(iu)) = 1 / Gamma(1 + iu)
  return mu * fine / gamma(cplx(1.0, u));
}

double verify_mellin_barnes_power(double u, double mu) {
  const cplx expected = std::exp(cplx(0.0, -u) * std::log(mu));
  return std::abs(mellin_barnes_integral(u, mu) - expected);
}

} // namespace sga::special
