#pragma once

// Complex log-gamma and the ladder coefficient functions g(h) and g(u, rho).

#include <complex>

namespace sga::special {

using cplx = std::complex<double>;

// log Gamma(z) on the standard branch: analytic off (-inf, 0], real for
// z > 0, equal to the sum of principal logarithms in the recurrence. Throws
// PoleError at non-positive integers.
cplx log_gamma(cplx z);
cplx gamma(cplx z);

// Square root with its cut on the positive imaginary axis:
// arg z is taken in (-3pi/2, pi/2]. Agrees with the principal root on the
// closed right half-plane and is continuous across the negative real axis,
// so spectral_sqrt(rho) spectral_sqrt(rho - i) is continuous in real rho
// through rho = 0.
cplx spectral_sqrt(cplx z);

// sqrt(rho (rho - i)) on the spectral branch above.
cplx spectral_root(cplx rho);

// 2 [G(iz/2+3/4) G(-iz/2+3/4) / (G(iz/2+1/4) G(-iz/2+1/4))]^{1/2}.
// The root is continued from the positive real axis (where it is positive)
// along a path that first rises vertically at Re = max(Re z, 1/2) and then
// runs horizontally to z. With this branch g(h) g(h+i) = 2h + i holds for
// every real h. The branch points lie on the imaginary axis; hitting one
// throws PoleError.
cplx g_of_h(cplx z);

// Base of the u-dependent prefactor K^{-iu} i^{-2iu}.
enum class LadderPrefactor {
  four, // K = 4, fixed by g(i, rho) = 2 sqrt(rho (rho - i))
  two,  // K = 2 as originally printed; gives sqrt(2) sqrt(rho (rho - i))
};

// g(u, rho) = [K^{-iu} i^{-2iu} G(-i rho) G(1 - i rho)
//              / (G(-i(rho-u)) G(1 - i(rho-u)))]^{1/2}
// with the root taken as exp(1/2 log) of the log-gamma sum. This is the
// analytic continuation from u = 0, where g = 1, and satisfies
// g(u, rho) g(v, rho - u) = g(u + v, rho) identically. Complex u and rho are
// accepted. g(0, rho) = 1 for every rho. Otherwise throws NearPoleError
// within 1e-6 of a gamma pole.
cplx ladder_coefficient(cplx u, cplx rho,
                        LadderPrefactor prefactor = LadderPrefactor::four);

struct LadderCoefficient {
  double u;
  double rho;
  cplx value;
};

inline LadderCoefficient make_ladder_coefficient(double u, double rho) {
  return {u, rho, ladder_coefficient(u, rho)};
}

// (1 / Gamma(iu)) int_0^inf z^{-1+iu} e^{-mu z} dz, regularised at z = 0 by
// one integration by parts and evaluated with z = e^t by the trapezoid rule.
// Throws QuadratureError if step halving changes the result by more than
// 1e-10.
cplx mellin_barnes_integral(double u, double mu);

// |mellin_barnes_integral(u, mu) - mu^{-iu}|.
double verify_mellin_barnes_power(double u, double mu);

} // namespace sga::special
