#pragma once

// Differential-operator realisation of the quantum generators on functions
// over the hyperboloid, written in the chart (x1, x2, x3) with
// x4 = sqrt(x^2 + 1), and the hyperbolic plane waves they act on.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sga/geometry.hpp"
#include "sga/jet.hpp"
#include "sga/quadrature.hpp"

namespace sga::quantum {

using cplx = std::complex<double>;
using WaveJet = Jet<cplx, 3>;
using ChartVars = std::array<WaveJet, 3>;

ChartVars chart_variables(const Vec3 &x, int order);

// psi(x; k, rho) = |x.k|^{-1+i rho}. rho may be complex so that shifted
// labels (rho - i) stay representable. Labels are canonicalised to the past
// cone sigma = -1 (k -> -k), where x.k > 0 and the wave is unchanged.
struct PlaneWaveLabel {
  ConeVector k;
  cplx rho;

  PlaneWaveLabel(const ConeVector &k_, cplx rho_);
  PlaneWaveLabel shifted(cplx by) const { return {k, rho - by}; }
  double eigenvalue_re() const { return (1.0 + rho * rho).real(); }
};

class WaveFunction {
public:
  // Taylor jet of the function around chart point x, to the given order.
  using Evaluator = std::function<WaveJet(const Vec3 &x, int order)>;

  WaveFunction(std::string name, Evaluator eval,
               std::optional<PlaneWaveLabel> label = std::nullopt)
      : name_(std::move(name)), eval_(std::move(eval)), label_(label) {}

  const std::string &name() const { return name_; }
  const std::optional<PlaneWaveLabel> &label() const { return label_; }

  WaveJet jet(const HyperPoint &x, int order) const {
    return eval_(x.spatial(), order);
  }
  WaveJet jet(const Vec3 &x, int order) const { return eval_(x, order); }
  cplx operator()(const HyperPoint &x) const { return jet(x, 0).value(); }
  cplx operator()(const Vec3 &x) const { return eval_(x, 0).value(); }

private:
  std::string name_;
  Evaluator eval_;
  std::optional<PlaneWaveLabel> label_;
};

WaveFunction plane_wave(const PlaneWaveLabel &label);

// exp(-|x - c|^2 / (2 s^2) + i a.x), a smooth square-integrable test state.
WaveFunction gaussian_packet(const Vec3 &center, double width,
                             const Vec3 &wave = {0, 0, 0});

// Function of |x| only: exp(-|x|^2 / (2 s^2)).
WaveFunction radial_gaussian(double width);

WaveFunction constant_function(cplx value);

struct OperatorHandle {
  enum class Kind {
    identity,
    position,   // X_a, multiplication by x_a (a = 0..2) or x4 (a = 3)
    momentum,   // P_a = (X^2+1)^{1/4} (-i d_a) (X^2+1)^{-1/4}
    hamiltonian,
    angular,    // J_ij; J_4a is the symmetrised (X4 P_a + P_a X4) / 2
    T_k,        // T_i k^i
    X_k,        // X_i k^i, multiplication by x.k
    L_k,        // spectral: g^{-1}(h) sqrt(h) T.k sqrt(h) g^{-1}(h)
    K_k,        // spectral: sqrt(h) X.k sqrt(h)
    A_plus_k,   // K.k - L.k
    A_minus_k,  // K.k + L.k
    h,          // M_56, spectral: rho on plane waves
  };

  Kind kind;
  int i = 0;
  int j = 0;
  std::optional<ConeVector> k;

  static OperatorHandle identity();
  static OperatorHandle position(int a);
  static OperatorHandle momentum(int a);
  static OperatorHandle hamiltonian();
  static OperatorHandle angular(int i, int j);
  static OperatorHandle T(const ConeVector &k);
  static OperatorHandle X(const ConeVector &k);
  static OperatorHandle L(const ConeVector &k);
  static OperatorHandle K(const ConeVector &k);
  static OperatorHandle A_plus(const ConeVector &k);
  static OperatorHandle A_minus(const ConeVector &k);
  static OperatorHandle h_generator();

  std::string name() const;
  bool differential() const;
  int derivative_order() const; // for differential handles
};

// Differential handles act on any wave function; spectral handles require a
// plane wave whose k agrees with the handle's up to k -> -k.
//
// H is realised in the Casimir normalisation
//   H = -sqrt(X^2+1) d_a (delta_ab + X_a X_b) / sqrt(X^2+1) d_b,
// expanded to -(delta_ab + x_a x_b) d_a d_b - 3 x_b d_b, so that plane waves
// have eigenvalue 1 + rho^2 and H = -J_ij J^ij / 2 = 1 + h^2.
WaveFunction apply(const OperatorHandle &op, const WaveFunction &psi);

// |<phi, A psi> - <A phi, psi>| with <f, g> = int d^3x / sqrt(x^2+1) f* g over
// the ball of radius quad.radius (default 8).
double hermiticity_residual(const OperatorHandle &op, const WaveFunction &phi,
                            const WaveFunction &psi, const QuadratureSpec &quad);

using OperatorCombination = std::vector<std::pair<cplx, OperatorHandle>>;

// max over points of |([A, B] - sum c_k O_k) psi| / (1 + |psi|).
double commutator_residual(const OperatorHandle &a, const OperatorHandle &b,
                           const OperatorCombination &expected,
                           const WaveFunction &psi,
                           const std::vector<HyperPoint> &points);

// |H psi - (1 + rho^2) psi| / |psi| at x.
double eigenvalue_residual(const PlaneWaveLabel &label, const HyperPoint &x);

struct LadderResult {
  cplx coefficient;
  PlaneWaveLabel shifted_label;
  double fit_residual = 0.0; // max relative deviation of the pointwise ratio
};

// T.k psi(rho) fitted against psi(rho - i) at the given points. Throws
// MismatchError if the pointwise ratio varies by more than 1e-8 relative.
LadderResult ladder_action_T(const PlaneWaveLabel &label,
                             const std::vector<HyperPoint> &points);

enum class Ladder { K, L, A_plus, A_minus };

// Spectral action on a plane wave. sqrt(rho) and sqrt(rho - i) use
// special::spectral_sqrt; the T.k coefficient entering L.k is measured by
// ladder_action_T at `points` (a default set if empty). Throws
// NearPoleError for |rho| < 1e-6.
LadderResult ladder_action_KLA(const PlaneWaveLabel &label, Ladder which,
                               const std::vector<HyperPoint> &points = {});

// (A+.k)^{-iu} psi(rho) = g(u, rho) psi(rho - u). u may be complex; u = i
// reproduces the A+.k coefficient.
LadderResult power_ladder(const PlaneWaveLabel &label, cplx u);

// Max residual of (f^2 - m2) psi'' + 3 f psi' + (1 + rho^2) psi over
// `points_f`, where psi is the closed-form solution
//   m2 = 0:  C1 f^{-1+i rho} + C2 f^{-1-i rho}
//   m2 != 0: [C1 (f + s)^{i rho} + C2 (f + s)^{-i rho}] / s,  s = sqrt(f^2 - m2).
// Throws DomainError if some f has |f^2 - m2| < 1e-12.
double verify_radial_ode(double rho, double m2, const std::vector<double> &points_f,
                         cplx c1 = 1.0, cplx c2 = 0.0);

} // namespace sga::quantum
