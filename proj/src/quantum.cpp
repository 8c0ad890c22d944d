#include "sga/quantum.hpp"

#include <cmath>

#include "sga/errors.hpp"
#include "sga/special.hpp"

namespace sga::quantum {

namespace {

const cplx kI{0.0, 1.0};

WaveJet r_squared(const ChartVars &v) {
  return v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
}

WaveJet time_component(const ChartVars &v) { return sqrt(1.0 + r_squared(v)); }

// x.k = omega (x.n - sigma x4)
WaveJet pairing_jet(const ChartVars &v, const ConeVector &k) {
  const Vec3 &n = k.direction();
  const WaveJet xn = v[0] * n[0] + v[1] * n[1] + v[2] * n[2];
  return (xn - time_component(v) * static_cast<double>(k.sigma())) * k.omega();
}

ConeVector past_cone(const ConeVector &k) {
  return k.sigma() == -1 ? k : k.reflected();
}

bool same_vector(const ConeVector &a, const ConeVector &b) {
  const auto x = a.ambient();
  const auto y = b.ambient();
  double d = 0.0, s = 0.0;
  for (int i = 0; i < 4; ++i) {
    d = std::max(d, std::abs(x[i] - y[i]));
    s = std::max(s, std::abs(x[i]));
  }
  return d <= 1e-12 * s;
}

// +1 if the handle's k equals the label's k, -1 if it is its negative.
double orientation_sign(const ConeVector &handle_k, const ConeVector &label_k) {
  if (same_vector(handle_k, label_k))
    return 1.0;
  if (same_vector(handle_k.reflected(), label_k))
    return -1.0;
  throw DomainError("spectral operator: k does not match the plane-wave label");
}

std::vector<HyperPoint> default_points() {
  return sample_hyper_points(50, 0x51a7e5eedULL, 1.5);
}

// Fits target(x) ~ c * reference(x) at the points. Returns c and the max
// relative deviation of the pointwise ratio from c.
std::pair<cplx, double> fit_ratio(const WaveFunction &target,
                                  const WaveFunction &reference,
                                  const std::vector<HyperPoint> &points) {
  std::vector<cplx> ratios;
  ratios.reserve(points.size());
  cplx mean{0.0, 0.0};
  for (const auto &x : points) {
    const cplx r = target(x) / reference(x);
    ratios.push_back(r);
    mean += r;
  }
  mean /= static_cast<double>(ratios.size());
  double dev = 0.0;
  for (const cplx &r : ratios)
    dev = std::max(dev, std::abs(r - mean) / std::max(std::abs(mean), 1e-300));
  return {mean, dev};
}

void check_alpha(int a, int hi) {
  if (a < 0 || a > hi)
    throw DomainError("operator index out of range");
}

} // namespace

ChartVars chart_variables(const Vec3 &x, int order) {
  return {WaveJet::variable(order, 0, x[0]), WaveJet::variable(order, 1, x[1]),
          WaveJet::variable(order, 2, x[2])};
}

PlaneWaveLabel::PlaneWaveLabel(const ConeVector &k_, cplx rho_)
    : k(past_cone(k_)), rho(rho_) {
  if (!std::isfinite(rho.real()) || !std::isfinite(rho.imag()))
    throw DomainError("plane-wave label: non-finite rho");
}

WaveFunction plane_wave(const PlaneWaveLabel &label) {
  const ConeVector k = label.k;
  const cplx exponent = cplx(-1.0, 0.0) + kI * label.rho;
  return {"psi", [k, exponent](const Vec3 &x, int order) {
            const ChartVars v = chart_variables(x, order);
            return pow(pairing_jet(v, k), exponent);
          },
          label};
}

WaveFunction gaussian_packet(const Vec3 &center, double width, const Vec3 &wave) {
  if (!(width > 0.0))
    throw DomainError("gaussian packet: width must be positive");
  return {"gaussian packet", [center, width, wave](const Vec3 &x, int order) {
            const ChartVars v = chart_variables(x, order);
            WaveJet e(order);
            for (int a = 0; a < 3; ++a) {
              const WaveJet d = v[a] - center[a];
              e += d * d * cplx(-0.5 / (width * width));
              e += v[a] * (kI * wave[a]);
            }
            return exp(e);
          }};
}

WaveFunction radial_gaussian(double width) {
  return gaussian_packet({0, 0, 0}, width);
}

WaveFunction constant_function(cplx value) {
  return {"constant",
          [value](const Vec3 &, int order) { return WaveJet(order, value); }};
}

OperatorHandle OperatorHandle::identity() {
  return {Kind::identity, 0, 0, std::nullopt};
}
OperatorHandle OperatorHandle::position(int a) {
  check_alpha(a, 3);
  return {Kind::position, a, 0, std::nullopt};
}
OperatorHandle OperatorHandle::momentum(int a) {
  check_alpha(a, 2);
  return {Kind::momentum, a, 0, std::nullopt};
}
OperatorHandle OperatorHandle::hamiltonian() {
  return {Kind::hamiltonian, 0, 0, std::nullopt};
}
OperatorHandle OperatorHandle::angular(int i, int j) {
  check_alpha(i, 3);
  check_alpha(j, 3);
  return {Kind::angular, i, j, std::nullopt};
}
OperatorHandle OperatorHandle::T(const ConeVector &k) { return {Kind::T_k, 0, 0, k}; }
OperatorHandle OperatorHandle::X(const ConeVector &k) { return {Kind::X_k, 0, 0, k}; }
OperatorHandle OperatorHandle::L(const ConeVector &k) { return {Kind::L_k, 0, 0, k}; }
OperatorHandle OperatorHandle::K(const ConeVector &k) { return {Kind::K_k, 0, 0, k}; }
OperatorHandle OperatorHandle::A_plus(const ConeVector &k) {
  return {Kind::A_plus_k, 0, 0, k};
}
OperatorHandle OperatorHandle::A_minus(const ConeVector &k) {
  return {Kind::A_minus_k, 0, 0, k};
}
OperatorHandle OperatorHandle::h_generator() { return {Kind::h, 0, 0, std::nullopt}; }

std::string OperatorHandle::name() const {
  switch (kind) {
  case Kind::identity:
    return "1";
  case Kind::position:
    return "X" + std::to_string(i + 1);
  case Kind::momentum:
    return "P" + std::to_string(i + 1);
  case Kind::hamiltonian:
    return "H";
  case Kind::angular:
    return "J" + std::to_string(i + 1) + std::to_string(j + 1);
  case Kind::T_k:
    return "T.k";
  case Kind::X_k:
    return "X.k";
  case Kind::L_k:
    return "L.k";
  case Kind::K_k:
    return "K.k";
  case Kind::A_plus_k:
    return "A+.k";
  case Kind::A_minus_k:
    return "A-.k";
  case Kind::h:
    return "h";
  }
  return "?";
}

bool OperatorHandle::differential() const {
  switch (kind) {
  case Kind::identity:
  case Kind::position:
  case Kind::momentum:
  case Kind::hamiltonian:
  case Kind::angular:
  case Kind::T_k:
  case Kind::X_k:
    return true;
  default:
    return false;
  }
}

int OperatorHandle::derivative_order() const {
  switch (kind) {
  case Kind::momentum:
  case Kind::angular:
  case Kind::T_k:
    return 1;
  case Kind::hamiltonian:
    return 2;
  default:
    return 0;
  }
}

namespace {

WaveFunction apply_momentum(int a, const WaveFunction &psi) {
  return {"P" + std::to_string(a + 1) + " " + psi.name(),
          [a, psi](const Vec3 &x, int order) {
            const ChartVars v = chart_variables(x, order + 1);
            const WaveJet s = 1.0 + r_squared(v);
            const WaveJet inner = pow(s, cplx(-0.25)) * psi.jet(x, order + 1);
            return pow(s, cplx(0.25)).truncated(order) * (-kI) *
                   inner.differentiate(a);
          }};
}

WaveFunction apply_hamiltonian(const WaveFunction &psi) {
  return {"H " + psi.name(), [psi](const Vec3 &x, int order) {
            const ChartVars v = chart_variables(x, order);
            const WaveJet f = psi.jet(x, order + 2);
            WaveJet r(order);
            for (int b = 0; b < 3; ++b) {
              const WaveJet db = f.differentiate(b);
              r += v[b] * db * cplx(3.0);
              for (int a = 0; a < 3; ++a) {
                WaveJet coeff = v[a] * v[b];
                if (a == b)
                  coeff += 1.0;
                r += coeff * db.differentiate(a);
              }
            }
            return -r;
          }};
}

WaveFunction apply_angular(int i, int j, const WaveFunction &psi) {
  const std::string name =
      "J" + std::to_string(i + 1) + std::to_string(j + 1) + " " + psi.name();
  if (i == j)
    return {name, [](const Vec3 &, int order) { return WaveJet(order); }};
  if (i == 3 || j == 3) {
    const int a = i == 3 ? j : i;
    const double sign = i == 3 ? 1.0 : -1.0;
    // (X4 P_a + P_a X4) / 2 = -i x4 d_a
    return {name, [a, sign, psi](const Vec3 &x, int order) {
              const ChartVars v = chart_variables(x, order);
              const WaveJet d = psi.jet(x, order + 1).differentiate(a);
              return time_component(v) * d * (-kI * sign);
            }};
  }
  const WaveFunction pi = apply_momentum(i, psi);
  const WaveFunction pj = apply_momentum(j, psi);
  return {name, [i, j, pi, pj](const Vec3 &x, int order) {
            const ChartVars v = chart_variables(x, order);
            return v[i] * pj.jet(x, order) - v[j] * pi.jet(x, order);
          }};
}

WaveFunction apply_T(const ConeVector &k, const WaveFunction &psi) {
  return {"T.k " + psi.name(), [k, psi](const Vec3 &x, int order) {
            const ChartVars v = chart_variables(x, order);
            const WaveJet f = psi.jet(x, order + 1);
            WaveJet euler(order);
            WaveJet directional(order);
            for (int b = 0; b < 3; ++b) {
              const WaveJet db = f.differentiate(b);
              euler += v[b] * db;
              directional += db * (k.omega() * k.direction()[b]);
            }
            return kI * (pairing_jet(v, k) * (2.0 * euler + 3.0 * f) +
                         2.0 * directional);
          }};
}

WaveFunction scaled_plane_wave(cplx c, const PlaneWaveLabel &label,
                               const std::string &name) {
  const WaveFunction w = plane_wave(label);
  return {name,
          [c, w](const Vec3 &x, int order) { return w.jet(x, order) * c; },
          label};
}

} // namespace

WaveFunction apply(const OperatorHandle &op, const WaveFunction &psi) {
  using Kind = OperatorHandle::Kind;
  switch (op.kind) {
  case Kind::identity:
    return psi;
  case Kind::position: {
    const int a = op.i;
    return {"X" + std::to_string(a + 1) + " " + psi.name(),
            [a, psi](const Vec3 &x, int order) {
              const ChartVars v = chart_variables(x, order);
              const WaveJet m = a < 3 ? v[a] : time_component(v);
              return m * psi.jet(x, order);
            }};
  }
  case Kind::momentum:
    return apply_momentum(op.i, psi);
  case Kind::hamiltonian:
    return apply_hamiltonian(psi);
  case Kind::angular:
    return apply_angular(op.i, op.j, psi);
  case Kind::T_k:
    return apply_T(*op.k, psi);
  case Kind::X_k: {
    const ConeVector k = *op.k;
    return {"X.k " + psi.name(), [k, psi](const Vec3 &x, int order) {
              return pairing_jet(chart_variables(x, order), k) *
                     psi.jet(x, order);
            }};
  }
  default:
    break;
  }
  if (!psi.label())
    throw DomainError(op.name() + " acts spectrally and needs a plane wave");
  const PlaneWaveLabel &label = *psi.label();
  // A labelled function is a multiple of its plane wave; carry the amplitude.
  const Vec3 apex{0.0, 0.0, 0.0};
  const cplx amplitude = psi(apex) / plane_wave(label)(apex);
  if (op.kind == Kind::h)
    return scaled_plane_wave(amplitude * label.rho, label, "h " + psi.name());
  const double sign = orientation_sign(*op.k, label.k);
  Ladder which = Ladder::K;
  if (op.kind == Kind::L_k)
    which = Ladder::L;
  else if (op.kind == Kind::A_plus_k)
    which = Ladder::A_plus;
  else if (op.kind == Kind::A_minus_k)
    which = Ladder::A_minus;
  const LadderResult r = ladder_action_KLA(label, which);
  return scaled_plane_wave(amplitude * sign * r.coefficient, r.shifted_label,
                           op.name() + " " + psi.name());
}

double hermiticity_residual(const OperatorHandle &op, const WaveFunction &phi,
                            const WaveFunction &psi, const QuadratureSpec &quad) {
  quad.validate();
  const double radius = quad.radius > 0.0 ? quad.radius : 8.0;
  const auto nodes = ball_rule(quad.radial_nodes, quad.sphere(), radius);
  const WaveFunction a_psi = apply(op, psi);
  const WaveFunction a_phi = apply(op, phi);
  cplx lhs{0.0, 0.0}, rhs{0.0, 0.0};
  for (const auto &node : nodes) {
    const double w = node.weight / std::sqrt(1.0 + dot3(node.x, node.x));
    const cplx f = phi(node.x), g = psi(node.x);
    const cplx ag = a_psi(node.x), af = a_phi(node.x);
    if (!std::isfinite(std::abs(ag)) || !std::isfinite(std::abs(af)))
      throw QuadratureError("hermiticity check: non-finite integrand");
    lhs += w * std::conj(f) * ag;
    rhs += w * std::conj(af) * g;
  }
  return std::abs(lhs - rhs);
}

double commutator_residual(const OperatorHandle &a, const OperatorHandle &b,
                           const OperatorCombination &expected,
                           const WaveFunction &psi,
                           const std::vector<HyperPoint> &points) {
  const WaveFunction ab = apply(a, apply(b, psi));
  const WaveFunction ba = apply(b, apply(a, psi));
  std::vector<std::pair<cplx, WaveFunction>> rhs;
  for (const auto &[c, op] : expected)
    rhs.emplace_back(c, apply(op, psi));
  double worst = 0.0;
  for (const auto &x : points) {
    cplx r = ab(x) - ba(x);
    for (const auto &[c, w] : rhs)
      r -= c * w(x);
    worst = std::max(worst, std::abs(r) / (1.0 + std::abs(psi(x))));
  }
  return worst;
}

double eigenvalue_residual(const PlaneWaveLabel &label, const HyperPoint &x) {
  const WaveFunction psi = plane_wave(label);
  const cplx value = psi(x);
  const cplx h_value = apply(OperatorHandle::hamiltonian(), psi)(x);
  return std::abs(h_value - (1.0 + label.rho * label.rho) * value) /
         std::abs(value);
}

LadderResult ladder_action_T(const PlaneWaveLabel &label,
                             const std::vector<HyperPoint> &points) {
  const auto &pts = points.empty() ? default_points() : points;
  const WaveFunction psi = plane_wave(label);
  const PlaneWaveLabel shifted = label.shifted(kI);
  const auto [c, dev] =
      fit_ratio(apply(OperatorHandle::T(label.k), psi), plane_wave(shifted), pts);
  if (!(dev <= 1e-8))
    throw MismatchError("T.k image is not proportional to the shifted plane wave",
                        dev);
  return {c, shifted, dev};
}

LadderResult ladder_action_KLA(const PlaneWaveLabel &label, Ladder which,
                               const std::vector<HyperPoint> &points) {
  if (std::abs(label.rho) < 1e-6)
    throw NearPoleError("spectral ladder: rho within 1e-6 of the branch point 0");
  const auto &pts = points.empty() ? default_points() : points;
  const PlaneWaveLabel shifted = label.shifted(kI);
  const LadderResult t = ladder_action_T(label, pts);
  const auto [x_coeff, x_dev] =
      fit_ratio(apply(OperatorHandle::X(label.k), plane_wave(label)),
                plane_wave(shifted), pts);
  const cplx rho = label.rho;
  const cplx root = special::spectral_sqrt(rho) * special::spectral_sqrt(rho - kI);
  const cplx gg = special::g_of_h(rho) * special::g_of_h(rho - kI);
  const cplx k_coeff = root * x_coeff;
  const cplx l_coeff = root * t.coefficient / gg;
  cplx c{};
  switch (which) {
  case Ladder::K:
    c = k_coeff;
    break;
  case Ladder::L:
    c = l_coeff;
    break;
  case Ladder::A_plus:
    c = k_coeff - l_coeff;
    break;
  case Ladder::A_minus:
    c = k_coeff + l_coeff;
    break;
  }
  return {c, shifted, std::max(t.fit_residual, x_dev)};
}

LadderResult power_ladder(const PlaneWaveLabel &label, cplx u) {
  return {special::ladder_coefficient(u, label.rho), label.shifted(u), 0.0};
}

double verify_radial_ode(double rho, double m2, const std::vector<double> &points_f,
                         cplx c1, cplx c2) {
  using J1 = Jet<cplx, 1>;
  const double lambda = 1.0 + rho * rho;
  double worst = 0.0;
  for (double f0 : points_f) {
    if (!std::isfinite(f0) || std::abs(f0 * f0 - m2) < 1e-12)
      throw DomainError("radial ODE: sample point on the singular set f^2 = m^2");
    const J1 f = J1::variable(2, 0, f0);
    J1 psi(2);
    if (m2 == 0.0) {
      if (!(f0 > 0.0))
        throw DomainError("radial ODE: the cone solution needs f > 0");
      psi = pow(f, cplx(-1.0, rho)) * c1 + pow(f, cplx(-1.0, -rho)) * c2;
    } else {
      const J1 s = sqrt(f * f - cplx(m2));
      const J1 base = f + s;
      psi = (pow(base, cplx(0.0, rho)) * c1 + pow(base, cplx(0.0, -rho)) * c2) / s;
    }
    const cplx d1 = psi.gradient(0);
    const cplx d2 = psi.hessian(0, 0);
    const cplx res = (f0 * f0 - m2) * d2 + 3.0 * f0 * d1 + lambda * psi.value();
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

} // namespace sga::quantum
