#include "sga/classical.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sga/errors.hpp"

namespace sga::classical {

namespace {

constexpr std::array<double, 6> kGeneratorMetric{1.0, 1.0, 1.0, -1.0, -1.0, 1.0};

PhaseJet zero_like(const PhaseJet &j) { return PhaseJet(j.order()); }

double contract(const FourVector &x, const FourVector &p) {
  return x[0] * p[0] + x[1] * p[1] + x[2] * p[2] + x[3] * p[3];
}

using GeneratorMatrix = std::array<std::array<PhaseJet, 6>, 6>;

struct Kinematics {
  std::array<PhaseJet, 4> x_low;
  std::array<PhaseJet, 4> p_up;
  std::array<std::array<PhaseJet, 4>, 4> J; // lower indices
  PhaseJet C;
};

Kinematics kinematics(const PhaseVars &v) {
  Kinematics k;
  const int order = v[0].order();
  for (int i = 0; i < 4; ++i) {
    k.x_low[i] = v[i] * kMinkowskiMetric[i];
    k.p_up[i] = v[4 + i] * kMinkowskiMetric[i];
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      k.J[i][j] = (i == j) ? PhaseJet(order)
                           : k.x_low[i] * v[4 + j] - k.x_low[j] * v[4 + i];
  k.C = PhaseJet(order);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      k.C += k.J[i][j] * k.J[i][j] *
             (kMinkowskiMetric[i] * kMinkowskiMetric[j]);
  return k;
}

PhaseJet sqrt_minus_C(const PhaseJet &C) {
  if (!(-C.value() > 0.0))
    throw DomainError("sqrt(-C) requires -C > 0 (degenerate momentum)");
  return sqrt(-C);
}

// Full antisymmetric 6x6 generator matrix, zero-based.
GeneratorMatrix generator_matrix(const PhaseVars &v) {
  const int order = v[0].order();
  const Kinematics k = kinematics(v);
  const PhaseJet s = sqrt_minus_C(k.C);
  GeneratorMatrix M;
  for (auto &row : M)
    row.fill(PhaseJet(order));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      M[i][j] = k.J[i][j];
  for (int i = 0; i < 4; ++i) {
    M[4][i] = s * k.x_low[i];
    PhaseJet L(order);
    for (int c = 0; c < 4; ++c)
      L += k.J[i][c] * v[c];
    M[5][i] = L;
    M[i][4] = -M[4][i];
    M[i][5] = -M[5][i];
  }
  M[4][5] = s;
  M[5][4] = -s;
  return M;
}

int permutation_sign(const std::array<int, 6> &p) {
  int inversions = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if (p[i] > p[j])
        ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

struct Tracker {
  double max = 0.0;
  std::string worst;
  void add(double r, const std::string &what) {
    const double a = std::isfinite(r) ? std::abs(r) : INFINITY;
    if (worst.empty() || a > max) {
      max = a;
      worst = what;
    }
  }
  VerificationReport report(std::string relation, double tol,
                            std::uint64_t seed) const {
    VerificationReport r;
    r.relation = std::move(relation);
    r.point_seed = seed;
    r.residual_max = max;
    r.tolerance = tol;
    r.pass = max < tol;
    r.worst = worst;
    return r;
  }
};

std::array<PhaseJet, 2> constraint_jets(const PhaseVars &v) {
  return {constraint(0).evaluate(v), constraint(1).evaluate(v)};
}

std::string idx(int i) { return std::to_string(i + 1); }

} // namespace

PhasePoint make_phase_point(const FourVector &x, const FourVector &p,
                            double tol) {
  for (int i = 0; i < 4; ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(p[i]))
      throw DomainError("phase point: non-finite component");
  if (std::abs(mink_dot(x, x) + 1.0) > tol)
    throw DomainError("phase point: x.x != -1");
  if (std::abs(contract(x, p)) > tol)
    throw DomainError("phase point: x^i p_i != 0");
  return {x, p};
}

std::vector<PhasePoint> sample_phase_points(std::size_t count,
                                            std::uint64_t seed,
                                            double radius_scale,
                                            double min_energy) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> spatial(0.0, radius_scale);
  std::normal_distribution<double> momentum(0.0, 1.0);
  std::vector<PhasePoint> out;
  out.reserve(count);
  while (out.size() < count) {
    const Vec3 s{spatial(rng), spatial(rng), spatial(rng)};
    const FourVector x = lift(s).ambient();
    FourVector p;
    for (int i = 0; i < 4; ++i)
      p[i] = momentum(rng);
    const double xp = contract(x, p);
    const FourVector xl = x.lower();
    for (int i = 0; i < 4; ++i)
      p[i] += xp * xl[i];
    PhasePoint pt{x, p};
    if (-casimir().value(pt) < min_energy)
      continue;
    out.push_back(pt);
  }
  return out;
}

PhaseVars phase_variables(const PhasePoint &pt, int order) {
  PhaseVars v;
  for (int i = 0; i < 4; ++i) {
    v[i] = PhaseJet::variable(order, i, pt.x[i]);
    v[4 + i] = PhaseJet::variable(order, 4 + i, pt.p[i]);
  }
  return v;
}

PhaseJet Observable::evaluate(const PhasePoint &pt, int order) const {
  return eval_(phase_variables(pt, order));
}

double Observable::value(const PhasePoint &pt) const {
  return evaluate(pt, 0).value();
}

std::array<double, 8> Observable::gradient(const PhasePoint &pt) const {
  const PhaseJet j = evaluate(pt, 1);
  std::array<double, 8> g{};
  for (int i = 0; i < 8; ++i)
    g[i] = j.gradient(i);
  return g;
}

namespace {
void check_index(int i) {
  if (i < 0 || i > 3)
    throw DomainError("observable index out of range 0..3");
}
} // namespace

Observable coordinate(int i) {
  check_index(i);
  return {"x^" + idx(i), [i](const PhaseVars &v) { return v[i]; }};
}

Observable coordinate_lower(int i) {
  check_index(i);
  return {"x_" + idx(i),
          [i](const PhaseVars &v) { return v[i] * kMinkowskiMetric[i]; }};
}

Observable momentum(int i) {
  check_index(i);
  return {"p_" + idx(i), [i](const PhaseVars &v) { return v[4 + i]; }};
}

Observable angular_momentum(int i, int j) {
  check_index(i);
  check_index(j);
  return {"J_" + idx(i) + idx(j), [i, j](const PhaseVars &v) {
            if (i == j)
              return zero_like(v[0]);
            return v[i] * kMinkowskiMetric[i] * v[4 + j] -
                   v[j] * kMinkowskiMetric[j] * v[4 + i];
          }};
}

Observable casimir() {
  return {"C", [](const PhaseVars &v) { return kinematics(v).C; }};
}

Observable pseudo_casimir() {
  return {"C~", [](const PhaseVars &v) {
            const Kinematics k = kinematics(v);
            PhaseJet r = zero_like(v[0]);
            std::array<int, 4> p{0, 1, 2, 3};
            do {
              int inv = 0;
              for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b)
                  if (p[a] > p[b])
                    ++inv;
              const double sign = inv % 2 == 0 ? 1.0 : -1.0;
              r += k.J[p[0]][p[1]] * k.J[p[2]][p[3]] * sign;
            } while (std::next_permutation(p.begin(), p.end()));
            return r;
          }};
}

Observable constraint(int which) {
  if (which == 0)
    return {"phi1", [](const PhaseVars &v) {
              return v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - v[3] * v[3] +
                     1.0;
            }};
  if (which == 1)
    return {"phi2", [](const PhaseVars &v) {
              return v[0] * v[4] + v[1] * v[5] + v[2] * v[6] + v[3] * v[7];
            }};
  throw DomainError("constraint index must be 0 or 1");
}

Observable chart_hamiltonian() {
  return {"H_chart", [](const PhaseVars &v) {
            PhaseJet pi2 = zero_like(v[0]);
            PhaseJet xpi = zero_like(v[0]);
            const PhaseJet ratio = v[7] / v[3];
            for (int a = 0; a < 3; ++a) {
              const PhaseJet pi = v[4 + a] + ratio * v[a];
              pi2 += pi * pi;
              xpi += v[a] * pi;
            }
            return (pi2 + xpi * xpi) * 0.5;
          }};
}

GeneratorId::GeneratorId(int a_, int b_) : a(a_), b(b_) {
  if (a < 1 || b > 6 || a >= b)
    throw DomainError("generator index must satisfy 1 <= a < b <= 6");
}

std::string GeneratorId::label() const {
  return "M" + std::to_string(a) + std::to_string(b);
}

std::vector<GeneratorId> all_generators() {
  std::vector<GeneratorId> out;
  for (int a = 1; a <= 6; ++a)
    for (int b = a + 1; b <= 6; ++b)
      out.emplace_back(a, b);
  return out;
}

double generator_metric(int a) {
  if (a < 1 || a > 6)
    throw DomainError("generator metric index out of range 1..6");
  return kGeneratorMetric[a - 1];
}

Observable realize_generator(GeneratorId id) {
  const int a = id.a - 1;
  const int b = id.b - 1;
  return {id.label(), [a, b](const PhaseVars &v) -> PhaseJet {
            if (b < 4) {
              return v[a] * kMinkowskiMetric[a] * v[4 + b] -
                     v[b] * kMinkowskiMetric[b] * v[4 + a];
            }
            return generator_matrix(v)[a][b];
          }};
}

PhaseJet poisson_jet(const PhaseJet &f, const PhaseJet &g) {
  PhaseJet r(std::min(f.order(), g.order()) - 1);
  for (int i = 0; i < 4; ++i) {
    r += f.differentiate(i) * g.differentiate(4 + i);
    r -= f.differentiate(4 + i) * g.differentiate(i);
  }
  return r;
}

PhaseJet dirac_jet(const PhaseJet &f, const PhaseJet &g,
                   const std::array<PhaseJet, 2> &phi) {
  PhaseJet c[2][2];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      c[a][b] = poisson_jet(phi[a], phi[b]);
  const PhaseJet det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
  if (!(std::abs(det.value()) >= 1e-10))
    throw SingularConstraintError("constraint matrix is singular");
  const PhaseJet inv_det = reciprocal(det);
  const PhaseJet inv[2][2] = {{c[1][1] * inv_det, -c[0][1] * inv_det},
                              {-c[1][0] * inv_det, c[0][0] * inv_det}};
  const std::array<PhaseJet, 2> f_phi{poisson_jet(f, phi[0]),
                                      poisson_jet(f, phi[1])};
  const std::array<PhaseJet, 2> phi_g{poisson_jet(phi[0], g),
                                      poisson_jet(phi[1], g)};
  PhaseJet r = poisson_jet(f, g);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      r -= f_phi[a] * inv[a][b] * phi_g[b];
  return r;
}

double canonical_poisson(const Observable &f, const Observable &g,
                         const PhasePoint &pt) {
  const PhaseVars v = phase_variables(pt, 1);
  const double r = poisson_jet(f.evaluate(v), g.evaluate(v)).value();
  if (!std::isfinite(r))
    throw DomainError("non-finite bracket value");
  return r;
}

double dirac_bracket(const Observable &f, const Observable &g,
                     const PhasePoint &pt, Orientation orientation) {
  const PhaseVars v = phase_variables(pt, 1);
  const auto phi = constraint_jets(v);
  const PhaseJet fj = f.evaluate(v);
  const PhaseJet gj = g.evaluate(v);
  const double r = orientation == Orientation::canonical
                       ? dirac_jet(fj, gj, phi).value()
                       : dirac_jet(gj, fj, phi).value();
  if (!std::isfinite(r))
    throw DomainError("non-finite bracket value");
  return r;
}

double jacobi_residual(const Observable &f, const Observable &g,
                       const Observable &h, const PhasePoint &pt) {
  const PhaseVars v = phase_variables(pt, 2);
  const auto phi = constraint_jets(v);
  const PhaseJet F = f.evaluate(v);
  const PhaseJet G = g.evaluate(v);
  const PhaseJet H = h.evaluate(v);
  return dirac_jet(F, dirac_jet(G, H, phi), phi).value() +
         dirac_jet(G, dirac_jet(H, F, phi), phi).value() +
         dirac_jet(H, dirac_jet(F, G, phi), phi).value();
}

nlohmann::json VerificationReport::to_json() const {
  return {{"relation", relation},   {"point_seed", point_seed},
          {"residual_max", residual_max}, {"tolerance", tolerance},
          {"pass", pass},           {"worst", worst}};
}

namespace {

// Generator jets at order 1 plus everything needed to take Dirac brackets
// among them without re-evaluating.
struct PointData {
  PhaseVars v;
  std::array<PhaseJet, 2> phi;
  GeneratorMatrix M;
};

PointData point_data(const PhasePoint &pt, int order) {
  PointData d;
  d.v = phase_variables(pt, order);
  d.phi = constraint_jets(d.v);
  d.M = generator_matrix(d.v);
  return d;
}

// Bracket in the orientation where the so(4,2) relations hold as written.
double algebra_bracket(const PhaseJet &f, const PhaseJet &g,
                       const std::array<PhaseJet, 2> &phi) {
  return dirac_jet(g, f, phi).value();
}

} // namespace

VerificationReport check_structure_relations(const PhasePoint &pt, double tol,
                                             std::uint64_t seed) {
  const PointData d = point_data(pt, 1);
  const auto gens = all_generators();
  auto g = [](int a, int b) { return a == b ? kGeneratorMetric[a] : 0.0; };
  auto m = [&](int a, int b) { return d.M[a][b].value(); };
  Tracker t;
  for (std::size_t x = 0; x < gens.size(); ++x) {
    for (std::size_t y = x + 1; y < gens.size(); ++y) {
      const int a = gens[x].a - 1, b = gens[x].b - 1;
      const int c = gens[y].a - 1, e = gens[y].b - 1;
      const double lhs = algebra_bracket(d.M[a][b], d.M[c][e], d.phi);
      const double rhs = g(a, b) * m(c, e) + g(b, c) * m(a, e) -
                         g(a, c) * m(b, e) - g(b, e) * m(a, c);
      t.add(lhs - rhs, "{" + gens[x].label() + "," + gens[y].label() + "}");
    }
  }
  return t.report("so(4,2) structure relations", tol, seed);
}

VerificationReport check_restrictive_relations(const PhasePoint &pt,
                                               double tol,
                                               std::uint64_t seed) {
  const PointData d = point_data(pt, 0);
  double M[6][6];
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      M[a][b] = d.M[a][b].value();
  Tracker t;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      double s = 0.0;
      for (int c = 0; c < 6; ++c)
        s += M[a][c] * M[b][c] * kGeneratorMetric[c];
      t.add(s, "T_" + idx(a) + idx(b));
    }
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) {
      std::array<int, 4> rest{};
      int n = 0;
      for (int c = 0; c < 6; ++c)
        if (c != a && c != b)
          rest[n++] = c;
      double s = 0.0;
      do {
        const int sign =
            permutation_sign({a, b, rest[0], rest[1], rest[2], rest[3]});
        s += sign * M[rest[0]][rest[1]] * M[rest[2]][rest[3]];
      } while (std::next_permutation(rest.begin(), rest.end()));
      t.add(s, "R^" + idx(a) + idx(b));
    }
  t.add(pseudo_casimir().value(pt), "C~");
  return t.report("restrictive relations", tol, seed);
}

VerificationReport check_sqrtC_relations(const PhasePoint &pt, double tol,
                                         std::uint64_t seed) {
  const PointData d = point_data(pt, 1);
  const Kinematics k = kinematics(d.v);
  const PhaseJet &C = k.C;
  const PhaseJet &s = d.M[4][5];
  auto B = [&](const PhaseJet &f, const PhaseJet &g) {
    return algebra_bracket(f, g, d.phi);
  };
  auto K = [&](int i) -> const PhaseJet & { return d.M[4][i]; };
  auto L = [&](int i) -> const PhaseJet & { return d.M[5][i]; };
  Tracker t;
  for (int i = 0; i < 4; ++i) {
    const std::string I = idx(i);
    t.add(B(C, k.x_low[i]) + 2.0 * L(i).value(), "{C,x_" + I + "}");
    t.add(B(C, L(i)) - 2.0 * C.value() * k.x_low[i].value(),
          "{C,J_" + I + "k x^k}");
    t.add(B(s, K(i)) - L(i).value(), "{sqrt(-C),sqrt(-C) x_" + I + "}");
    t.add(B(s, L(i)) - K(i).value(), "{sqrt(-C),J_" + I + "k x^k}");
    for (int j = 0; j < 4; ++j) {
      const std::string IJ = I + "," + idx(j);
      const double gij = i == j ? kMinkowskiMetric[i] : 0.0;
      t.add(B(K(i), K(j)) - k.J[i][j].value(), "{K_i,K_j} " + IJ);
      t.add(B(L(i), L(j)) + k.J[i][j].value(), "{L_i,L_j} " + IJ);
      t.add(B(K(i), L(j)) + s.value() * gij, "{K_i,L_j} " + IJ);
    }
  }
  return t.report("sqrt(-C) bracket identities", tol, seed);
}

VerificationReport check_first_class(const PhasePoint &pt, double tol,
                                     std::uint64_t seed) {
  const PointData d = point_data(pt, 1);
  Tracker t;
  for (const auto &id : all_generators()) {
    const PhaseJet &m = d.M[id.a - 1][id.b - 1];
    t.add(dirac_jet(d.phi[0], m, d.phi).value(), "{phi1," + id.label() + "}");
    t.add(dirac_jet(d.phi[1], m, d.phi).value(), "{phi2," + id.label() + "}");
  }
  return t.report("constraints first class", tol, seed);
}

VerificationReport check_antisymmetry(const PhasePoint &pt, double tol,
                                      std::uint64_t seed) {
  const PointData d = point_data(pt, 1);
  const auto gens = all_generators();
  Tracker t;
  for (const auto &x : gens)
    for (const auto &y : gens) {
      const PhaseJet &f = d.M[x.a - 1][x.b - 1];
      const PhaseJet &g = d.M[y.a - 1][y.b - 1];
      // Relative to the size of the bracket's terms, |grad f| |grad g|.
      double nf = 0.0, ng = 0.0;
      for (int i = 0; i < 8; ++i) {
        nf += f.gradient(i) * f.gradient(i);
        ng += g.gradient(i) * g.gradient(i);
      }
      const double sum = dirac_jet(f, g, d.phi).value() + dirac_jet(g, f, d.phi).value();
      t.add(sum / std::max(1.0, std::sqrt(nf * ng)), "{" + x.label() + "," + y.label() + "}");
    }
  return t.report("antisymmetry", tol, seed);
}

VerificationReport check_jacobi(
    const PhasePoint &pt, const std::vector<std::array<GeneratorId, 3>> &triples,
    double tol, std::uint64_t seed) {
  const PointData d = point_data(pt, 2);
  Tracker t;
  for (const auto &tr : triples) {
    const PhaseJet &F = d.M[tr[0].a - 1][tr[0].b - 1];
    const PhaseJet &G = d.M[tr[1].a - 1][tr[1].b - 1];
    const PhaseJet &H = d.M[tr[2].a - 1][tr[2].b - 1];
    const double r = dirac_jet(F, dirac_jet(G, H, d.phi), d.phi).value() +
                     dirac_jet(G, dirac_jet(H, F, d.phi), d.phi).value() +
                     dirac_jet(H, dirac_jet(F, G, d.phi), d.phi).value();
    t.add(r, "(" + tr[0].label() + "," + tr[1].label() + "," +
                 tr[2].label() + ")");
  }
  return t.report("Jacobi identity", tol, seed);
}

VerificationReport check_casimir(const PhasePoint &pt, double tol,
                                 std::uint64_t seed) {
  const PointData d = point_data(pt, 1);
  const Kinematics k = kinematics(d.v);
  Tracker t;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      t.add(dirac_jet(k.C, k.J[i][j], d.phi).value(),
            "{C,J_" + idx(i) + idx(j) + "}");
  t.add(-k.C.value() - 2.0 * chart_hamiltonian().value(pt), "-C - 2 H_chart");
  return t.report("Casimir", tol, seed);
}

double dirac_projector_deviation(const PhasePoint &pt) {
  const PhaseVars v = phase_variables(pt, 1);
  const auto phi = constraint_jets(v);
  const FourVector xl = pt.x.lower();
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double engine = dirac_jet(v[i], v[4 + j], phi).value();
      const double closed = (i == j ? 1.0 : 0.0) + pt.x[i] * xl[j];
      worst = std::max(worst, std::abs(engine - closed));
    }
  return worst;
}

} // namespace sga::classical
