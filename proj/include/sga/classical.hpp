#pragma once

// Dirac-bracket engine on the constrained phase space of a particle on the
// hyperboloid, and the fifteen so(4,2) generators built from it.
//
// Phase-space coordinates are the flat R^8 chart (x^1..x^4, p_1..p_4):
// x carries an upper index, p a lower one, and the canonical Poisson bracket
// is {x^i, p_j} = delta^i_j. The second-class pair phi1 = x.x + 1,
// phi2 = x^i p_i is removed with the usual Dirac construction.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sga/geometry.hpp"
#include "sga/jet.hpp"

namespace sga::classical {

using PhaseJet = Jet<double, 8>;
using PhaseVars = std::array<PhaseJet, 8>;

struct PhasePoint {
  FourVector x; // contravariant x^i
  FourVector p; // covariant p_i
};

// Validates x.x = -1 and x^i p_i = 0 to within `tol`.
PhasePoint make_phase_point(const FourVector &x, const FourVector &p,
                            double tol = 1e-12);

// Deterministic constrained points: Gaussian spatial x lifted to the sheet, p a Gaussian
// vector projected onto x^i p_i = 0. Points with -C below `min_energy` are
// redrawn.
std::vector<PhasePoint> sample_phase_points(std::size_t count,
                                            std::uint64_t seed,
                                            double radius_scale = 2.0,
                                            double min_energy = 1e-8);

class Observable {
public:
  using Evaluator = std::function<PhaseJet(const PhaseVars &)>;

  Observable(std::string name, Evaluator eval)
      : name_(std::move(name)), eval_(std::move(eval)) {}

  const std::string &name() const { return name_; }
  PhaseJet evaluate(const PhasePoint &pt, int order) const;
  PhaseJet evaluate(const PhaseVars &vars) const { return eval_(vars); }
  double value(const PhasePoint &pt) const;
  std::array<double, 8> gradient(const PhasePoint &pt) const;

private:
  std::string name_;
  Evaluator eval_;
};

PhaseVars phase_variables(const PhasePoint &pt, int order);

// Elementary observables; indices are zero-based 0..3.
Observable coordinate(int i);           // x^i
Observable coordinate_lower(int i);     // x_i
Observable momentum(int i);             // p_i
Observable angular_momentum(int i, int j); // J_ij = x_i p_j - x_j p_i
Observable casimir();                   // C = 1/2 J_ij J^ij
Observable pseudo_casimir();            // eps^{ijkl} J_ij J_kl
Observable constraint(int which);       // 0: x.x + 1, 1: x^i p_i
// 1/2 (pi_a^2 + (x_a pi_a)^2) with chart momenta pi_a = p_a + p_4 x^a / x^4.
Observable chart_hamiltonian();

// M_ab with 1 <= a < b <= 6.
struct GeneratorId {
  int a;
  int b;
  GeneratorId(int a_, int b_);
  std::string label() const;
};

std::vector<GeneratorId> all_generators();

// Diagonal of the so(4,2) metric, 1-based index.
double generator_metric(int a);

Observable realize_generator(GeneratorId id);

// Which argument carries the momentum in the elementary bracket. The
// so(4,2) relations below hold in the momentum-first orientation
// {p_j, x^i} = delta^i_j, which is the negative of the canonical one.
enum class Orientation { canonical, momentum_first };

PhaseJet poisson_jet(const PhaseJet &f, const PhaseJet &g);
PhaseJet dirac_jet(const PhaseJet &f, const PhaseJet &g,
                   const std::array<PhaseJet, 2> &constraints);

double canonical_poisson(const Observable &f, const Observable &g,
                         const PhasePoint &pt);
double dirac_bracket(const Observable &f, const Observable &g,
                     const PhasePoint &pt,
                     Orientation orientation = Orientation::canonical);

// {f, {g, h}} + cyclic, all Dirac brackets.
double jacobi_residual(const Observable &f, const Observable &g,
                       const Observable &h, const PhasePoint &pt);

struct VerificationReport {
  std::string relation;
  std::uint64_t point_seed = 0;
  double residual_max = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string worst; // item attaining residual_max

  nlohmann::json to_json() const;
};

// Max over 105 generator pairs of the so(4,2) structure residual.
VerificationReport check_structure_relations(const PhasePoint &pt, double tol,
                                             std::uint64_t seed = 0);
// T_ab, R^ab and the pseudoscalar Casimir.
VerificationReport check_restrictive_relations(const PhasePoint &pt,
                                               double tol,
                                               std::uint64_t seed = 0);
// Brackets of C and sqrt(-C) with x_i and J_ik x^k.
VerificationReport check_sqrtC_relations(const PhasePoint &pt, double tol,
                                         std::uint64_t seed = 0);
// Dirac brackets of both constraints with every generator.
VerificationReport check_first_class(const PhasePoint &pt, double tol,
                                     std::uint64_t seed = 0);
// Residual relative to max(1, |grad f| |grad g|).
VerificationReport check_antisymmetry(const PhasePoint &pt, double tol,
                                      std::uint64_t seed = 0);
VerificationReport check_jacobi(const PhasePoint &pt,
                                const std::vector<std::array<GeneratorId, 3>> &triples,
                                double tol, std::uint64_t seed = 0);
// {C, J_ij} = 0 and -C = 2 H_chart.
VerificationReport check_casimir(const PhasePoint &pt, double tol,
                                 std::uint64_t seed = 0);

// Closed form of the mixed coordinate/momentum Dirac bracket read off from
// the generic construction: {x^i, p_j}_D = delta^i_j + x^i x_j. Returns the
// largest deviation of the engine from that form at `pt`.
double dirac_projector_deviation(const PhasePoint &pt);
inline constexpr const char *kDiracProjectorForm =
    "{x^i, p_j}_D = delta^i_j + x^i x_j  (canonical orientation {x^i,p_j} = delta^i_j)";

} // namespace sga::classical
