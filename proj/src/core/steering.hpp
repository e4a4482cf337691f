#pragma once
#include <array>
#include <string>
#include <vector>

#include "core/lp.hpp"
#include "core/protocol.hpp"
#include "core/states.hpp"

namespace qss {

using Vec3 = std::array<double, 3>;

// Antipodally symmetric set of Bloch vectors with its convex-hull metrics.
// Unit vertices make the circumradius 1; the inradius is the radius of the
// largest origin-centered ball inside the hull, so any unit direction
// shrunk by r_in lies in the hull.
struct BlochPolytope {
  std::vector<Vec3> vertices;               // +/- paired unit vectors
  std::vector<std::array<int, 3>> faces;    // triangle faces when known
  double r_in = 0.0;
  double r_out = 1.0;
  std::string name;
};

BlochPolytope octahedron();
BlochPolytope icosahedron();
/// Icosahedron subdivided `level` times and reprojected to the sphere:
/// 42, 162, 642 vertices for levels 1, 2, 3.
BlochPolytope icosphere(int level);
/// +/- expansion of explicit axes; inradius by exhaustive facet search.
BlochPolytope axes_polytope(const std::vector<Vec3>& axes,
                            const std::string& name);

/// Measurement polytopes by refinement level: level 1 is the icosahedron
/// (6 axes); levels 2 and 3 pick 13 axes greedily (maximizing hull
/// inradius) from subdivided-icosahedron axis pools of 21 and 81 axes.
const BlochPolytope& measurement_polytope(int level);
/// Shared state-space polytope for local-hidden-state ensembles.
const BlochPolytope& state_polytope();

BlochPolytope scaled(const BlochPolytope& p, double factor);

double hull_inradius(const std::vector<Vec3>& points);

enum class Direction { BtoC, CtoB };

/// Local-hidden-state feasibility: can the assemblage created by measuring
/// the `dir` side of rho along every +/- axis of `meas` be reproduced by an
/// ensemble of states drawn from the hull of `state_poly`? Pure phase-I LP
/// with column generation over the 2^N deterministic response functions.
LpStatus lhs_feasible(const DensityMatrix& rho, const BlochPolytope& meas,
                      const BlochPolytope& state_poly, Direction dir,
                      int* iterations = nullptr);

enum class SteeringStatus { CertifiedUnsteerable, CertifiedSteerable, Undecided };

struct SteeringVerdict {
  SteeringStatus status = SteeringStatus::Undecided;
  // Direction of the decisive infeasibility for steerable verdicts;
  // unsteerable verdicts always cover both directions.
  Direction direction = Direction::BtoC;
  int level = 0;       // refinement level that decided, 0 if undecided
  double shrink = 0.0; // measurement-polytope inradius used by the certificate
  int lp_iterations = 0;
  std::string detail;
};

/// One-sided certificates, cumulative over refinement levels 1..level.
/// Unsteerable: undo the measurement-polytope shrink on each measuring
/// side in turn (valid only while the result stays a state) and require
/// the vertex LHS to exist with the inner state polytope in both
/// directions. Steerable: require LHS infeasibility for the raw state with
/// an outer (circumscribed) state polytope in some direction, trying both
/// the level's axes and the three Pauli axes. The two certificates can
/// never both fire for the same state.
SteeringVerdict certify(const DensityMatrix& rho, int level = 3);

std::vector<SteeringVerdict> certify_batch(const std::vector<DensityMatrix>& states,
                                           int level);

/// Largest v (to 1e-3) in the family certified unsteerable at the level.
/// Asserts monotonicity of the certificate across the bisection samples.
double certified_visibility(Family family, double theta, int level);

std::string verdict_json(const SteeringVerdict& v);

}  // namespace qss
