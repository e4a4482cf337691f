#pragma once
#include <array>
#include <string>
#include <vector>

#include "core/states.hpp"

namespace qss {

enum class Task { Deterministic, Stochastic };

Task task_from_name(const std::string& name);
std::string task_name(Task task);

enum class Family { Isotropic, Partial, Pure };

Family family_from_name(const std::string& name);
std::string family_name(Family family);

// Input convention throughout: x = x0 + 2*x1 where x0 is the bit consumed by
// basis z=0 and x1 by z=1. Same for y. Outcome index 2 is the undecided
// symbol of the stochastic task.

/// One local channel per input, as a Kraus list (sum K^dagger K = I).
struct Encoding {
  std::array<std::vector<Mat2>, 4> kraus;
};

/// Measurement as an element list; the outcome label is the index.
struct Povm {
  std::vector<Mat4> elements;
};

void validate_povm(const Povm& povm);
void validate_encoding(const Encoding& enc);

/// The unitary X^{x0} Z^{x1} both senders apply on their qubit.
Mat2 encoding_unitary(int x);

/// Both senders' canonical encoding: the four unitaries above as channels.
Encoding canonical_encoding();

/// Two-outcome product measurements for the deterministic task. z=0 reads
/// the computational-basis parity (outcome 0 on the phi sector), z=1 the
/// Hadamard-basis parity (outcome 0 on the span of phi+ and psi+).
std::pair<Povm, Povm> product_measurements();

/// Three-outcome partial Bell-state analysers for the stochastic task.
/// z=0: {psi+ -> 0, psi- -> 1, phi+ + phi- -> undecided};
/// z=1: {phi- -> 0, psi- -> 1, phi+ + psi+ -> undecided}.
/// Labels are fixed so the ideal protocol on phi+ scores
/// R_scrt = R_ctrl = 1; that condition pins them uniquely.
std::pair<Povm, Povm> partial_bell_measurements();

struct Behavior {
  Task task;
  // p[z][x][y][a]; a < outcome_count().
  std::array<std::array<std::array<std::array<double, 3>, 4>, 4>, 2> p{};

  int outcome_count() const { return task == Task::Deterministic ? 2 : 3; }
};

void validate_behavior(const Behavior& b);

/// p(a|x,y,z) = Tr[(enc_b_x (x) enc_c_y)(rho) M_{a|z}].
Behavior evaluate(const DensityMatrix& rho, const Encoding& enc_b, const Encoding& enc_c,
                  const Povm& meas_z0, const Povm& meas_z1, Task task);

/// The canonical protocol for the task applied to the given source state.
Behavior evaluate_canonical(Task task, const DensityMatrix& rho);

// Score normalizations. Deterministic: per_z[z] sums p(a = x_z xor y_z)
// over the 16 (x,y) with weight 1/32, so S = per_z[0] + per_z[1].
// Stochastic: secret_z[z] averages p(a = secret) over the 8 relevant (x,y)
// (weight 1/8), control_z[z] averages p(undecided) over the 8 others;
// R_scrt and R_ctrl are means over z and R = (R_scrt + R_ctrl) / 2.
struct Scores {
  Task task;
  double total = 0.0;
  std::array<double, 2> per_z{};      // deterministic contributions
  double secret = 0.0;                // R_scrt
  double control = 0.0;               // R_ctrl
  std::array<double, 2> secret_z{};
  std::array<double, 2> control_z{};
};

Scores score(const Behavior& b);

/// Published closed forms: deterministic isotropic (1+v)/2, deterministic
/// partial (2 + v(1+sin 2theta))/4, deterministic pure (3 + sin 2theta)/4,
/// stochastic isotropic R = (3+5v)/8 with R_scrt = (1+3v)/4 and
/// R_ctrl = (1+v)/2. Other combinations have no closed form and throw.
Scores closed_form(Task task, Family family, double v, double theta);

/// Classical bound the task must beat: 3/4 or 5/8.
double classical_bound(Task task);

/// Smallest v in [0,1] where the canonical protocol's score crosses the
/// classical bound, by bisection to 1e-6. Asserts monotonicity in v first.
double threshold(Task task, Family family, double theta);

/// The state the family denotes. Pure ignores v; isotropic ignores theta.
DensityMatrix family_state(Family family, double v, double theta);

// Input relabelings that leave both score functionals invariant: flipping
// x0 and y0 together, flipping x1 and y1 together, and swapping the bit
// roles of both parties (which also swaps z).
enum class InputSymmetry { FlipBit0, FlipBit1, SwapBits };

Behavior permute_inputs(const Behavior& b, InputSymmetry sym);

}  // namespace qss
