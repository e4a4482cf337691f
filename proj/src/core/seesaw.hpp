#pragma once
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "core/protocol.hpp"
#include "core/qmath.hpp"

namespace qss {

// Entanglement-free qubit strategy: Bob and Charlie send message states,
// Alice measures the received pair.
struct QubitStrategy {
  std::array<Mat2, 4> beta;
  std::array<Mat2, 4> gamma;
  std::array<std::vector<Mat4>, 2> povm;  // indexed by basis z
};

void validate_strategy(Task task, const QubitStrategy& s);

/// Behavior table p(a|x,y,z) = Tr[(beta_x (x) gamma_y) M_{a|z}].
Behavior strategy_behavior(Task task, const QubitStrategy& s);

double qubit_objective(Task task, const QubitStrategy& s);

/// Optimal relay strategy embedded in qubit form: basis-state messages
/// carrying the first input bit and diagonal parity measurements. Scores
/// exactly 3/4 (deterministic) or 5/8 (stochastic) before any sweep.
QubitStrategy classical_embedding(Task task);

/// Projector onto the non-negative eigenspace of w0 - w1, the exact
/// maximizer of Tr[w0 M] + Tr[w1 (I - M)] over 0 <= M <= I.
Mat4 helstrom_projector(const Mat4& w0, const Mat4& w1);

/// One pass of optimal message-state updates (Bob's states, then
/// Charlie's). Each state becomes the top eigenvector of its weighted
/// reduced score operator; the objective never decreases.
void update_states(Task task, QubitStrategy& s);

/// One pass of measurement updates per basis. Two-outcome bases use the
/// exact Helstrom rule; three-outcome bases pick the best eigen-assignment
/// candidate and keep the previous measurement unless the objective is at
/// least maintained.
void update_measurements(Task task, QubitStrategy& s);

struct SeesawRestart {
  double value = 0.0;
  int sweeps = 0;
};

struct SeesawReport {
  Task task;
  double best = 0.0;
  QubitStrategy best_strategy;
  std::vector<SeesawRestart> restarts;
};

/// Alternating maximization over message states and measurements. Restart
/// 0 seeds from classical_embedding so the known optimum is always
/// attained; further restarts use seeded random strategies. Each restart
/// sweeps until the per-sweep gain drops below 1e-10 or 500 sweeps pass,
/// and throws SolverFailure if the objective ever decreases.
SeesawReport seesaw(Task task, int restarts, std::uint64_t seed);

std::string seesaw_report_json(const SeesawReport& report);

}  // namespace qss
