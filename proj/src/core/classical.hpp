#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "core/protocol.hpp"

namespace qss {

// One-bit relay strategies. Bob sends f(x), Charlie sends g(y), Alice
// decodes h(m_b, m_c, z). Table packings: bit x of f_id is f(x) (same for
// g); h is indexed by cell = (z << 2) | (m_b << 1) | m_c, stored as the
// cell-th bit of h_id for the deterministic task and the cell-th base-3
// digit for the stochastic one (digit 2 is the undecided outcome).
struct ClassicalStrategy {
  int f_id = 0;
  int g_id = 0;
  int h_id = 0;
};

int strategy_outcome(Task task, const ClassicalStrategy& s, int x, int y, int z);

/// Pareto point of the stochastic trade-off, in exact counts out of 16.
struct FrontierPoint {
  int scrt_count = 0;
  int ctrl_count = 0;
  ClassicalStrategy strategy;  // first strategy achieving the point
  bool on_hull = false;        // lies on the upper concave envelope
};

struct ClassicalReport {
  Task task;
  // Exact rational maximum: best_numerator / 32 (deterministic correct
  // count; stochastic scrt+ctrl count, since R = (scrt + ctrl) / 32).
  int best_numerator = 0;
  ClassicalStrategy best_strategy;
  std::int64_t strategies_enumerated = 0;
  std::vector<FrontierPoint> frontier;  // stochastic only, sorted by scrt
};

/// Exhaustive maximum over all deterministic relay strategies. Shared
/// randomness cannot beat this for a linear score functional (the maximum
/// of a linear function over a convex mixture is attained at a vertex), so
/// the value is also the randomized-classical bound; that standard fact is
/// relied on, not re-proved here.
ClassicalReport enumerate_classical(Task task);

/// Same enumeration with the f, g, h loops visited in a seeded shuffled
/// order. Independent oracle against iteration bookkeeping bugs: the best
/// value and the frontier point set must match enumerate_classical.
ClassicalReport enumerate_classical_shuffled(Task task, std::uint64_t seed);

/// Deterministic 0/1 behavior table of a strategy.
Behavior strategy_to_behavior(Task task, const ClassicalStrategy& s);

/// Columns: Rscrt,Rctrl,f_id,g_id,h_id.
std::string frontier_csv(const ClassicalReport& report);

}  // namespace qss
