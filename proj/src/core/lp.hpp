#pragma once
#include <vector>

namespace qss {

/// Supplies columns for the equality system A x = b, x >= 0, on demand.
/// price() must return a column maximizing (or at least exceeding tol in)
/// the inner product with the dual vector y, writing it to col_out, or
/// return false when no column has y . col > tol. Exact maximization gives
/// the usual Dantzig pivot; any positive-violation column still converges.
class ColumnSource {
 public:
  virtual ~ColumnSource() = default;
  virtual bool price(const std::vector<double>& y, double tol,
                     std::vector<double>& col_out) = 0;
};

enum class LpStatus { Feasible, Infeasible };

struct PhaseOneResult {
  LpStatus status;
  double artificial_mass = 0.0;  // optimal sum of artificial variables
  int iterations = 0;
};

/// Phase-I feasibility test: minimizes the total artificial mass of
/// A x = b, x >= 0, with columns drawn from the source. Feasible when the
/// optimum is <= 1e-8, infeasible when >= 1e-6, and SolverFailure in the
/// ambiguous band between. Uses an explicit basis inverse with a
/// lexicographic ratio test, so it terminates without anti-cycling rules
/// on the entering side.
PhaseOneResult phase_one_feasible(const std::vector<double>& b,
                                  ColumnSource& source);

}  // namespace qss
