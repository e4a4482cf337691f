#include "core/lp.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

#include "core/qmath.hpp"

namespace qss {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasibleTol = 1e-8;
constexpr double kInfeasibleTol = 1e-6;
constexpr int kMaxIterations = 20000;

}  // namespace

PhaseOneResult phase_one_feasible(const std::vector<double>& b,
                                  ColumnSource& source) {
  const std::size_t m = b.size();
  require(m > 0, "empty constraint system");

  // Orient every row so the right-hand side is nonnegative; the initial
  // all-artificial basis is then the identity and the tableau rows
  // [x_i | B^-1 row] start lexicographically positive, which the ratio
  // test below preserves. Columns from the source are flipped to match.
  std::vector<double> flip(m, 1.0);
  std::vector<double> x(m);  // basic values, all artificial initially
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] < 0.0) flip[i] = -1.0;
    x[i] = std::abs(b[i]);
  }

  std::vector<std::vector<double>> binv(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) binv[i][i] = 1.0;
  std::vector<bool> basic_is_artificial(m, true);

  std::vector<double> y(m);
  std::vector<double> y_source(m);
  std::vector<double> col(m);
  std::vector<double> d(m);

  PhaseOneResult result;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    // Dual vector for phase-I costs (artificials cost 1, structurals 0):
    // y = c_B B^-1, i.e. the column sums of B^-1 over artificial rows.
    for (std::size_t jcol = 0; jcol < m; ++jcol) {
      double sum = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (basic_is_artificial[i]) sum += binv[i][jcol];
      }
      y[jcol] = sum;
    }
    for (std::size_t i = 0; i < m; ++i) y_source[i] = flip[i] * y[i];

    if (!source.price(y_source, kPivotTol, col)) break;
    require(col.size() == m, "column has wrong dimension");
    for (std::size_t i = 0; i < m; ++i) col[i] *= flip[i];

    for (std::size_t i = 0; i < m; ++i) {
      double sum = 0.0;
      for (std::size_t jcol = 0; jcol < m; ++jcol) sum += binv[i][jcol] * col[jcol];
      d[i] = sum;
    }

    // Lexicographic ratio test over {i : d_i > tol}: minimize x_i / d_i,
    // breaking ties by the lexicographic order of B^-1 rows scaled by d_i.
    std::ptrdiff_t leave = -1;
    for (std::size_t i = 0; i < m; ++i) {
      if (d[i] <= kPivotTol) continue;
      if (leave < 0) {
        leave = static_cast<std::ptrdiff_t>(i);
        continue;
      }
      const std::size_t l = static_cast<std::size_t>(leave);
      const double diff = x[i] * d[l] - x[l] * d[i];
      bool better = false;
      if (diff < -1e-12) {
        better = true;
      } else if (diff <= 1e-12) {
        for (std::size_t jcol = 0; jcol < m; ++jcol) {
          const double lex = binv[i][jcol] * d[l] - binv[l][jcol] * d[i];
          if (lex < -1e-12) {
            better = true;
            break;
          }
          if (lex > 1e-12) break;
        }
      }
      if (better) leave = static_cast<std::ptrdiff_t>(i);
    }
    if (leave < 0) {
      // Phase-I objective is bounded below by zero, so an unbounded ray
      // can only be numerical breakage.
      throw Error(ErrorCode::SolverFailure, "phase-I ratio test found no pivot");
    }

    const std::size_t r = static_cast<std::size_t>(leave);
    const double pivot = d[r];
    for (std::size_t jcol = 0; jcol < m; ++jcol) binv[r][jcol] /= pivot;
    x[r] /= pivot;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || std::abs(d[i]) < 1e-15) continue;
      const double factor = d[i];
      for (std::size_t jcol = 0; jcol < m; ++jcol) {
        binv[i][jcol] -= factor * binv[r][jcol];
      }
      x[i] -= factor * x[r];
      if (x[i] < 0.0 && x[i] > -1e-12) x[i] = 0.0;
    }
    basic_is_artificial[r] = false;
    result.iterations = iter + 1;
  }

  double mass = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (basic_is_artificial[i]) mass += x[i];
  }
  result.artificial_mass = mass;
  if (mass <= kFeasibleTol) {
    // A vanished artificial mass is a feasibility certificate even if the
    // iteration cap stopped the loop.
    result.status = LpStatus::Feasible;
    return result;
  }
  if (result.iterations >= kMaxIterations) {
    throw Error(ErrorCode::SolverFailure, "phase-I iteration cap reached");
  }
  if (mass >= kInfeasibleTol) {
    result.status = LpStatus::Infeasible;
  } else {
    throw Error(ErrorCode::SolverFailure,
                "phase-I optimum in the ambiguous tolerance band");
  }
  return result;
}

}  // namespace qss
