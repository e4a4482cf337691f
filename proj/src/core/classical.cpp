#include "core/classical.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

#include "core/qmath.hpp"
#include "core/rng.hpp"

namespace qss {
namespace {

constexpr int kCells = 8;       // (z, m_b, m_c)
constexpr int kDetTables = 256;  // 2^8 decode tables
constexpr int kStochTables = 6561;  // 3^8 decode tables

int cell_index(int z, int mb, int mc) { return (z << 2) | (mb << 1) | mc; }

int det_digit(int h_id, int cell) { return (h_id >> cell) & 1; }

const std::array<std::array<std::int8_t, kCells>, kStochTables>& stoch_digits() {
  static const auto table = [] {
    std::array<std::array<std::int8_t, kCells>, kStochTables> t{};
    for (int h = 0; h < kStochTables; ++h) {
      int rest = h;
      for (int cell = 0; cell < kCells; ++cell) {
        t[h][cell] = static_cast<std::int8_t>(rest % 3);
        rest /= 3;
      }
    }
    return t;
  }();
  return table;
}

// Per-(f, g) counting tables over the 16 input pairs.
struct PairCounts {
  // det_correct[cell][a]: inputs mapped to the cell whose parity bit is a.
  std::array<std::array<int, 2>, kCells> det_correct{};
  // scrt[cell][a]: relevant rounds in the cell whose secret bit is a.
  std::array<std::array<int, 2>, kCells> scrt{};
  // ctrl[cell]: control rounds in the cell.
  std::array<int, kCells> ctrl{};
};

PairCounts count_pairs(int f_id, int g_id) {
  PairCounts c{};
  for (int x = 0; x < 4; ++x) {
    const int mb = (f_id >> x) & 1;
    for (int y = 0; y < 4; ++y) {
      const int mc = (g_id >> y) & 1;
      for (int z = 0; z < 2; ++z) {
        const int cell = cell_index(z, mb, mc);
        const int parity = ((x >> z) & 1) ^ ((y >> z) & 1);
        ++c.det_correct[cell][parity];
        if (parity == 1) {
          const int secret = ((x >> (1 - z)) & 1) ^ ((y >> (1 - z)) & 1);
          ++c.scrt[cell][secret];
        } else {
          ++c.ctrl[cell];
        }
      }
    }
  }
  return c;
}

struct Grid {
  // first[scrt][ctrl] holds the first strategy reaching the count pair,
  // or f_id = -1 when unreached.
  std::array<std::array<ClassicalStrategy, 17>, 17> first;
  std::array<std::array<bool, 17>, 17> reached{};
};

void mark(Grid& grid, int scrt, int ctrl, const ClassicalStrategy& s) {
  if (!grid.reached[scrt][ctrl]) {
    grid.reached[scrt][ctrl] = true;
    grid.first[scrt][ctrl] = s;
  }
}

std::vector<FrontierPoint> pareto_frontier(const Grid& grid) {
  // A count pair is Pareto optimal when no reached pair is at least as
  // large in both coordinates and strictly larger in one.
  std::vector<FrontierPoint> frontier;
  int best_ctrl_above = -1;  // max ctrl over scrt' > current scrt
  for (int scrt = 16; scrt >= 0; --scrt) {
    int row_best = -1;
    for (int ctrl = 16; ctrl >= 0; --ctrl) {
      if (grid.reached[scrt][ctrl]) {
        row_best = ctrl;
        break;
      }
    }
    if (row_best > best_ctrl_above) {
      FrontierPoint p;
      p.scrt_count = scrt;
      p.ctrl_count = row_best;
      p.strategy = grid.first[scrt][row_best];
      frontier.push_back(p);
      best_ctrl_above = row_best;
    }
  }
  std::sort(frontier.begin(), frontier.end(),
            [](const FrontierPoint& a, const FrontierPoint& b) {
              return a.scrt_count < b.scrt_count;
            });
  return frontier;
}

long long cross2(const FrontierPoint& a, const FrontierPoint& b,
                 const FrontierPoint& c) {
  return static_cast<long long>(b.scrt_count - a.scrt_count) *
             (c.ctrl_count - a.ctrl_count) -
         static_cast<long long>(b.ctrl_count - a.ctrl_count) *
             (c.scrt_count - a.scrt_count);
}

void flag_hull(std::vector<FrontierPoint>& frontier) {
  // Upper concave envelope of the Pareto staircase (monotone chain over
  // points already sorted by scrt ascending, ctrl strictly descending).
  // A point is flagged when it lies on the envelope, whether as a vertex
  // or in the interior of an edge.
  std::vector<int> hull;  // vertex indices into frontier
  for (int i = 0; i < static_cast<int>(frontier.size()); ++i) {
    while (hull.size() >= 2 &&
           cross2(frontier[hull[hull.size() - 2]],
                  frontier[hull[hull.size() - 1]], frontier[i]) >= 0) {
      hull.pop_back();  // middle point lies on or below the chord
    }
    hull.push_back(i);
  }
  for (std::size_t v = 0; v + 1 < hull.size(); ++v) {
    frontier[hull[v]].on_hull = true;
    for (int i = hull[v] + 1; i < hull[v + 1]; ++i) {
      if (cross2(frontier[hull[v]], frontier[i], frontier[hull[v + 1]]) == 0) {
        frontier[i].on_hull = true;  // collinear, sits on the edge
      }
    }
  }
  if (!hull.empty()) frontier[hull.back()].on_hull = true;
}

std::vector<int> iota_order(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

ClassicalReport enumerate_impl(Task task, const std::vector<int>& f_order,
                               const std::vector<int>& g_order,
                               const std::vector<int>& h_order) {
  ClassicalReport report;
  report.task = task;
  report.best_numerator = -1;
  Grid grid{};

  const bool det = task == Task::Deterministic;
  const auto& digits = stoch_digits();
  for (int f_id : f_order) {
    for (int g_id : g_order) {
      const PairCounts c = count_pairs(f_id, g_id);
      for (int h_id : h_order) {
        int numerator;
        if (det) {
          int correct = 0;
          for (int cell = 0; cell < kCells; ++cell) {
            correct += c.det_correct[cell][det_digit(h_id, cell)];
          }
          numerator = correct;
        } else {
          int scrt = 0;
          int ctrl = 0;
          const auto& d = digits[h_id];
          for (int cell = 0; cell < kCells; ++cell) {
            if (d[cell] == 2) {
              ctrl += c.ctrl[cell];
            } else {
              scrt += c.scrt[cell][d[cell]];
            }
          }
          numerator = scrt + ctrl;
          mark(grid, scrt, ctrl, ClassicalStrategy{f_id, g_id, h_id});
        }
        if (numerator > report.best_numerator) {
          report.best_numerator = numerator;
          report.best_strategy = ClassicalStrategy{f_id, g_id, h_id};
        }
        ++report.strategies_enumerated;
      }
    }
  }

  if (!det) {
    report.frontier = pareto_frontier(grid);
    flag_hull(report.frontier);
  }
  return report;
}

std::vector<int> shuffled(int n, Rng& rng) {
  std::vector<int> order = iota_order(n);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_u64() % (i + 1));
    std::swap(order[i], order[j]);
  }
  return order;
}

}  // namespace

int strategy_outcome(Task task, const ClassicalStrategy& s, int x, int y, int z) {
  require(x >= 0 && x < 4 && y >= 0 && y < 4 && (z == 0 || z == 1),
          "inputs out of range");
  const int tables = task == Task::Deterministic ? kDetTables : kStochTables;
  require(s.f_id >= 0 && s.f_id < 16 && s.g_id >= 0 && s.g_id < 16 &&
              s.h_id >= 0 && s.h_id < tables,
          "strategy id out of range");
  const int cell = cell_index(z, (s.f_id >> x) & 1, (s.g_id >> y) & 1);
  if (task == Task::Deterministic) return det_digit(s.h_id, cell);
  return stoch_digits()[s.h_id][cell];
}

ClassicalReport enumerate_classical(Task task) {
  const int tables = task == Task::Deterministic ? kDetTables : kStochTables;
  return enumerate_impl(task, iota_order(16), iota_order(16),
                        iota_order(tables));
}

ClassicalReport enumerate_classical_shuffled(Task task, std::uint64_t seed) {
  const int tables = task == Task::Deterministic ? kDetTables : kStochTables;
  Rng rng(seed);
  return enumerate_impl(task, shuffled(16, rng), shuffled(16, rng),
                        shuffled(tables, rng));
}

Behavior strategy_to_behavior(Task task, const ClassicalStrategy& s) {
  Behavior b;
  b.task = task;
  for (int z = 0; z < 2; ++z) {
    for (int x = 0; x < 4; ++x) {
      for (int y = 0; y < 4; ++y) {
        for (int a = 0; a < 3; ++a) b.p[z][x][y][a] = 0.0;
        b.p[z][x][y][strategy_outcome(task, s, x, y, z)] = 1.0;
      }
    }
  }
  validate_behavior(b);
  return b;
}

std::string frontier_csv(const ClassicalReport& report) {
  require(report.task == Task::Stochastic,
          "frontier is defined for the stochastic task");
  std::ostringstream out;
  out << "Rscrt,Rctrl,f_id,g_id,h_id\n";
  for (const FrontierPoint& p : report.frontier) {
    out << (p.scrt_count / 16.0) << ',' << (p.ctrl_count / 16.0) << ','
        << p.strategy.f_id << ',' << p.strategy.g_id << ',' << p.strategy.h_id
        << '\n';
  }
  return out.str();
}

}  // namespace qss
