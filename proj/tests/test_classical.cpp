#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>
#include <tuple>
#include <vector>

#include "core/classical.hpp"
#include "core/protocol.hpp"
#include "core/qmath.hpp"
#include "core/rng.hpp"

using namespace qss;

namespace {

// Reference score from first principles: walk all inputs and count.
struct RefCounts {
  int det_correct = 0;  // out of 32
  int scrt = 0;         // out of 16
  int ctrl = 0;         // out of 16
};

RefCounts reference_counts(Task task, const ClassicalStrategy& s) {
  RefCounts r;
  for (int z = 0; z < 2; ++z) {
    for (int x = 0; x < 4; ++x) {
      for (int y = 0; y < 4; ++y) {
        const int a = strategy_outcome(task, s, x, y, z);
        const int parity = ((x >> z) & 1) ^ ((y >> z) & 1);
        if (task == Task::Deterministic) {
          if (a == parity) ++r.det_correct;
        } else if (parity == 1) {
          const int secret = ((x >> (1 - z)) & 1) ^ ((y >> (1 - z)) & 1);
          if (a == secret) ++r.scrt;
        } else if (a == 2) {
          ++r.ctrl;
        }
      }
    }
  }
  return r;
}

// Strategy published alongside the stochastic bound: both parties relay
// their first input bit; on z = 1 Alice announces the parity, on z = 0 she
// stays silent when the parity is even and guesses 0 otherwise.
ClassicalStrategy relay_strategy() {
  ClassicalStrategy s;
  s.f_id = 0b1010;
  s.g_id = 0b1010;
  int h = 0;
  int pow3 = 1;
  for (int cell = 0; cell < 8; ++cell, pow3 *= 3) {
    const int z = cell >> 2;
    const int parity = ((cell >> 1) & 1) ^ (cell & 1);
    int digit;
    if (z == 1) {
      digit = parity;
    } else {
      digit = parity == 0 ? 2 : 0;
    }
    h += digit * pow3;
  }
  s.h_id = h;
  return s;
}

// Both parties relay the parity of their two input bits. On a relevant
// round the secret equals the complement of the combined relayed parity
// regardless of z, so always answering scores every relevant round but
// never flags a control round.
ClassicalStrategy parity_strategy() {
  ClassicalStrategy s;
  s.f_id = 0b0110;
  s.g_id = 0b0110;
  int h = 0;
  int pow3 = 1;
  for (int cell = 0; cell < 8; ++cell, pow3 *= 3) {
    const int parity = ((cell >> 1) & 1) ^ (cell & 1);
    h += (parity ^ 1) * pow3;
  }
  s.h_id = h;
  return s;
}

// Relay the first bit again, but Alice answers only on z = 0 rounds whose
// relayed parity is odd and stays silent everywhere else. Every control
// round is flagged, at the price of most of the secret rate.
ClassicalStrategy silent_strategy() {
  ClassicalStrategy s;
  s.f_id = 0b1010;
  s.g_id = 0b1010;
  int h = 0;
  int pow3 = 1;
  for (int cell = 0; cell < 8; ++cell, pow3 *= 3) {
    const int z = cell >> 2;
    const int parity = ((cell >> 1) & 1) ^ (cell & 1);
    h += (z == 0 && parity == 1 ? 0 : 2) * pow3;
  }
  s.h_id = h;
  return s;
}

}  // namespace

TEST_CASE("deterministic maximum is exactly 3/4") {
  const ClassicalReport report = enumerate_classical(Task::Deterministic);
  CHECK(report.strategies_enumerated == 16 * 16 * 256);
  CHECK(report.best_numerator == 24);  // 24/32
  CHECK(report.frontier.empty());

  const RefCounts r = reference_counts(Task::Deterministic, report.best_strategy);
  CHECK(r.det_correct == 24);
}

TEST_CASE("stochastic maximum is exactly 5/8") {
  const ClassicalReport report = enumerate_classical(Task::Stochastic);
  CHECK(report.strategies_enumerated == 16LL * 16 * 6561);
  CHECK(report.best_numerator == 20);  // (scrt + ctrl)/32 = 5/8

  const RefCounts r = reference_counts(Task::Stochastic, report.best_strategy);
  CHECK(r.scrt + r.ctrl == 20);
}

TEST_CASE("relay strategy scores (3/4, 1/2) and sits on the frontier") {
  const ClassicalStrategy s = relay_strategy();
  const RefCounts r = reference_counts(Task::Stochastic, s);
  CHECK(r.scrt == 12);
  CHECK(r.ctrl == 8);

  const Behavior b = strategy_to_behavior(Task::Stochastic, s);
  const Scores scores = score(b);
  CHECK(scores.secret == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(scores.control == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(scores.total == doctest::Approx(0.625).epsilon(1e-15));

  const ClassicalReport report = enumerate_classical(Task::Stochastic);
  bool found = false;
  for (const FrontierPoint& p : report.frontier) {
    if (p.scrt_count == 12 && p.ctrl_count == 8) {
      found = true;
      CHECK(p.on_hull);
    }
  }
  CHECK(found);
}

TEST_CASE("exact frontier staircase") {
  // Ground truth from exhaustive enumeration, cross-checked by the two
  // hand-built strategies below which achieve both extreme points. The
  // maximum-R face (count sum 20, R = 5/8) runs from (4,16) to (12,8), so
  // on that face the secret rate is capped at 3/4 and reaches it, while
  // the control rate spans [1/2, 1]. A perfect secret rate is classically
  // reachable, but only with a vanishing control rate.
  const ClassicalReport report = enumerate_classical(Task::Stochastic);

  const std::vector<std::tuple<int, int, bool>> expected = {
      {4, 16, true}, {6, 14, true},  {8, 12, true}, {10, 10, true},
      {12, 8, true}, {14, 2, false}, {16, 0, true},
  };
  REQUIRE(report.frontier.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(report.frontier[i].scrt_count == std::get<0>(expected[i]));
    CHECK(report.frontier[i].ctrl_count == std::get<1>(expected[i]));
    CHECK(report.frontier[i].on_hull == std::get<2>(expected[i]));
  }

  for (std::size_t i = 1; i < report.frontier.size(); ++i) {
    CHECK(report.frontier[i].scrt_count > report.frontier[i - 1].scrt_count);
    CHECK(report.frontier[i].ctrl_count < report.frontier[i - 1].ctrl_count);
  }

  for (const FrontierPoint& p : report.frontier) {
    const RefCounts r = reference_counts(Task::Stochastic, p.strategy);
    CHECK(r.scrt == p.scrt_count);
    CHECK(r.ctrl == p.ctrl_count);
    CHECK(r.scrt + r.ctrl <= 20);
  }
}

TEST_CASE("hand-built strategies reach the frontier endpoints") {
  const RefCounts parity = reference_counts(Task::Stochastic, parity_strategy());
  CHECK(parity.scrt == 16);
  CHECK(parity.ctrl == 0);

  const RefCounts silent = reference_counts(Task::Stochastic, silent_strategy());
  CHECK(silent.scrt == 4);
  CHECK(silent.ctrl == 16);

  const Behavior b = strategy_to_behavior(Task::Stochastic, silent_strategy());
  CHECK(score(b).total == doctest::Approx(0.625).epsilon(1e-15));
}

TEST_CASE("constant-answer strategy is a coin flip on the deterministic task") {
  const ClassicalStrategy s{0, 0, 0};
  const Behavior b = strategy_to_behavior(Task::Deterministic, s);
  CHECK(score(b).total == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("behavior scores match direct integer counts") {
  Rng rng(20260816);
  for (int trial = 0; trial < 50; ++trial) {
    for (Task task : {Task::Deterministic, Task::Stochastic}) {
      const int tables = task == Task::Deterministic ? 256 : 6561;
      ClassicalStrategy s;
      s.f_id = static_cast<int>(rng.next_u64() % 16);
      s.g_id = static_cast<int>(rng.next_u64() % 16);
      s.h_id = static_cast<int>(rng.next_u64() % tables);
      const RefCounts r = reference_counts(task, s);
      const Scores scores = score(strategy_to_behavior(task, s));
      if (task == Task::Deterministic) {
        CHECK(scores.total == doctest::Approx(r.det_correct / 32.0).epsilon(1e-15));
      } else {
        CHECK(scores.secret == doctest::Approx(r.scrt / 16.0).epsilon(1e-15));
        CHECK(scores.control == doctest::Approx(r.ctrl / 16.0).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("shuffled enumeration reproduces the same results") {
  for (Task task : {Task::Deterministic, Task::Stochastic}) {
    const ClassicalReport a = enumerate_classical(task);
    const ClassicalReport b = enumerate_classical_shuffled(task, 977);
    CHECK(a.best_numerator == b.best_numerator);
    CHECK(a.strategies_enumerated == b.strategies_enumerated);

    std::set<std::pair<int, int>> pa;
    std::set<std::pair<int, int>> pb;
    for (const FrontierPoint& p : a.frontier) pa.insert({p.scrt_count, p.ctrl_count});
    for (const FrontierPoint& p : b.frontier) pb.insert({p.scrt_count, p.ctrl_count});
    CHECK(pa == pb);
  }
}

TEST_CASE("frontier CSV format") {
  const ClassicalReport report = enumerate_classical(Task::Stochastic);
  const std::string csv = frontier_csv(report);
  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "Rscrt,Rctrl,f_id,g_id,h_id");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == report.frontier.size());
  CHECK(csv.find("0.75,0.5,") != std::string::npos);

  const ClassicalReport det = enumerate_classical(Task::Deterministic);
  CHECK_THROWS_AS((void)frontier_csv(det), Error);
}

TEST_CASE("strategy_outcome validates its arguments") {
  CHECK_THROWS_AS(strategy_outcome(Task::Deterministic, {0, 0, 256}, 0, 0, 0), Error);
  CHECK_THROWS_AS(strategy_outcome(Task::Stochastic, {16, 0, 0}, 0, 0, 0), Error);
  CHECK_THROWS_AS(strategy_outcome(Task::Stochastic, {0, 0, 0}, 4, 0, 0), Error);
  CHECK_THROWS_AS(strategy_outcome(Task::Stochastic, {0, 0, 0}, 0, 0, 2), Error);
}
