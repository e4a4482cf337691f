/* Acceptance gate: one pass/fail line per shipping criterion, with the
 * tolerances pinned here in code. Exit status is the number of failed
 * criteria, so the binary doubles as a ctest entry. Criterion 10 shells out
 * to the command line tool named by QSS_CLI_PATH. */
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core/classical.hpp"
#include "core/optics.hpp"
#include "core/protocol.hpp"
#include "core/qmath.hpp"
#include "core/seesaw.hpp"
#include "core/states.hpp"
#include "core/steering.hpp"

namespace {

using namespace qss;

int failures = 0;

void report(int n, const std::string& what, bool ok, const std::string& detail) {
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << n << ": " << what;
  if (!detail.empty()) std::cout << "  [" << detail << "]";
  std::cout << "\n" << std::flush;
  if (!ok) ++failures;
}

template <typename F>
void criterion(int n, const std::string& what, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(n, what, false, std::string("exception: ") + e.what());
  }
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

std::string fmt(double x, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

// ---- criterion 1: ideal protocols score exactly 1 ----
void c1() {
  const double t0 = now_seconds();
  const DensityMatrix ideal = DensityMatrix::bell("phi+");
  const double s = score(evaluate_canonical(Task::Deterministic, ideal)).total;
  const double r = score(evaluate_canonical(Task::Stochastic, ideal)).total;
  const double elapsed = now_seconds() - t0;
  const bool ok = std::abs(s - 1.0) <= 1e-12 && std::abs(r - 1.0) <= 1e-12 && elapsed < 1.0;
  report(1, "ideal state scores S = 1 and R = 1 within 1e-12 in under a second", ok,
         "S=" + fmt(s, 15) + " R=" + fmt(r, 15) + " wall=" + fmt(elapsed, 3) + "s");
}

// ---- criterion 2: evaluator matches every closed form on 101-point grids ----
void c2() {
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = i / 100.0;
    const double s_form = (1.0 + v) / 2.0;
    const double r_form = (3.0 + 5.0 * v) / 8.0;
    const DensityMatrix iso = DensityMatrix::isotropic(v);
    worst = std::max(worst,
                     std::abs(score(evaluate_canonical(Task::Deterministic, iso)).total -
                              s_form));
    worst = std::max(worst,
                     std::abs(score(evaluate_canonical(Task::Stochastic, iso)).total -
                              r_form));
    worst = std::max(worst,
                     std::abs(closed_form(Task::Deterministic, Family::Isotropic, v, 0.0).total -
                              s_form));
    worst = std::max(worst,
                     std::abs(closed_form(Task::Stochastic, Family::Isotropic, v, 0.0).total -
                              r_form));

    const double theta = (i + 1) / 101.0 * M_PI / 4.0;
    const double pure_form = (3.0 + std::sin(2.0 * theta)) / 4.0;
    const DensityMatrix pure = family_state(Family::Pure, 1.0, theta);
    worst = std::max(worst,
                     std::abs(score(evaluate_canonical(Task::Deterministic, pure)).total -
                              pure_form));
    worst = std::max(worst,
                     std::abs(closed_form(Task::Deterministic, Family::Pure, 1.0, theta).total -
                              pure_form));
  }
  report(2, "exact evaluation matches the closed forms on 101-point grids", worst <= 1e-12,
         "max |diff|=" + fmt(worst, 3));
}

// ---- criterion 3: advantage thresholds ----
void c3() {
  const double t_det = threshold(Task::Deterministic, Family::Isotropic, 0.0);
  const double t_stoch = threshold(Task::Stochastic, Family::Isotropic, 0.0);
  const double t_partial = threshold(Task::Deterministic, Family::Partial, 0.2356);
  const bool ok = std::abs(t_det - 0.5) <= 1e-6 && std::abs(t_stoch - 0.4) <= 1e-6 &&
                  std::abs(t_partial - 0.6878) <= 1e-3;
  report(3, "critical visibilities 0.5, 0.4 (1e-6) and 0.6878 (1e-3)", ok,
         "det=" + fmt(t_det, 8) + " stoch=" + fmt(t_stoch, 8) +
             " partial(0.2356)=" + fmt(t_partial, 8));
}

// ---- criterion 4: exhaustive classical maxima and the rate frontier ----
void c4() {
  const double t0 = now_seconds();
  const ClassicalReport det = enumerate_classical(Task::Deterministic);
  const ClassicalReport stoch = enumerate_classical(Task::Stochastic);
  bool ok = det.best_numerator == 24 && stoch.best_numerator == 20;

  // The frontier is exact counts out of 16: R_scrt = scrt/16, R_ctrl = ctrl/16.
  const std::set<std::pair<int, int>> expected = {{4, 16}, {6, 14}, {8, 12}, {10, 10},
                                                  {12, 8}, {14, 2}, {16, 0}};
  std::set<std::pair<int, int>> got;
  for (const FrontierPoint& p : stoch.frontier) got.insert({p.scrt_count, p.ctrl_count});
  ok = ok && got == expected && got.count({12, 8}) == 1;

  // On the R = 5/8 face (scrt + ctrl = 20) the tight constraint is
  // R_scrt <= 3/4, attained at (3/4, 1/2); R_ctrl ranges up to 1 there, so
  // a bound of 3/4 on the control rate would be false.
  int max_scrt_on_face = 0, max_ctrl_on_face = 0;
  for (const FrontierPoint& p : stoch.frontier) {
    if (p.scrt_count + p.ctrl_count == 20) {
      max_scrt_on_face = std::max(max_scrt_on_face, p.scrt_count);
      max_ctrl_on_face = std::max(max_ctrl_on_face, p.ctrl_count);
    }
  }
  ok = ok && max_scrt_on_face == 12 && max_ctrl_on_face == 16;
  const double elapsed = now_seconds() - t0;
  ok = ok && elapsed < 300.0;
  report(4, "classical maxima are exactly 3/4 and 5/8 with the exact rate frontier", ok,
         "det=" + std::to_string(det.best_numerator) + "/32 stoch=" +
             std::to_string(stoch.best_numerator) + "/32 face max R_scrt=" +
             std::to_string(max_scrt_on_face) + "/16 wall=" + fmt(elapsed, 3) + "s");
  std::cout << "       note: on the R = 5/8 face the secret rate obeys R_scrt <= 3/4 "
               "(tight at (3/4, 1/2)); the control rate reaches 1 there (point "
               "(1/4, 1)), so the analogous control-rate bound fails.\n";
}

// ---- criterion 5: variational optimizer recovers the classical maxima ----
void c5() {
  const SeesawReport det = seesaw(Task::Deterministic, 100, 2024);
  const SeesawReport stoch = seesaw(Task::Stochastic, 100, 2024);
  bool ok = det.best >= 0.75 - 1e-6 && det.best <= 0.75 + 1e-6;
  ok = ok && stoch.best >= 0.625 - 1e-4 && stoch.best <= 0.625 + 1e-6;
  // Monotonicity within every restart is enforced by the optimizer itself,
  // which throws on any objective decrease; reaching this line certifies it
  // for all 200 restarts. Sanity: no restart may exceed the reported best.
  for (const SeesawRestart& r : det.restarts) ok = ok && r.value <= det.best + 1e-9;
  for (const SeesawRestart& r : stoch.restarts) ok = ok && r.value <= stoch.best + 1e-9;
  report(5, "seesaw over 100 restarts attains 3/4 and 5/8 with monotone sweeps", ok,
         "det best=" + fmt(det.best, 10) + " stoch best=" + fmt(stoch.best, 10));
}

// ---- criterion 6: steering certificates ----
void c6() {
  const SteeringVerdict sep = certify(DensityMatrix::isotropic(1.0 / 3.0), 1);
  const SteeringVerdict steer = certify(DensityMatrix::isotropic(0.7), 3);
  bool ok = sep.status == SteeringStatus::CertifiedUnsteerable &&
            steer.status == SteeringStatus::CertifiedSteerable;

  // Three-axis transition: bracket the local-model threshold for X, Y, Z
  // measurements between an inner and an outer state polytope.
  const BlochPolytope fine = icosphere(3);
  const BlochPolytope outer_poly = scaled(fine, 1.0 / fine.r_in);
  const auto bisect = [](const BlochPolytope& meas, const BlochPolytope& states) {
    double lo = 0.3, hi = 1.0;
    while (hi - lo > 2e-4) {
      const double mid = 0.5 * (lo + hi);
      if (lhs_feasible(DensityMatrix::isotropic(mid), meas, states, Direction::BtoC) ==
          LpStatus::Feasible) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  const double inner = bisect(octahedron(), fine);
  const double outer = bisect(octahedron(), outer_poly);
  const double target = 1.0 / std::sqrt(3.0);
  ok = ok && std::abs(inner - target) <= 5e-3 && std::abs(outer - target) <= 5e-3 &&
       inner <= target + 2e-4 && outer >= target - 2e-4;

  // The one-sided certificates must never contradict each other across
  // refinement levels for the same state.
  bool contradiction = false;
  for (const double v : {1.0 / 3.0, 0.45, 0.6, 0.7}) {
    bool saw_unsteerable = false, saw_steerable = false;
    for (const int level : {1, 3}) {
      const SteeringStatus s = certify(DensityMatrix::isotropic(v), level).status;
      saw_unsteerable = saw_unsteerable || s == SteeringStatus::CertifiedUnsteerable;
      saw_steerable = saw_steerable || s == SteeringStatus::CertifiedSteerable;
    }
    contradiction = contradiction || (saw_unsteerable && saw_steerable);
  }
  ok = ok && !contradiction;

  const double cv = certified_visibility(Family::Isotropic, M_PI / 4.0, 1);
  ok = ok && cv >= 0.40;
  report(6, "steering certificates: verdicts, 1/sqrt(3) transition, certified visibility",
         ok,
         "iso(1/3)=unsteerable@" + std::to_string(sep.level) + " iso(0.7)=steerable@" +
             std::to_string(steer.level) + " transition=[" + fmt(inner, 6) + "," +
             fmt(outer, 6) + "] certified v=" + fmt(cv, 6) + " at level 1");
}

// ---- criterion 7: published optical settings tables ----
void c7() {
  const std::vector<TableFinding> findings = verify_settings_tables();
  bool ok = settings_tables_consistent(findings);
  int unitary_rows = 0, misprints = 0;
  for (const TableFinding& f : findings) {
    if (f.row.rfind("(", 0) == 0) continue;  // header or column annotations
    if (f.table == "prep-deterministic" || f.table == "prep-stochastic" ||
        f.table == "measurement-deterministic" || f.table == "measurement-stochastic") {
      ok = ok && f.matched;
    } else if (f.table == "unitary-settings") {
      // Every row must come back resolved (matched under the documented
      // reading) or flagged with a concrete note naming the discrepancy.
      ok = ok && !f.reading.empty() && (f.matched || !f.note.empty());
      ++unitary_rows;
    } else if (f.table == "transformations" && !f.matched) {
      ok = ok && !f.note.empty();
      ++misprints;
    }
  }
  ok = ok && unitary_rows == 4 && misprints == 3;
  report(7, "settings tables reproduce row by row under the documented conventions", ok,
         "unitary rows resolved=" + std::to_string(unitary_rows) +
             " transformation misprints flagged=" + std::to_string(misprints));
}

// ---- criterion 8: sampled experiment hits theory within shot noise ----
void c8() {
  ExperimentConfig cfg;
  cfg.task = Task::Deterministic;
  cfg.family = Family::Partial;
  cfg.v = 0.72;
  cfg.theta = 0.2356;
  cfg.events = 800000;
  const double s_theory = closed_form(Task::Deterministic, Family::Partial, 0.72, 0.2356).total;

  int inside = 0;
  for (int seed = 1; seed <= 100; ++seed) {
    cfg.seed = static_cast<std::uint64_t>(seed);
    const ExperimentResult r = run_experiment(cfg);
    if (std::abs(r.scores.total - s_theory) < 3.0 * r.errors.total) ++inside;
  }

  // Shot-noise scaling: the reported standard error must fall like N^-1/2.
  const std::vector<long long> sizes = {10000, 100000, 1000000};
  std::vector<double> lx, ly;
  for (const long long n : sizes) {
    double se = 0.0;
    for (int k = 0; k < 3; ++k) {
      cfg.events = n;
      cfg.seed = 700 + static_cast<std::uint64_t>(k);
      se += run_experiment(cfg).errors.total / 3.0;
    }
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(se));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / lx.size();
    my += ly[i] / ly.size();
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = num / den;

  const bool ok = inside >= 95 && std::abs(slope + 0.5) <= 0.05;
  report(8, "simulated runs at 8e5 events track theory within 3 standard errors", ok,
         "inside=" + std::to_string(inside) + "/100 target S=" + fmt(s_theory, 6) +
             " SE slope=" + fmt(slope, 4));
}

// ---- criterion 9: tomography exactness and published-scale fidelity ----
void c9() {
  const DensityMatrix phi = DensityMatrix::bell("phi+");
  const DensityMatrix iso = DensityMatrix::isotropic(0.47);
  const TomographyResult exact_phi = tomography_exact(phi, phi);
  const TomographyResult exact_iso = tomography_exact(iso, phi);
  bool ok = max_abs_diff(exact_phi.rho_hat.matrix(), phi.matrix()) <= 1e-12 &&
            std::abs(exact_phi.fidelity - 1.0) <= 1e-12 &&
            max_abs_diff(exact_iso.rho_hat.matrix(), iso.matrix()) <= 1e-12 &&
            std::abs(exact_iso.fidelity - (1.0 + 3.0 * 0.47) / 4.0) <= 1e-12;

  int good = 0;
  for (int seed = 1; seed <= 100; ++seed) {
    const TomographyResult r = tomography_recombined(Family::Isotropic, 0.47, 0.0, 1400,
                                                     static_cast<std::uint64_t>(seed));
    if (r.fidelity >= 0.995) ++good;
  }
  ok = ok && good >= 95;
  report(9, "tomography is exact at infinite statistics and hits 0.995 at 1400 events",
         ok,
         "exact diff<=1e-12, sampled fidelity>=0.995 in " + std::to_string(good) +
             "/100 seeds");
}

// ---- criterion 10: command line replay is byte identical ----
#ifndef QSS_CLI_PATH
#define QSS_CLI_PATH "qss"
#endif

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

void c10() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qss-acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = QSS_CLI_PATH;
  const std::string a_csv = (dir / "a.csv").string();
  const std::string b_csv = (dir / "b.csv").string();
  const std::string a_json = (dir / "a.json").string();
  const std::string b_json = (dir / "b.json").string();

  bool ok = run(cli + " experiment --task deterministic --family partial --v 0.72" +
                " --theta 0.2356 --events 20000 --seed 11 --format csv --out " + a_csv) == 0;
  ok = ok && run(cli + " replay --manifest " + a_csv + ".manifest.json --out " + b_csv) == 0;
  const std::string csv1 = slurp(a_csv), csv2 = slurp(b_csv);
  ok = ok && !csv1.empty() && csv1 == csv2;

  ok = ok && run(cli + " tomography --family isotropic --v 0.47 --events 500 --seed 4" +
                 " --format json --out " + a_json) == 0;
  ok = ok && run(cli + " replay --manifest " + a_json + ".manifest.json --out " + b_json) == 0;
  const std::string json1 = slurp(a_json), json2 = slurp(b_json);
  ok = ok && !json1.empty() && json1 == json2;

  report(10, "CLI replay from a run manifest reproduces artifacts byte for byte", ok,
         "csv " + std::to_string(csv1.size()) + "B, json " + std::to_string(json1.size()) +
             "B compared");
  fs::remove_all(dir);
}

}  // namespace

int main() {
  std::cout << "acceptance suite, library version 1.0.0\n";
  criterion(1, "ideal scores", c1);
  criterion(2, "closed-form grids", c2);
  criterion(3, "thresholds", c3);
  criterion(4, "classical enumeration", c4);
  criterion(5, "seesaw", c5);
  criterion(6, "steering", c6);
  criterion(7, "settings tables", c7);
  criterion(8, "sampled experiment", c8);
  criterion(9, "tomography", c9);
  criterion(10, "replay", c10);
  std::cout << (failures == 0 ? "all criteria passed\n"
                              : std::to_string(failures) + " criteria failed\n");
  return failures;
}
