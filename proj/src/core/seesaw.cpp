#include "core/seesaw.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "core/rng.hpp"

namespace qss {
namespace {

// Score weight of outcome a on inputs (x, y, z). Every credited term
// carries 1/32: the deterministic score averages 32 terms, and the
// stochastic score (R_scrt + R_ctrl)/2 unfolds into 32 credited terms of
// equal weight (16 relevant rounds crediting the secret, 16 control
// rounds crediting the undecided outcome).
double weight(Task task, int a, int x, int y, int z) {
  const int parity = ((x >> z) & 1) ^ ((y >> z) & 1);
  if (task == Task::Deterministic) {
    return a == parity ? 1.0 / 32.0 : 0.0;
  }
  if (parity == 1) {
    const int secret = ((x >> (1 - z)) & 1) ^ ((y >> (1 - z)) & 1);
    return a == secret ? 1.0 / 32.0 : 0.0;
  }
  return a == 2 ? 1.0 / 32.0 : 0.0;
}

Mat2 pure_outer(const CVec<2>& v) {
  Mat2 m;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) m(r, c) = v[r] * std::conj(v[c]);
  }
  return m;
}

Mat2 basis_state(int b) {
  CVec<2> v{};
  v[b] = 1.0;
  return pure_outer(v);
}

Mat4 even_parity_projector() {
  Mat4 m = Mat4::zero();
  m(0, 0) = 1.0;
  m(3, 3) = 1.0;
  return m;
}

Mat4 odd_parity_projector() {
  Mat4 m = Mat4::zero();
  m(1, 1) = 1.0;
  m(2, 2) = 1.0;
  return m;
}

Mat2 top_eigenstate(const Mat2& a) {
  const EigResult<2> eig = herm_eig<2>(a);
  CVec<2> v;
  v[0] = eig.vectors(0, 1);
  v[1] = eig.vectors(1, 1);
  return pure_outer(v);
}

// Weighted score operators W_{a|z} = sum_{x,y} w(a,x,y,z) beta_x (x) gamma_y.
std::vector<Mat4> score_operators(Task task, const QubitStrategy& s, int z) {
  const int outcomes = task == Task::Deterministic ? 2 : 3;
  std::vector<Mat4> w(outcomes, Mat4::zero());
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      const Mat4 joint = tensor(s.beta[x], s.gamma[y]);
      for (int a = 0; a < outcomes; ++a) {
        const double wt = weight(task, a, x, y, z);
        if (wt > 0.0) w[a] += wt * joint;
      }
    }
  }
  return w;
}

double basis_objective(const std::vector<Mat4>& w, const std::vector<Mat4>& m) {
  double total = 0.0;
  for (std::size_t a = 0; a < w.size(); ++a) {
    total += trace_product(w[a], m[a]).real();
  }
  return total;
}

// Projective measurement from an eigenbasis: each eigenvector goes to the
// outcome with the largest expected weight. Summing projectors over a full
// orthonormal basis keeps the result a valid measurement by construction.
std::vector<Mat4> assign_basis(const std::vector<Mat4>& w, const Mat4& basis) {
  std::vector<Mat4> m(w.size(), Mat4::zero());
  for (int k = 0; k < 4; ++k) {
    CVec<4> u;
    for (int r = 0; r < 4; ++r) u[r] = basis(r, k);
    Mat4 proj;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) proj(r, c) = u[r] * std::conj(u[c]);
    }
    int best_a = 0;
    double best_val = trace_product(w[0], proj).real();
    for (std::size_t a = 1; a < w.size(); ++a) {
      const double val = trace_product(w[a], proj).real();
      if (val > best_val) {
        best_val = val;
        best_a = static_cast<int>(a);
      }
    }
    m[best_a] += proj;
  }
  return m;
}

QubitStrategy random_strategy(Task task, Rng& rng) {
  QubitStrategy s;
  const auto random_pure = [&rng] {
    CVec<2> v;
    for (int i = 0; i < 2; ++i) v[i] = cplx(rng.normal(), rng.normal());
    double norm = 0.0;
    for (int i = 0; i < 2; ++i) norm += std::norm(v[i]);
    norm = std::sqrt(norm);
    for (int i = 0; i < 2; ++i) v[i] /= norm;
    return pure_outer(v);
  };
  for (int i = 0; i < 4; ++i) {
    s.beta[i] = random_pure();
    s.gamma[i] = random_pure();
  }

  const int outcomes = task == Task::Deterministic ? 2 : 3;
  for (int z = 0; z < 2; ++z) {
    // Random orthonormal basis from the eigenvectors of a random
    // Hermitian matrix, split randomly across the outcomes.
    Mat4 h = Mat4::zero();
    for (int r = 0; r < 4; ++r) {
      for (int c = r; c < 4; ++c) {
        const cplx e = r == c ? cplx(rng.normal(), 0.0)
                              : cplx(rng.normal(), rng.normal());
        h(r, c) = e;
        h(c, r) = std::conj(e);
      }
    }
    const EigResult<4> eig = herm_eig<4>(h);
    std::vector<Mat4> m(outcomes, Mat4::zero());
    for (int k = 0; k < 4; ++k) {
      CVec<4> u;
      for (int r = 0; r < 4; ++r) u[r] = eig.vectors(r, k);
      Mat4 proj;
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) proj(r, c) = u[r] * std::conj(u[c]);
      }
      m[rng.next_u64() % outcomes] += proj;
    }
    s.povm[z] = std::move(m);
  }
  return s;
}

SeesawRestart run_restart(Task task, QubitStrategy& s) {
  constexpr int kMaxSweeps = 500;
  constexpr double kGainTol = 1e-10;
  double obj = qubit_objective(task, s);
  SeesawRestart result;
  for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
    update_states(task, s);
    update_measurements(task, s);
    const double next = qubit_objective(task, s);
    if (next < obj - 1e-9) {
      throw Error(ErrorCode::SolverFailure,
                  "seesaw objective decreased within a sweep");
    }
    result.sweeps = sweep;
    const double gain = next - obj;
    obj = next;
    if (gain < kGainTol) break;
  }
  result.value = obj;
  return result;
}

}  // namespace

void validate_strategy(Task task, const QubitStrategy& s) {
  const std::size_t outcomes = task == Task::Deterministic ? 2 : 3;
  for (int i = 0; i < 4; ++i) {
    for (const Mat2* m : {&s.beta[i], &s.gamma[i]}) {
      require(is_hermitian(*m, kTol), "message state not hermitian");
      require(std::abs(trace(*m).real() - 1.0) < kTol &&
                  std::abs(trace(*m).imag()) < kTol,
              "message state trace is not 1");
      const EigResult<2> eig = herm_eig<2>(*m);
      require(eig.values[0] > -kTol, "message state not positive");
    }
  }
  for (int z = 0; z < 2; ++z) {
    require(s.povm[z].size() == outcomes, "wrong number of outcomes");
    Povm p;
    p.elements = s.povm[z];
    validate_povm(p);
  }
}

Behavior strategy_behavior(Task task, const QubitStrategy& s) {
  Behavior b;
  b.task = task;
  const int outcomes = task == Task::Deterministic ? 2 : 3;
  for (int z = 0; z < 2; ++z) {
    for (int x = 0; x < 4; ++x) {
      for (int y = 0; y < 4; ++y) {
        const Mat4 joint = tensor(s.beta[x], s.gamma[y]);
        for (int a = 0; a < 3; ++a) {
          b.p[z][x][y][a] =
              a < outcomes ? trace_product(joint, s.povm[z][a]).real() : 0.0;
        }
      }
    }
  }
  validate_behavior(b);
  return b;
}

double qubit_objective(Task task, const QubitStrategy& s) {
  return score(strategy_behavior(task, s)).total;
}

QubitStrategy classical_embedding(Task task) {
  QubitStrategy s;
  for (int i = 0; i < 4; ++i) {
    s.beta[i] = basis_state(i & 1);
    s.gamma[i] = basis_state(i & 1);
  }
  const Mat4 even = even_parity_projector();
  const Mat4 odd = odd_parity_projector();
  if (task == Task::Deterministic) {
    s.povm[0] = {even, odd};
    s.povm[1] = {even, odd};
  } else {
    // z = 0: answer 0 on odd relayed parity, undecided on even.
    // z = 1: announce the relayed parity, never undecided.
    s.povm[0] = {odd, Mat4::zero(), even};
    s.povm[1] = {even, odd, Mat4::zero()};
  }
  return s;
}

Mat4 helstrom_projector(const Mat4& w0, const Mat4& w1) {
  const EigResult<4> eig = herm_eig<4>(w0 - w1);
  Mat4 m = Mat4::zero();
  for (int k = 0; k < 4; ++k) {
    if (eig.values[k] < 0.0) continue;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        m(r, c) += eig.vectors(r, k) * std::conj(eig.vectors(c, k));
      }
    }
  }
  return m;
}

void update_states(Task task, QubitStrategy& s) {
  const double before = qubit_objective(task, s);
  const int outcomes = task == Task::Deterministic ? 2 : 3;
  for (int x = 0; x < 4; ++x) {
    Mat2 acc = Mat2::zero();
    for (int y = 0; y < 4; ++y) {
      const Mat4 gamma_side = tensor(Mat2::identity(), s.gamma[y]);
      for (int z = 0; z < 2; ++z) {
        for (int a = 0; a < outcomes; ++a) {
          const double wt = weight(task, a, x, y, z);
          if (wt > 0.0) acc += wt * partial_trace(gamma_side * s.povm[z][a], 2);
        }
      }
    }
    s.beta[x] = top_eigenstate(acc);
  }
  for (int y = 0; y < 4; ++y) {
    Mat2 acc = Mat2::zero();
    for (int x = 0; x < 4; ++x) {
      const Mat4 beta_side = tensor(s.beta[x], Mat2::identity());
      for (int z = 0; z < 2; ++z) {
        for (int a = 0; a < outcomes; ++a) {
          const double wt = weight(task, a, x, y, z);
          if (wt > 0.0) acc += wt * partial_trace(beta_side * s.povm[z][a], 1);
        }
      }
    }
    s.gamma[y] = top_eigenstate(acc);
  }
  const double after = qubit_objective(task, s);
  if (after < before - 1e-11) {
    throw Error(ErrorCode::SolverFailure, "state update decreased the objective");
  }
}

void update_measurements(Task task, QubitStrategy& s) {
  for (int z = 0; z < 2; ++z) {
    const std::vector<Mat4> w = score_operators(task, s, z);
    if (task == Task::Deterministic) {
      const Mat4 m0 = helstrom_projector(w[0], w[1]);
      s.povm[z] = {m0, Mat4::identity() - m0};
      continue;
    }
    const double current = basis_objective(w, s.povm[z]);
    const std::vector<Mat4> seeds = {
        w[0] - w[1],
        w[2] - 0.5 * (w[0] + w[1]),
        w[0] - w[2],
        w[1] - w[2],
    };
    std::vector<Mat4> best_m;
    double best_val = current;
    for (const Mat4& seed : seeds) {
      const EigResult<4> eig = herm_eig<4>(seed);
      std::vector<Mat4> candidate = assign_basis(w, eig.vectors);
      const double val = basis_objective(w, candidate);
      if (val > best_val) {
        best_val = val;
        best_m = std::move(candidate);
      }
    }
    if (!best_m.empty()) s.povm[z] = std::move(best_m);
  }
}

SeesawReport seesaw(Task task, int restarts, std::uint64_t seed) {
  require(restarts >= 1, "restarts must be at least 1");
  SeesawReport report;
  report.task = task;
  report.best = -1.0;
  for (int r = 0; r < restarts; ++r) {
    QubitStrategy s;
    if (r == 0) {
      s = classical_embedding(task);
    } else {
      Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(r));
      s = random_strategy(task, rng);
    }
    const SeesawRestart result = run_restart(task, s);
    report.restarts.push_back(result);
    if (result.value > report.best) {
      report.best = result.value;
      report.best_strategy = s;
    }
  }
  return report;
}

std::string seesaw_report_json(const SeesawReport& report) {
  nlohmann::json j;
  j["task"] = task_name(report.task);
  j["best"] = report.best;
  nlohmann::json values = nlohmann::json::array();
  nlohmann::json sweeps = nlohmann::json::array();
  for (const SeesawRestart& r : report.restarts) {
    values.push_back(r.value);
    sweeps.push_back(r.sweeps);
  }
  j["per_restart"] = values;
  j["sweeps"] = sweeps;
  return j.dump(2);
}

}  // namespace qss
