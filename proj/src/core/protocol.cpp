#include "core/protocol.hpp"

#include <cmath>

namespace qss {

Task task_from_name(const std::string& name) {
  if (name == "det" || name == "deterministic") return Task::Deterministic;
  if (name == "stoch" || name == "stochastic") return Task::Stochastic;
  throw Error(ErrorCode::InvalidArgument,
              "unknown task '" + name + "' (want det or stoch)");
}

std::string task_name(Task task) {
  return task == Task::Deterministic ? "deterministic" : "stochastic";
}

Family family_from_name(const std::string& name) {
  if (name == "isotropic") return Family::Isotropic;
  if (name == "partial") return Family::Partial;
  if (name == "pure") return Family::Pure;
  throw Error(ErrorCode::InvalidArgument,
              "unknown family '" + name + "' (want isotropic, partial, pure)");
}

std::string family_name(Family family) {
  switch (family) {
    case Family::Isotropic: return "isotropic";
    case Family::Partial: return "partial";
    default: return "pure";
  }
}

void validate_povm(const Povm& povm) {
  require(!povm.elements.empty(), "povm has no elements");
  Mat4 sum;
  for (const auto& e : povm.elements) {
    require(is_hermitian(e, kTol), "povm element is not hermitian");
    require(min_eigenvalue(e) >= -kTol, "povm element is not positive semidefinite");
    sum += e;
  }
  require(max_abs_diff(sum, Mat4::identity()) <= kTol,
          "povm elements do not sum to identity");
}

void validate_encoding(const Encoding& enc) {
  for (const auto& kraus : enc.kraus) {
    require(!kraus.empty(), "encoding input has no kraus operators");
    Mat2 sum;
    for (const auto& k : kraus) sum += adjoint(k) * k;
    require(max_abs_diff(sum, Mat2::identity()) <= kTol,
            "kraus operators are not trace preserving");
  }
}

Mat2 encoding_unitary(int x) {
  require(x >= 0 && x < 4, "encoding input out of range");
  Mat2 u = Mat2::identity();
  if (x & 1) u = pauli_x();
  if (x & 2) u = u * pauli_z();
  return u;
}

Encoding canonical_encoding() {
  Encoding enc;
  for (int x = 0; x < 4; ++x) enc.kraus[x] = {encoding_unitary(x)};
  return enc;
}

namespace {

Mat4 bell_projector(int s, int t) {
  const CVec<4> psi = bell_vector(s, t);
  Mat4 proj;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) proj(i, j) = psi[i] * std::conj(psi[j]);
  return proj;
}

}  // namespace

std::pair<Povm, Povm> product_measurements() {
  const Mat4 phi_p = bell_projector(0, 0), phi_m = bell_projector(0, 1);
  const Mat4 psi_p = bell_projector(1, 0), psi_m = bell_projector(1, 1);
  Povm z0, z1;
  z0.elements = {phi_p + phi_m, psi_p + psi_m};
  z1.elements = {phi_p + psi_p, phi_m + psi_m};
  return {z0, z1};
}

std::pair<Povm, Povm> partial_bell_measurements() {
  const Mat4 phi_p = bell_projector(0, 0), phi_m = bell_projector(0, 1);
  const Mat4 psi_p = bell_projector(1, 0), psi_m = bell_projector(1, 1);
  Povm z0, z1;
  z0.elements = {psi_p, psi_m, phi_p + phi_m};
  z1.elements = {phi_m, psi_m, phi_p + psi_p};
  return {z0, z1};
}

void validate_behavior(const Behavior& b) {
  const int n = b.outcome_count();
  for (int z = 0; z < 2; ++z)
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) {
        double sum = 0.0;
        for (int a = 0; a < n; ++a) {
          require(b.p[z][x][y][a] >= -1e-12, "behavior has a negative probability");
          sum += b.p[z][x][y][a];
        }
        require(std::abs(sum - 1.0) <= kTol, "behavior row does not sum to 1");
      }
}

Behavior evaluate(const DensityMatrix& rho, const Encoding& enc_b, const Encoding& enc_c,
                  const Povm& meas_z0, const Povm& meas_z1, Task task) {
  validate_encoding(enc_b);
  validate_encoding(enc_c);
  validate_povm(meas_z0);
  validate_povm(meas_z1);
  Behavior out;
  out.task = task;
  const int n = out.outcome_count();
  require(static_cast<int>(meas_z0.elements.size()) == n &&
              static_cast<int>(meas_z1.elements.size()) == n,
          "measurement outcome count does not match the task alphabet");
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      Mat4 enc;
      for (const auto& kb : enc_b.kraus[x])
        for (const auto& kc : enc_c.kraus[y]) {
          const Mat4 k = tensor(kb, kc);
          enc += k * rho.matrix() * adjoint(k);
        }
      for (int z = 0; z < 2; ++z) {
        const Povm& meas = z == 0 ? meas_z0 : meas_z1;
        for (int a = 0; a < n; ++a)
          out.p[z][x][y][a] = trace_product(enc, meas.elements[a]).real();
      }
    }
  validate_behavior(out);
  return out;
}

Behavior evaluate_canonical(Task task, const DensityMatrix& rho) {
  const Encoding enc = canonical_encoding();
  const auto meas = task == Task::Deterministic ? product_measurements()
                                                : partial_bell_measurements();
  return evaluate(rho, enc, enc, meas.first, meas.second, task);
}

Scores score(const Behavior& b) {
  validate_behavior(b);
  Scores s;
  s.task = b.task;
  if (b.task == Task::Deterministic) {
    for (int z = 0; z < 2; ++z) {
      double acc = 0.0;
      for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
          const int correct = ((x >> z) & 1) ^ ((y >> z) & 1);
          acc += b.p[z][x][y][correct];
        }
      s.per_z[z] = acc / 32.0;
    }
    s.total = s.per_z[0] + s.per_z[1];
  } else {
    for (int z = 0; z < 2; ++z) {
      double scrt = 0.0, ctrl = 0.0;
      for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
          const int relevant = ((x >> z) & 1) ^ ((y >> z) & 1);
          if (relevant) {
            const int secret = ((x >> (1 - z)) & 1) ^ ((y >> (1 - z)) & 1);
            scrt += b.p[z][x][y][secret];
          } else {
            ctrl += b.p[z][x][y][2];
          }
        }
      s.secret_z[z] = scrt / 8.0;
      s.control_z[z] = ctrl / 8.0;
    }
    s.secret = (s.secret_z[0] + s.secret_z[1]) / 2.0;
    s.control = (s.control_z[0] + s.control_z[1]) / 2.0;
    s.total = (s.secret + s.control) / 2.0;
  }
  return s;
}

DensityMatrix family_state(Family family, double v, double theta) {
  switch (family) {
    case Family::Isotropic:
      return DensityMatrix::isotropic(v);
    case Family::Partial:
      return DensityMatrix::partially_entangled(v, theta);
    default:
      return DensityMatrix::partially_entangled(1.0, theta);
  }
}

Scores closed_form(Task task, Family family, double v, double theta) {
  if (family != Family::Pure)
    require(v >= 0.0 && v <= 1.0, "visibility outside [0, 1]");
  if (family != Family::Isotropic)
    require(theta > 0.0 && theta <= M_PI / 4.0 + kTol, "theta outside (0, pi/4]");
  Scores s;
  s.task = task;
  if (task == Task::Deterministic) {
    switch (family) {
      case Family::Isotropic:
        s.per_z[0] = s.per_z[1] = (1.0 + v) / 4.0;
        break;
      case Family::Partial:
        s.per_z[0] = (1.0 + v) / 4.0;
        s.per_z[1] = (1.0 + v * std::sin(2.0 * theta)) / 4.0;
        break;
      default:
        s.per_z[0] = 0.5;
        s.per_z[1] = (1.0 + std::sin(2.0 * theta)) / 4.0;
    }
    s.total = s.per_z[0] + s.per_z[1];
  } else {
    require(family == Family::Isotropic,
            "no published closed form for the stochastic task on this family");
    s.secret_z[0] = s.secret_z[1] = (1.0 + 3.0 * v) / 4.0;
    s.control_z[0] = s.control_z[1] = (1.0 + v) / 2.0;
    s.secret = s.secret_z[0];
    s.control = s.control_z[0];
    s.total = (s.secret + s.control) / 2.0;
  }
  return s;
}

double classical_bound(Task task) {
  return task == Task::Deterministic ? 3.0 / 4.0 : 5.0 / 8.0;
}

double threshold(Task task, Family family, double theta) {
  require(family != Family::Pure, "threshold needs a family with a visibility knob");
  const auto value = [&](double v) {
    return score(evaluate_canonical(task, family_state(family, v, theta))).total;
  };
  double prev = -1.0;
  for (int i = 0; i <= 10; ++i) {
    const double cur = value(i / 10.0);
    require(cur >= prev - 1e-12, "score is not monotone in v; cannot bisect");
    prev = cur;
  }
  const double bound = classical_bound(task);
  double lo = 0.0, hi = 1.0;
  require(value(lo) <= bound, "score already beats the bound at v=0");
  if (value(hi) <= bound)
    throw Error(ErrorCode::InvalidArgument,
                "score never crosses the classical bound on [0, 1]");
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (value(mid) <= bound ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

int swap_bits(int x) { return ((x & 1) << 1) | ((x >> 1) & 1); }

}  // namespace

Behavior permute_inputs(const Behavior& b, InputSymmetry sym) {
  Behavior out;
  out.task = b.task;
  for (int z = 0; z < 2; ++z)
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) {
        int zz = z, xx = x, yy = y;
        switch (sym) {
          case InputSymmetry::FlipBit0:
            xx ^= 1;
            yy ^= 1;
            break;
          case InputSymmetry::FlipBit1:
            xx ^= 2;
            yy ^= 2;
            break;
          case InputSymmetry::SwapBits:
            xx = swap_bits(x);
            yy = swap_bits(y);
            zz = 1 - z;
            break;
        }
        out.p[z][x][y] = b.p[zz][xx][yy];
      }
  return out;
}

}  // namespace qss
