#include "core/steering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include <nlohmann/json.hpp>

#include "core/qmath.hpp"

namespace qss {
namespace {

double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

Vec3 sub(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  return {a[0] / n, a[1] / n, a[2] / n};
}

Vec3 negated(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }

// Inradius of a triangulated convex surface around the origin: the least
// distance from the origin to a face plane.
double mesh_inradius(const std::vector<Vec3>& v,
                     const std::vector<std::array<int, 3>>& faces) {
  double best = 2.0;
  for (const auto& f : faces) {
    const Vec3 n = cross(sub(v[f[1]], v[f[0]]), sub(v[f[2]], v[f[0]]));
    double d = dot(n, v[f[0]]);
    const double len = norm(n);
    require(len > 1e-12, "degenerate face");
    d = std::abs(d) / len;
    best = std::min(best, d);
  }
  return best;
}

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

BlochPolytope raw_icosahedron() {
  BlochPolytope p;
  p.name = "icosahedron";
  const double s = 1.0 / std::sqrt(1.0 + kPhi * kPhi);
  const double a = s;
  const double b = kPhi * s;
  p.vertices = {
      {-a, b, 0}, {a, b, 0},  {-a, -b, 0}, {a, -b, 0}, {0, -a, b}, {0, a, b},
      {0, -a, -b}, {0, a, -b}, {b, 0, -a}, {b, 0, a},  {-b, 0, -a}, {-b, 0, a},
  };
  p.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},  {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},  {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},  {9, 8, 1}};
  p.r_in = mesh_inradius(p.vertices, p.faces);
  p.r_out = 1.0;
  return p;
}

BlochPolytope subdivide(const BlochPolytope& in) {
  BlochPolytope out;
  out.vertices = in.vertices;
  std::map<std::pair<int, int>, int> midpoint;
  const auto mid = [&](int i, int j) {
    const auto key = std::minmax(i, j);
    const auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const Vec3 m = normalized({(out.vertices[i][0] + out.vertices[j][0]) / 2,
                               (out.vertices[i][1] + out.vertices[j][1]) / 2,
                               (out.vertices[i][2] + out.vertices[j][2]) / 2});
    out.vertices.push_back(m);
    const int idx = static_cast<int>(out.vertices.size()) - 1;
    midpoint.emplace(key, idx);
    return idx;
  };
  for (const auto& f : in.faces) {
    const int ab = mid(f[0], f[1]);
    const int bc = mid(f[1], f[2]);
    const int ca = mid(f[2], f[0]);
    out.faces.push_back({f[0], ab, ca});
    out.faces.push_back({f[1], bc, ab});
    out.faces.push_back({f[2], ca, bc});
    out.faces.push_back({ab, bc, ca});
  }
  out.r_in = mesh_inradius(out.vertices, out.faces);
  out.r_out = 1.0;
  return out;
}

// Canonical representative of a +/- axis pair: positive leading component.
Vec3 canonical(const Vec3& v) {
  for (int i = 2; i >= 0; --i) {
    if (std::abs(v[i]) > 1e-9) return v[i] > 0 ? v : negated(v);
  }
  return v;
}

std::vector<Vec3> canonical_axes(const std::vector<Vec3>& vertices) {
  std::vector<Vec3> axes;
  for (const Vec3& v : vertices) {
    const Vec3 c = canonical(v);
    bool seen = false;
    for (const Vec3& a : axes) {
      if (norm(sub(a, c)) < 1e-9) {
        seen = true;
        break;
      }
    }
    if (!seen) axes.push_back(c);
  }
  std::sort(axes.begin(), axes.end(), [](const Vec3& a, const Vec3& b) {
    if (a[0] != b[0]) return a[0] < b[0];
    if (a[1] != b[1]) return a[1] < b[1];
    return a[2] < b[2];
  });
  return axes;
}

// Best-inradius 13-axis subsets of the subdivided-icosahedron axis pools,
// as indices into the lexicographically sorted canonical pools. The level-2
// set is the exhaustive optimum over all C(21,13) subsets; the level-3 set
// came from a multi-start swap search over the 81-axis pool (best of ~250
// local optima). Recomputing either at startup is too slow, so the results
// are frozen here and guarded by inradius checks.
BlochPolytope from_pool_ids(const std::vector<Vec3>& pool,
                            const std::vector<int>& ids, const std::string& name,
                            double expected_r_in) {
  std::vector<Vec3> axes;
  for (int id : ids) axes.push_back(pool.at(static_cast<std::size_t>(id)));
  BlochPolytope p = axes_polytope(axes, name);
  require(std::abs(p.r_in - expected_r_in) < 1e-9, "axis pool drifted");
  return p;
}

Mat2 bloch_projector(const Vec3& n) {
  Mat2 m = 0.5 * Mat2::identity();
  m += 0.5 * (n[0] * pauli_x() + n[1] * pauli_y() + n[2] * pauli_z());
  return m;
}

Vec3 bloch_vector(const Mat2& m) {
  return {trace_product(m, pauli_x()).real(), trace_product(m, pauli_y()).real(),
          trace_product(m, pauli_z()).real()};
}

// Column source over pairs (response function, state vertex). A column for
// response lambda and vertex j carries (1, v_j) in the normalization block
// and in every axis block where lambda answers +. Pricing is exact: the
// per-axis gains enter independently, so the best lambda for each vertex
// keeps exactly the axes with positive gain.
class SteeringSource : public ColumnSource {
 public:
  SteeringSource(const std::vector<Vec3>& vertices, int n_axes)
      : vertices_(vertices), n_axes_(n_axes) {}

  bool price(const std::vector<double>& y, double tol,
             std::vector<double>& col_out) override {
    int best_j = -1;
    double best_score = tol;
    std::vector<bool> best_pick;
    std::vector<bool> pick(n_axes_);
    for (std::size_t j = 0; j < vertices_.size(); ++j) {
      const Vec3& v = vertices_[j];
      double score = y[0] + y[1] * v[0] + y[2] * v[1] + y[3] * v[2];
      for (int k = 0; k < n_axes_; ++k) {
        const std::size_t row = 4 + 4 * static_cast<std::size_t>(k);
        const double gain =
            y[row] + y[row + 1] * v[0] + y[row + 2] * v[1] + y[row + 3] * v[2];
        pick[k] = gain > 0.0;
        if (pick[k]) score += gain;
      }
      if (score > best_score) {
        best_score = score;
        best_j = static_cast<int>(j);
        best_pick = pick;
      }
    }
    if (best_j < 0) return false;

    col_out.assign(4 + 4 * static_cast<std::size_t>(n_axes_), 0.0);
    const Vec3& v = vertices_[best_j];
    col_out[0] = 1.0;
    for (int i = 0; i < 3; ++i) col_out[1 + i] = v[i];
    for (int k = 0; k < n_axes_; ++k) {
      if (!best_pick[k]) continue;
      const std::size_t row = 4 + 4 * static_cast<std::size_t>(k);
      col_out[row] = 1.0;
      for (int i = 0; i < 3; ++i) col_out[row + 1 + i] = v[i];
    }
    return true;
  }

 private:
  const std::vector<Vec3>& vertices_;
  int n_axes_;
};

// Undo the measurement shrink on the measuring side: the inverse of the
// depolarizing map with parameter r. Blows the local Bloch components up
// by 1/r, so positivity must be checked by the caller.
Mat4 expand_measuring_side(const Mat4& rho, double r, Direction dir) {
  const Mat2 half = 0.5 * Mat2::identity();
  Mat4 background;
  if (dir == Direction::BtoC) {
    background = tensor(half, partial_trace(rho, 1));
  } else {
    background = tensor(partial_trace(rho, 2), half);
  }
  return (1.0 / r) * (rho - (1.0 - r) * background);
}

std::string direction_name(Direction d) {
  return d == Direction::BtoC ? "b-to-c" : "c-to-b";
}

std::string status_name(SteeringStatus s) {
  switch (s) {
    case SteeringStatus::CertifiedUnsteerable:
      return "certified-unsteerable";
    case SteeringStatus::CertifiedSteerable:
      return "certified-steerable";
    default:
      return "undecided";
  }
}

}  // namespace

BlochPolytope octahedron() {
  BlochPolytope p;
  p.name = "octahedron";
  p.vertices = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  p.faces = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
             {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  p.r_in = mesh_inradius(p.vertices, p.faces);
  p.r_out = 1.0;
  return p;
}

BlochPolytope icosahedron() { return raw_icosahedron(); }

BlochPolytope icosphere(int level) {
  require(level >= 1 && level <= 3, "icosphere level must be 1, 2 or 3");
  BlochPolytope p = raw_icosahedron();
  for (int i = 0; i < level; ++i) p = subdivide(p);
  p.name = "icosphere" + std::to_string(level);
  return p;
}

BlochPolytope axes_polytope(const std::vector<Vec3>& axes,
                            const std::string& name) {
  BlochPolytope p;
  p.name = name;
  for (const Vec3& a : axes) {
    require(std::abs(norm(a) - 1.0) < 1e-9, "axes must be unit vectors");
    p.vertices.push_back(a);
    p.vertices.push_back(negated(a));
  }
  p.r_in = hull_inradius(p.vertices);
  p.r_out = 1.0;
  return p;
}

const BlochPolytope& measurement_polytope(int level) {
  require(level >= 1 && level <= 3, "level must be 1, 2 or 3");
  static const BlochPolytope level1 = [] {
    BlochPolytope p = raw_icosahedron();
    p.name = "icosahedron-6ax";
    return p;
  }();
  static const BlochPolytope level2 = from_pool_ids(
      canonical_axes(icosphere(1).vertices),
      {0, 1, 3, 4, 5, 6, 8, 9, 10, 13, 16, 17, 19}, "best13-of-21ax",
      0.847717062626);
  static const BlochPolytope level3 = from_pool_ids(
      canonical_axes(icosphere(2).vertices),
      {10, 13, 16, 21, 28, 41, 44, 47, 57, 62, 71, 72, 80}, "search13-of-81ax",
      0.868093774675);
  if (level == 1) return level1;
  if (level == 2) return level2;
  return level3;
}

const BlochPolytope& state_polytope() {
  static const BlochPolytope poly = icosphere(3);
  return poly;
}

BlochPolytope scaled(const BlochPolytope& p, double factor) {
  require(factor > 0.0, "scale factor must be positive");
  BlochPolytope out = p;
  for (Vec3& v : out.vertices) v = {v[0] * factor, v[1] * factor, v[2] * factor};
  out.r_in *= factor;
  out.r_out *= factor;
  out.name = p.name + "-x" + std::to_string(factor);
  return out;
}

double hull_inradius(const std::vector<Vec3>& points) {
  const int n = static_cast<int>(points.size());
  require(n >= 4, "need at least 4 points");
  require(n <= 64, "exhaustive facet search capped at 64 points");
  double best = 1e18;
  bool found = false;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const Vec3 nrm = cross(sub(points[j], points[i]), sub(points[k], points[i]));
        const double len = norm(nrm);
        if (len < 1e-12) continue;
        const double d = dot(nrm, points[i]);
        double mx = -1e18;
        double mn = 1e18;
        for (const Vec3& q : points) {
          const double t = dot(nrm, q);
          mx = std::max(mx, t);
          mn = std::min(mn, t);
        }
        const double tol = 1e-9 * len;
        if (mx <= d + tol) {
          require(d > tol, "origin is not interior to the hull");
          best = std::min(best, d / len);
          found = true;
        } else if (mn >= d - tol) {
          require(d < -tol, "origin is not interior to the hull");
          best = std::min(best, -d / len);
          found = true;
        }
      }
    }
  }
  require(found, "points are degenerate");
  return best;
}

LpStatus lhs_feasible(const DensityMatrix& rho, const BlochPolytope& meas,
                      const BlochPolytope& state_poly, Direction dir,
                      int* iterations) {
  const std::vector<Vec3> axes = canonical_axes(meas.vertices);
  const int n = static_cast<int>(axes.size());
  require(n >= 1 && n <= 13, "between 1 and 13 measurement axes supported");

  const Mat4 m = rho.matrix();
  const Mat2 reduced =
      dir == Direction::BtoC ? partial_trace(m, 1) : partial_trace(m, 2);

  // Right-hand side: the + outcome branch per axis plus the ensemble
  // totals. The - branches are implied: both outcomes of an axis sum to
  // the reduced state, which the total block pins down.
  std::vector<double> b(4 + 4 * static_cast<std::size_t>(n), 0.0);
  b[0] = 1.0;
  const Vec3 red_bloch = bloch_vector(reduced);
  for (int i = 0; i < 3; ++i) b[1 + i] = red_bloch[i];
  for (int k = 0; k < n; ++k) {
    const Mat2 proj = bloch_projector(axes[k]);
    const Mat4 selected = dir == Direction::BtoC
                              ? tensor(proj, Mat2::identity()) * m
                              : tensor(Mat2::identity(), proj) * m;
    const Mat2 sigma = partial_trace(selected, dir == Direction::BtoC ? 1 : 2);
    const std::size_t row = 4 + 4 * static_cast<std::size_t>(k);
    b[row] = trace(sigma).real();
    const Vec3 u = bloch_vector(sigma);
    for (int i = 0; i < 3; ++i) b[row + 1 + i] = u[i];
  }

  SteeringSource source(state_poly.vertices, n);
  const PhaseOneResult result = phase_one_feasible(b, source);
  if (iterations) *iterations += result.iterations;
  return result.status;
}

SteeringVerdict certify(const DensityMatrix& rho, int level) {
  require(level >= 1 && level <= 3, "level must be 1, 2 or 3");
  SteeringVerdict verdict;
  const BlochPolytope outer = scaled(state_polytope(), 1.0 / state_polytope().r_in);
  const BlochPolytope oct = octahedron();

  for (int l = 1; l <= level; ++l) {
    const BlochPolytope& meas = measurement_polytope(l);

    bool unsteerable = true;
    for (Direction dir : {Direction::BtoC, Direction::CtoB}) {
      const Mat4 expanded = expand_measuring_side(rho.matrix(), meas.r_in, dir);
      try {
        const DensityMatrix rho_hat(expanded);
        if (lhs_feasible(rho_hat, meas, state_polytope(), dir,
                         &verdict.lp_iterations) != LpStatus::Feasible) {
          unsteerable = false;
        }
      } catch (const Error&) {
        unsteerable = false;  // expansion left the state cone
      }
      if (!unsteerable) break;
    }
    if (unsteerable) {
      verdict.status = SteeringStatus::CertifiedUnsteerable;
      verdict.level = l;
      verdict.shrink = meas.r_in;
      verdict.detail = "meas=" + meas.name + " state=" + state_polytope().name;
      return verdict;
    }

    for (const BlochPolytope* axes_set : {&meas, &oct}) {
      for (Direction dir : {Direction::BtoC, Direction::CtoB}) {
        if (lhs_feasible(rho, *axes_set, outer, dir, &verdict.lp_iterations) ==
            LpStatus::Infeasible) {
          verdict.status = SteeringStatus::CertifiedSteerable;
          verdict.direction = dir;
          verdict.level = l;
          verdict.detail = "meas=" + axes_set->name + " state=" + outer.name;
          return verdict;
        }
      }
    }
  }
  verdict.detail = "exhausted levels 1.." + std::to_string(level);
  return verdict;
}

std::vector<SteeringVerdict> certify_batch(const std::vector<DensityMatrix>& states,
                                           int level) {
  std::vector<SteeringVerdict> verdicts;
  verdicts.reserve(states.size());
  for (const DensityMatrix& rho : states) verdicts.push_back(certify(rho, level));
  return verdicts;
}

double certified_visibility(Family family, double theta, int level) {
  const auto certified = [&](double v) {
    return certify(family_state(family, v, theta), level).status ==
           SteeringStatus::CertifiedUnsteerable;
  };

  // Coarse scan first: certificates must be monotone in visibility for
  // these families, so a certified point above an uncertified one means
  // the solver misbehaved and the bisection result would be meaningless.
  const double lo0 = 1.0 / 3.0;
  require(certified(lo0), "separable-regime state failed to certify");
  double lo = lo0;
  double hi = 1.0;
  bool seen_uncertified = false;
  for (int i = 1; i <= 6; ++i) {
    const double v = lo0 + (1.0 - lo0) * i / 7.0;
    if (certified(v)) {
      if (seen_uncertified) {
        throw Error(ErrorCode::SolverFailure,
                    "certificate not monotone in visibility");
      }
      lo = v;
    } else {
      if (!seen_uncertified) hi = v;
      seen_uncertified = true;
    }
  }
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    if (certified(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::string verdict_json(const SteeringVerdict& v) {
  nlohmann::json j;
  j["status"] = status_name(v.status);
  j["direction"] = direction_name(v.direction);
  j["level"] = v.level;
  j["shrink"] = v.shrink;
  j["lp_iterations"] = v.lp_iterations;
  j["detail"] = v.detail;
  return j.dump(2);
}

}  // namespace qss
