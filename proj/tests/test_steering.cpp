#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/qmath.hpp"
#include "core/states.hpp"
#include "core/steering.hpp"

using namespace qss;

namespace {

DensityMatrix iso(double v) { return DensityMatrix::isotropic(v); }

// Correlation functional sum_k |<sigma_k x sigma_k>|. Any ensemble of
// product states caps it at sqrt(3); the isotropic state scores 3v.
double pauli_diagonal_sum(const DensityMatrix& rho) {
  const Mat4 m = rho.matrix();
  double sum = 0.0;
  sum += std::abs(trace_product(m, tensor(pauli_x(), pauli_x())).real());
  sum += std::abs(trace_product(m, tensor(pauli_y(), pauli_y())).real());
  sum += std::abs(trace_product(m, tensor(pauli_z(), pauli_z())).real());
  return sum;
}

double bisect_lhs_threshold(const BlochPolytope& meas,
                            const BlochPolytope& state_poly) {
  double lo = 0.3;
  double hi = 1.0;
  REQUIRE(lhs_feasible(iso(lo), meas, state_poly, Direction::BtoC) ==
          LpStatus::Feasible);
  REQUIRE(lhs_feasible(iso(hi), meas, state_poly, Direction::BtoC) ==
          LpStatus::Infeasible);
  while (hi - lo > 2e-4) {
    const double mid = 0.5 * (lo + hi);
    if (lhs_feasible(iso(mid), meas, state_poly, Direction::BtoC) ==
        LpStatus::Feasible) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("octahedron and icosahedron geometry") {
  const BlochPolytope oct = octahedron();
  CHECK(oct.vertices.size() == 6);
  CHECK(oct.faces.size() == 8);
  CHECK(oct.r_in == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(hull_inradius(oct.vertices) ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-9));

  const BlochPolytope ico = icosahedron();
  CHECK(ico.vertices.size() == 12);
  CHECK(ico.faces.size() == 20);
  // Known closed form sqrt((5 + 2 sqrt 5) / 15) for the unit icosahedron.
  const double expected = std::sqrt((5.0 + 2.0 * std::sqrt(5.0)) / 15.0);
  CHECK(ico.r_in == doctest::Approx(expected).epsilon(1e-10));
  CHECK(hull_inradius(ico.vertices) == doctest::Approx(expected).epsilon(1e-9));
  for (const Vec3& v : ico.vertices) {
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("icosphere refinement tightens the inradius") {
  const BlochPolytope s1 = icosphere(1);
  const BlochPolytope s2 = icosphere(2);
  const BlochPolytope s3 = icosphere(3);
  CHECK(s1.vertices.size() == 42);
  CHECK(s2.vertices.size() == 162);
  CHECK(s3.vertices.size() == 642);
  CHECK(s1.faces.size() == 80);
  CHECK(s2.faces.size() == 320);
  CHECK(s1.r_in > icosahedron().r_in);
  CHECK(s2.r_in > s1.r_in);
  CHECK(s3.r_in > s2.r_in);
  CHECK(s3.r_in > 0.995);
  CHECK(state_polytope().vertices.size() == 642);
  CHECK(state_polytope().r_in == doctest::Approx(s3.r_in));
  CHECK_THROWS_AS(icosphere(4), Error);
}

TEST_CASE("measurement polytopes grow with level") {
  const BlochPolytope& m1 = measurement_polytope(1);
  const BlochPolytope& m2 = measurement_polytope(2);
  const BlochPolytope& m3 = measurement_polytope(3);
  CHECK(m1.vertices.size() == 12);
  CHECK(m2.vertices.size() == 26);
  CHECK(m3.vertices.size() == 26);
  CHECK(m2.r_in > m1.r_in);
  CHECK(m3.r_in > m2.r_in);
  CHECK(m2.r_in > 0.84);
  CHECK(m3.r_in > 0.86);
  MESSAGE("measurement inradii: level1=", m1.r_in, " level2=", m2.r_in,
          " level3=", m3.r_in);
  CHECK_THROWS_AS(measurement_polytope(0), Error);
  CHECK_THROWS_AS(measurement_polytope(4), Error);
}

TEST_CASE("scaled polytope and validation") {
  const BlochPolytope big = scaled(octahedron(), 2.0);
  CHECK(big.r_in == doctest::Approx(2.0 / std::sqrt(3.0)));
  CHECK(big.vertices[0][0] == doctest::Approx(2.0));
  CHECK_THROWS_AS(scaled(octahedron(), 0.0), Error);
  CHECK_THROWS_AS(axes_polytope({{1.0, 1.0, 0.0}}, "bad"), Error);
  CHECK_THROWS_AS(hull_inradius({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}}), Error);
  // Coplanar square: no facet encloses the origin in 3d.
  CHECK_THROWS_AS(
      hull_inradius({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}}), Error);
}

TEST_CASE("product state always admits a local model") {
  CVec<4> ket{};
  ket[0] = 1.0;  // |00>
  const DensityMatrix rho = DensityMatrix::from_pure(ket);
  for (Direction dir : {Direction::BtoC, Direction::CtoB}) {
    CHECK(lhs_feasible(rho, measurement_polytope(1), state_polytope(), dir) ==
          LpStatus::Feasible);
    CHECK(lhs_feasible(rho, octahedron(), state_polytope(), dir) ==
          LpStatus::Feasible);
  }
}

TEST_CASE("three-axis feasibility transition sits at 1/sqrt(3)") {
  // With X, Y, Z measurements the exact local-model threshold for the
  // isotropic family is 1/sqrt(3). A fine inner state polytope must place
  // the LP transition within its own inradius slack of that value.
  const BlochPolytope fine = icosphere(3);
  const double inner = bisect_lhs_threshold(octahedron(), fine);
  const double target = 1.0 / std::sqrt(3.0);
  CHECK(inner > target * fine.r_in - 2e-4);
  CHECK(inner < target + 2e-4);
  CHECK(inner == doctest::Approx(target).epsilon(5e-3));

  const BlochPolytope outer = scaled(fine, 1.0 / fine.r_in);
  const double relaxed = bisect_lhs_threshold(octahedron(), outer);
  CHECK(relaxed > target - 2e-4);
  CHECK(relaxed < target / fine.r_in + 2e-4);
  CHECK(relaxed == doctest::Approx(target).epsilon(5e-3));
  MESSAGE("three-axis thresholds: inner=", inner, " outer=", relaxed);
}

TEST_CASE("pauli diagonal functional matches the LP verdicts") {
  CHECK(pauli_diagonal_sum(iso(0.3)) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(pauli_diagonal_sum(iso(0.7)) == doctest::Approx(2.1).epsilon(1e-12));
  const BlochPolytope outer =
      scaled(state_polytope(), 1.0 / state_polytope().r_in);
  // 3 * 0.55 < sqrt(3): the three-axis witness cannot exclude a model.
  CHECK(lhs_feasible(iso(0.55), octahedron(), outer, Direction::BtoC) ==
        LpStatus::Feasible);
  // 3 * 0.80 > sqrt(3): it must exclude one, in both directions.
  CHECK(lhs_feasible(iso(0.80), octahedron(), outer, Direction::BtoC) ==
        LpStatus::Infeasible);
  CHECK(lhs_feasible(iso(0.80), octahedron(), outer, Direction::CtoB) ==
        LpStatus::Infeasible);
}

TEST_CASE("axis count cap is enforced") {
  // icosphere(1) carries 21 axes, beyond the supported response space.
  CHECK_THROWS_AS(lhs_feasible(iso(0.5), icosphere(1), state_polytope(),
                               Direction::BtoC),
                  Error);
}

TEST_CASE("certify separable and strongly steerable states") {
  const SteeringVerdict low = certify(iso(1.0 / 3.0), 1);
  CHECK(low.status == SteeringStatus::CertifiedUnsteerable);
  CHECK(low.level == 1);
  CHECK(low.shrink == doctest::Approx(icosahedron().r_in));
  CHECK(low.lp_iterations > 0);

  const SteeringVerdict high = certify(iso(0.70), 1);
  CHECK(high.status == SteeringStatus::CertifiedSteerable);
  CHECK(high.level == 1);

  const SteeringVerdict bell = certify(DensityMatrix::bell("phi+"), 1);
  CHECK(bell.status == SteeringStatus::CertifiedSteerable);

  // Pure partially entangled state: diagonal functional 1 + 2 sin(2 theta)
  // already beats sqrt(3) at theta = pi/8.
  const DensityMatrix pure =
      family_state(Family::Partial, 1.0, std::acos(-1.0) / 8.0);
  CHECK(certify(pure, 1).status == SteeringStatus::CertifiedSteerable);

  CHECK_THROWS_AS(certify(iso(0.5), 0), Error);
}

TEST_CASE("verdicts split the visibility axis into ordered bands") {
  bool seen_not_unsteerable = false;
  bool seen_steerable = false;
  int n_unsteerable = 0;
  int n_undecided = 0;
  int n_steerable = 0;
  for (double v = 0.05; v < 1.0; v += 0.10) {
    const SteeringVerdict verdict = certify(iso(v), 3);
    switch (verdict.status) {
      case SteeringStatus::CertifiedUnsteerable:
        CHECK_FALSE(seen_not_unsteerable);
        ++n_unsteerable;
        break;
      case SteeringStatus::Undecided:
        seen_not_unsteerable = true;
        CHECK_FALSE(seen_steerable);
        ++n_undecided;
        break;
      case SteeringStatus::CertifiedSteerable:
        seen_not_unsteerable = true;
        seen_steerable = true;
        ++n_steerable;
        break;
    }
  }
  CHECK(n_unsteerable >= 3);
  CHECK(n_steerable >= 3);
  MESSAGE("band sizes: unsteerable=", n_unsteerable, " undecided=", n_undecided,
          " steerable=", n_steerable);
}

TEST_CASE("isotropic symmetry treats both directions alike") {
  for (double v : {0.45, 0.62}) {
    int it_b = 0;
    int it_c = 0;
    const LpStatus sb = lhs_feasible(iso(v), octahedron(), state_polytope(),
                                     Direction::BtoC, &it_b);
    const LpStatus sc = lhs_feasible(iso(v), octahedron(), state_polytope(),
                                     Direction::CtoB, &it_c);
    CHECK(sb == sc);
    CHECK(it_b > 0);
    CHECK(it_c > 0);
  }
}

TEST_CASE("certified visibility clears the bar and grows with level") {
  const double cv1 = certified_visibility(Family::Isotropic, 0.3, 1);
  CHECK(cv1 >= 0.39);
  CHECK(cv1 < 0.50);

  const double cv3 = certified_visibility(Family::Isotropic, 0.3, 3);
  CHECK(cv3 >= 0.40);
  CHECK(cv3 >= cv1 - 1e-3);
  CHECK(cv3 < 0.50);  // the true threshold is 1/2; a certificate cannot pass it
  MESSAGE("certified visibility: level1=", cv1, " level3=", cv3);

  const double cv_partial = certified_visibility(Family::Partial, 0.2356, 1);
  CHECK(cv_partial >= cv1 - 1e-3);  // weaker entanglement certifies at least as far
  MESSAGE("certified visibility (partial, theta=0.2356): ", cv_partial);
}

TEST_CASE("batch certification matches individual calls") {
  const std::vector<DensityMatrix> states = {iso(0.2), iso(0.9)};
  const auto verdicts = certify_batch(states, 1);
  REQUIRE(verdicts.size() == 2);
  CHECK(verdicts[0].status == SteeringStatus::CertifiedUnsteerable);
  CHECK(verdicts[1].status == SteeringStatus::CertifiedSteerable);
}

TEST_CASE("verdict JSON carries the full record") {
  const SteeringVerdict v = certify(iso(0.2), 1);
  const auto j = nlohmann::json::parse(verdict_json(v));
  CHECK(j.at("status").get<std::string>() == "certified-unsteerable");
  CHECK(j.at("level").get<int>() == 1);
  CHECK(j.at("shrink").get<double>() == doctest::Approx(icosahedron().r_in));
  CHECK(j.at("lp_iterations").get<int>() > 0);
  CHECK(j.at("detail").get<std::string>().find("icosahedron") !=
        std::string::npos);
}
