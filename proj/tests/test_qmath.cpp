#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/qmath.hpp"
#include "core/rng.hpp"

using namespace qss;

namespace {

Mat4 random_hermitian(Rng& rng) {
  Mat4 g;
  for (auto& v : g.a) v = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  Mat4 h = g + adjoint(g);
  h *= 0.5;
  return h;
}

Mat2 random_mat2(Rng& rng) {
  Mat2 g;
  for (auto& v : g.a) v = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  return g;
}

}  // namespace

TEST_CASE("tensor satisfies the mixed product identity") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Mat2 a = random_mat2(rng), b = random_mat2(rng);
    const Mat2 c = random_mat2(rng), d = random_mat2(rng);
    const Mat4 lhs = tensor(a, b) * tensor(c, d);
    const Mat4 rhs = tensor(a * c, b * d);
    CHECK(max_abs_diff(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("tensor is bilinear") {
  Rng rng(12);
  const Mat2 a = random_mat2(rng), b = random_mat2(rng), c = random_mat2(rng);
  const Mat4 lhs = tensor(a + b, c);
  const Mat4 rhs = tensor(a, c) + tensor(b, c);
  CHECK(max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("partial trace collapses the traced factor") {
  Rng rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    const Mat2 x = random_mat2(rng), y = random_mat2(rng);
    const Mat4 joint = tensor(x, y);
    Mat2 want2 = x;
    want2 *= trace(y);
    CHECK(max_abs_diff(partial_trace(joint, 2), want2) < 1e-12);
    Mat2 want1 = y;
    want1 *= trace(x);
    CHECK(max_abs_diff(partial_trace(joint, 1), want1) < 1e-12);
  }
  CHECK(std::abs(trace(partial_trace(tensor(random_mat2(rng), random_mat2(rng)), 1))) > 0.0);
}

TEST_CASE("partial transpose of a maximally entangled projector") {
  // |phi+> = (|00> + |11>)/sqrt(2); its partial transpose has a single
  // negative eigenvalue -1/2 and three eigenvalues +1/2.
  CVec<4> phi{1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};
  Mat4 proj;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) proj(i, j) = phi[i] * std::conj(phi[j]);
  for (int subsystem : {1, 2}) {
    const auto eig = herm_eig(partial_transpose(proj, subsystem));
    CHECK(eig.values[0] == doctest::Approx(-0.5).epsilon(1e-12));
    for (int k = 1; k < 4; ++k)
      CHECK(eig.values[k] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("partial transpose is an involution and preserves hermiticity") {
  Rng rng(14);
  const Mat4 h = random_hermitian(rng);
  CHECK(is_hermitian(partial_transpose(h, 2)));
  CHECK(max_abs_diff(partial_transpose(partial_transpose(h, 2), 2), h) < 1e-15);
  CHECK(max_abs_diff(partial_transpose(partial_transpose(h, 1), 1), h) < 1e-15);
}

TEST_CASE("herm_eig reconstructs random hermitian matrices") {
  Rng rng(15);
  for (int rep = 0; rep < 50; ++rep) {
    const Mat4 h = random_hermitian(rng);
    const auto eig = herm_eig(h);

    for (int k = 1; k < 4; ++k) CHECK(eig.values[k] >= eig.values[k - 1]);

    // Orthonormal columns.
    const Mat4 gram = adjoint(eig.vectors) * eig.vectors;
    CHECK(max_abs_diff(gram, Mat4::identity()) < 1e-12);

    // V D V^dagger == H.
    Mat4 recon;
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          recon(i, j) += eig.values[k] * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    CHECK(max_abs_diff(recon, h) < 1e-10);
  }
}

TEST_CASE("herm_eig on pauli matrices") {
  for (const Mat2& p : {pauli_x(), pauli_y(), pauli_z()}) {
    const auto eig = herm_eig(p);
    CHECK(eig.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(eig.values[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
  const auto id = herm_eig(Mat2::identity());
  CHECK(id.values[0] == doctest::Approx(1.0));
  CHECK(id.values[1] == doctest::Approx(1.0));
}

TEST_CASE("herm_eig rejects a non-hermitian input") {
  Mat4 m;
  m(0, 1) = 1.0;  // missing conjugate partner
  CHECK_THROWS_AS(herm_eig(m), Error);
}

TEST_CASE("psd_sqrt squares back to the input") {
  Rng rng(16);
  for (int rep = 0; rep < 20; ++rep) {
    const Mat4 g = random_hermitian(rng);
    const Mat4 psd = g * g;  // hermitian squared is PSD
    const Mat4 root = psd_sqrt(psd);
    CHECK(is_hermitian(root));
    CHECK(herm_eig(root).values[0] >= -1e-12);
    CHECK(max_abs_diff(root * root, psd) < 1e-9);
  }
}

TEST_CASE("psd_sqrt rejects an indefinite matrix") {
  CHECK_THROWS_AS(psd_sqrt(tensor(pauli_z(), Mat2::identity())), Error);
}

TEST_CASE("trace_product matches trace of the product") {
  Rng rng(17);
  const Mat4 a = random_hermitian(rng), b = random_hermitian(rng);
  CHECK(std::abs(trace_product(a, b) - trace(a * b)) < 1e-12);
}

TEST_CASE("rng is deterministic and substreams are independent of chunking") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng s0 = Rng::substream(42, 0), s1 = Rng::substream(42, 1);
  CHECK(s0.next_u64() != s1.next_u64());
  double mean = 0.0;
  Rng n(7);
  for (int i = 0; i < 10000; ++i) mean += n.normal();
  mean /= 10000.0;
  CHECK(std::abs(mean) < 0.05);
}
