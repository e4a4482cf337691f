#include "core/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qss {

namespace {

// One complex Jacobi rotation zeroing A(p,q). Writing A(p,q) = r e^{i phi},
// the diagonal unitary diag(1, e^{-i phi}) reduces the 2x2 block to the real
// symmetric [[a, r], [r, b]], which a plane rotation with
//   tau = (b - a) / (2 r),  t = sign(tau) / (|tau| + sqrt(1 + tau^2)),
//   c = 1 / sqrt(1 + t^2),  s = t c
// diagonalizes. The combined block is
//   J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
// and the update A <- J^dagger A J touches only rows and columns p, q.
template <int N>
void jacobi_rotate(CMat<N>& m, CMat<N>& vec, int p, int q) {
  const cplx apq = m(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const cplx phase = apq / r;  // e^{i phi}
  const double a = m(p, p).real();
  const double b = m(q, q).real();

  const double tau = (b - a) / (2.0 * r);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  m(p, p) = a - t * r;
  m(q, q) = b + t * r;
  m(p, q) = 0.0;
  m(q, p) = 0.0;

  const cplx jqp = -s * std::conj(phase);
  const cplx jqq = c * std::conj(phase);
  for (int i = 0; i < N; ++i) {
    if (i == p || i == q) continue;
    const cplx mip = m(i, p), miq = m(i, q);
    m(i, p) = c * mip + jqp * miq;
    m(i, q) = s * mip + jqq * miq;
    m(p, i) = std::conj(m(i, p));
    m(q, i) = std::conj(m(i, q));
  }
  for (int i = 0; i < N; ++i) {
    const cplx vip = vec(i, p), viq = vec(i, q);
    vec(i, p) = c * vip + jqp * viq;
    vec(i, q) = s * vip + jqq * viq;
  }
}

template <int N>
double off_diag_max(const CMat<N>& m) {
  double v = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) v = std::max(v, std::abs(m(i, j)));
  return v;
}

}  // namespace

template <int N>
EigResult<N> herm_eig(const CMat<N>& input) {
  require(is_hermitian(input, 1e-8 * std::max(1.0, max_abs(input))),
          "herm_eig: matrix is not hermitian");
  CMat<N> m = input;
  // Symmetrize so roundoff in the input cannot bias the iteration.
  for (int i = 0; i < N; ++i) {
    m(i, i) = m(i, i).real();
    for (int j = i + 1; j < N; ++j) {
      const cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }
  CMat<N> vec = CMat<N>::identity();
  const double tol = 1e-14 * std::max(1.0, max_abs(m));

  bool converged = false;
  for (int sweep = 0; sweep < 60; ++sweep) {
    if (off_diag_max(m) <= tol) {
      converged = true;
      break;
    }
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q)
        if (std::abs(m(p, q)) > tol) jacobi_rotate(m, vec, p, q);
  }
  if (!converged && off_diag_max(m) > tol)
    throw Error(ErrorCode::SolverFailure, "herm_eig: jacobi iteration did not converge");

  EigResult<N> out;
  std::array<int, N> order;
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int l, int r) { return m(l, l).real() < m(r, r).real(); });
  for (int k = 0; k < N; ++k) {
    out.values[k] = m(order[k], order[k]).real();
    for (int i = 0; i < N; ++i) out.vectors(i, k) = vec(i, order[k]);
  }
  return out;
}

template EigResult<2> herm_eig<2>(const CMat<2>&);
template EigResult<4> herm_eig<4>(const CMat<4>&);

namespace {

template <int N>
CMat<N> psd_sqrt_impl(const CMat<N>& m) {
  const auto eig = herm_eig(m);
  require(eig.values[0] > -1e-7 * std::max(1.0, std::abs(eig.values[N - 1])),
          "psd_sqrt: matrix has a significantly negative eigenvalue");
  CMat<N> out;
  for (int k = 0; k < N; ++k) {
    const double lam = std::max(0.0, eig.values[k]);
    const double root = std::sqrt(lam);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        out(i, j) += root * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
  }
  return out;
}

}  // namespace

Mat4 psd_sqrt(const Mat4& m) { return psd_sqrt_impl(m); }
Mat2 psd_sqrt2(const Mat2& m) { return psd_sqrt_impl(m); }

double min_eigenvalue(const Mat4& m) { return herm_eig(m).values[0]; }

Mat2 pauli_x() {
  Mat2 m;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

Mat2 pauli_y() {
  Mat2 m;
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return m;
}

Mat2 pauli_z() {
  Mat2 m;
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

}  // namespace qss
