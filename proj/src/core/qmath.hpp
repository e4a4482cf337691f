#pragma once
#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

// Dense complex linear algebra for 2x2 and 4x4 matrices. Everything here is
// hand-rolled on purpose: the dimensions are tiny and fixed, so a cyclic
// Jacobi eigensolver converges in a handful of sweeps and we avoid carrying
// a numerical dependency for what amounts to a few hundred flops per call.

namespace qss {

using cplx = std::complex<double>;

// Error taxonomy shared by the whole library. The C API maps these to codes.
enum class ErrorCode { InvalidArgument, SolverFailure, Internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(ErrorCode::InvalidArgument, msg);
}

// Global comparison tolerance for structural checks (hermiticity, trace,
// POVM completeness). Eigen-reconstruction checks use the tighter bound.
inline constexpr double kTol = 1e-9;
inline constexpr double kEigTol = 1e-10;

template <int N>
struct CMat {
  std::array<cplx, N * N> a{};

  cplx& operator()(int r, int c) { return a[r * N + c]; }
  const cplx& operator()(int r, int c) const { return a[r * N + c]; }

  static CMat zero() { return CMat{}; }
  static CMat identity() {
    CMat m;
    for (int i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  CMat& operator+=(const CMat& o) {
    for (int i = 0; i < N * N; ++i) a[i] += o.a[i];
    return *this;
  }
  CMat& operator-=(const CMat& o) {
    for (int i = 0; i < N * N; ++i) a[i] -= o.a[i];
    return *this;
  }
  CMat& operator*=(cplx s) {
    for (auto& v : a) v *= s;
    return *this;
  }

  friend CMat operator+(CMat l, const CMat& r) { return l += r; }
  friend CMat operator-(CMat l, const CMat& r) { return l -= r; }
  friend CMat operator*(cplx s, CMat m) { return m *= s; }

  friend CMat operator*(const CMat& l, const CMat& r) {
    CMat out;
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < N; ++k) {
        const cplx lik = l(i, k);
        if (lik == cplx{}) continue;
        for (int j = 0; j < N; ++j) out(i, j) += lik * r(k, j);
      }
    return out;
  }
};

using Mat2 = CMat<2>;
using Mat4 = CMat<4>;
template <int N>
using CVec = std::array<cplx, N>;

template <int N>
CMat<N> adjoint(const CMat<N>& m) {
  CMat<N> out;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out(i, j) = std::conj(m(j, i));
  return out;
}

template <int N>
cplx trace(const CMat<N>& m) {
  cplx t = 0.0;
  for (int i = 0; i < N; ++i) t += m(i, i);
  return t;
}

template <int N>
cplx trace_product(const CMat<N>& l, const CMat<N>& r) {
  cplx t = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) t += l(i, j) * r(j, i);
  return t;
}

template <int N>
double max_abs(const CMat<N>& m) {
  double v = 0.0;
  for (const auto& x : m.a) v = std::max(v, std::abs(x));
  return v;
}

template <int N>
double max_abs_diff(const CMat<N>& l, const CMat<N>& r) {
  double v = 0.0;
  for (int i = 0; i < N * N; ++i) v = std::max(v, std::abs(l.a[i] - r.a[i]));
  return v;
}

template <int N>
bool is_hermitian(const CMat<N>& m, double tol = kTol) {
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
  return true;
}

// Kronecker product, row-major convention: (A (x) B)(ij,kl) = A(i,k) B(j,l).
// The first factor is the subsystem sent by Bob, the second Charlie's.
inline Mat4 tensor(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          out(2 * i + j, 2 * k + l) = a(i, k) * b(j, l);
  return out;
}

inline CVec<4> tensor(const CVec<2>& a, const CVec<2>& b) {
  return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

// Trace out one subsystem of a two-qubit operator (1 = first, 2 = second).
inline Mat2 partial_trace(const Mat4& m, int subsystem) {
  require(subsystem == 1 || subsystem == 2, "partial_trace: subsystem must be 1 or 2");
  Mat2 out;
  if (subsystem == 2) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        out(i, j) = m(2 * i + 0, 2 * j + 0) + m(2 * i + 1, 2 * j + 1);
  } else {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        out(i, j) = m(0 + i, 0 + j) + m(2 + i, 2 + j);
  }
  return out;
}

// Transpose one subsystem in place: (ij,kl) -> (il,kj) for subsystem 2.
inline Mat4 partial_transpose(const Mat4& m, int subsystem = 2) {
  require(subsystem == 1 || subsystem == 2, "partial_transpose: subsystem must be 1 or 2");
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          if (subsystem == 2)
            out(2 * i + j, 2 * k + l) = m(2 * i + l, 2 * k + j);
          else
            out(2 * i + j, 2 * k + l) = m(2 * k + j, 2 * i + l);
        }
  return out;
}

template <int N>
struct EigResult {
  std::array<double, N> values;  // ascending
  CMat<N> vectors;               // columns, orthonormal
};

// Cyclic complex Jacobi for Hermitian matrices. At dimension <= 4 this
// reaches machine precision within a few sweeps.
template <int N>
EigResult<N> herm_eig(const CMat<N>& input);

// V f(D) V^dagger helpers built on herm_eig.
Mat4 psd_sqrt(const Mat4& m);
Mat2 psd_sqrt2(const Mat2& m);

double min_eigenvalue(const Mat4& m);

extern template EigResult<2> herm_eig<2>(const CMat<2>&);
extern template EigResult<4> herm_eig<4>(const CMat<4>&);

// Pauli matrices and common single-qubit constants.
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();

}  // namespace qss
