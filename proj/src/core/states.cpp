#include "core/states.hpp"

#include <cmath>

namespace qss {

CVec<4> bell_vector(int bitflip, int phaseflip) {
  require((bitflip == 0 || bitflip == 1) && (phaseflip == 0 || phaseflip == 1),
          "bell_vector: indices must be 0 or 1");
  const double r = 1.0 / std::sqrt(2.0);
  const double sign = phaseflip ? -1.0 : 1.0;
  if (bitflip == 0) return {r, 0.0, 0.0, sign * r};  // |00> +- |11>
  return {0.0, r, sign * r, 0.0};                    // |01> +- |10>
}

std::pair<int, int> bell_index(const std::string& name) {
  if (name == "phi+") return {0, 0};
  if (name == "phi-") return {0, 1};
  if (name == "psi+") return {1, 0};
  if (name == "psi-") return {1, 1};
  throw Error(ErrorCode::InvalidArgument,
              "unknown bell state '" + name + "' (want phi+, phi-, psi+, psi-)");
}

DensityMatrix::DensityMatrix(const Mat4& rho) : rho_(rho) {
  require(is_hermitian(rho, kTol), "density matrix is not hermitian");
  require(std::abs(trace(rho) - 1.0) <= kTol, "density matrix trace is not 1");
  require(min_eigenvalue(rho) >= -kTol, "density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::from_pure(const CVec<4>& psi) {
  double norm2 = 0.0;
  for (const auto& c : psi) norm2 += std::norm(c);
  require(std::abs(norm2 - 1.0) <= kTol, "pure state vector is not normalized");
  Mat4 rho;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
  return DensityMatrix(rho);
}

DensityMatrix DensityMatrix::bell(const std::string& name) {
  const auto [s, t] = bell_index(name);
  return from_pure(bell_vector(s, t));
}

DensityMatrix DensityMatrix::isotropic(double v) {
  return partially_entangled(v, M_PI / 4.0);
}

DensityMatrix DensityMatrix::partially_entangled(double v, double theta) {
  require(v >= 0.0 && v <= 1.0 + kTol, "visibility outside [0, 1]");
  require(theta > 0.0 && theta <= M_PI / 4.0 + kTol, "theta outside (0, pi/4]");
  const CVec<4> psi{std::cos(theta), 0.0, 0.0, std::sin(theta)};
  Mat4 rho;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rho(i, j) = v * psi[i] * std::conj(psi[j]);
  for (int i = 0; i < 4; ++i) rho(i, i) += (1.0 - v) / 4.0;
  return DensityMatrix(rho);
}

double DensityMatrix::negativity() const {
  const auto eig = herm_eig(partial_transpose(rho_, 2));
  double neg = 0.0;
  for (double lam : eig.values) neg += std::max(0.0, -lam);
  return neg;
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  const Mat4 ra = psd_sqrt(a.matrix());
  const Mat4 inner = ra * b.matrix() * ra;
  const Mat4 root = psd_sqrt(inner);
  const double tr = trace(root).real();
  return tr * tr;
}

}  // namespace qss
