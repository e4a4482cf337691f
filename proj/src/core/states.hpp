#pragma once
#include <string>

#include "core/qmath.hpp"

namespace qss {

/// Bell state vector indexed by (bitflip, phaseflip): (0,0) phi+, (0,1) phi-,
/// (1,0) psi+, (1,1) psi-.
CVec<4> bell_vector(int bitflip, int phaseflip);

/// Parses "phi+", "phi-", "psi+", "psi-" into the (bitflip, phaseflip) pair.
std::pair<int, int> bell_index(const std::string& name);

/// Validated two-qubit density matrix. Construction throws if the matrix is
/// not hermitian, unit trace, and positive semidefinite within tolerance.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Mat4& rho);

  static DensityMatrix from_pure(const CVec<4>& psi);
  static DensityMatrix bell(const std::string& name);

  /// v |phi+><phi+| + (1-v) I/4 with v in [0, 1].
  static DensityMatrix isotropic(double v);

  /// v |phi_theta><phi_theta| + (1-v) I/4 with
  /// |phi_theta> = cos(theta)|00> + sin(theta)|11> and theta in (0, pi/4].
  static DensityMatrix partially_entangled(double v, double theta);

  const Mat4& matrix() const { return rho_; }

  /// Entanglement negativity: the absolute sum of the negative eigenvalues
  /// of the partial transpose. Zero exactly for separable two-qubit states.
  double negativity() const;

 private:
  Mat4 rho_;
};

/// Squared Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2. Symmetric, equals
/// <psi|b|psi> when a is the pure state |psi>.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace qss
