#pragma once

#include <string>
#include <vector>

#include "krein/spectral_core.hpp"
#include "krein/waves.hpp"

namespace krein {

/// Dense matrix in the real orthonormal Fourier basis of a grid.
///
/// Basis layout for n points (m = n/2 - 1), with θ_j = 2πj/n:
///   index 0          constant           1/√n
///   index k, 1..m    cos(kθ_j)          √(2/n)
///   index n/2        Nyquist (-1)^j     1/√n
///   index n/2 + k    sin(kθ_j)          √(2/n)
/// Cosines are even about x = 0 (node n/2), sines odd.
struct DenseMatrix {
  GridPtr grid;
  Eigen::MatrixXd entries;
  std::string label;

  int order() const { return static_cast<int>(entries.rows()); }
};

/// Self-adjoint operator: Fourier multiplier plus multiplication by a potential.
struct LinOperator {
  GridPtr grid;
  /// Real symbol in native DFT layout.
  Eigen::VectorXd multiplier_symbol;
  Eigen::VectorXd potential;
  std::string label;
  /// Order s of the dispersive part (used by the BBM symmetrization).
  double dispersion_s = 2.0;
  std::vector<std::string> warnings;
};

namespace basis {

inline int cos_index(int k) { return k; }
inline int sin_index(int k, int n) { return n / 2 + k; }

/// Coefficients Φᵀf.
Eigen::VectorXd analysis(const Eigen::VectorXd& f);
/// Samples Φa.
Eigen::VectorXd synthesis(const Eigen::VectorXd& a);
/// Dense Φ (n × n).  Only for tests and small n.
Eigen::MatrixXd matrix(int n);

/// Per-basis-function values of a native-layout symbol (entry |k| for cos_k, sin_k).
Eigen::VectorXd diagonal(const Eigen::VectorXd& native_symbol);

/// Mean-zero, Nyquist-free subspace: cos_1..cos_m then sin_1..sin_m.
std::vector<int> restricted_indices(int n);
Eigen::MatrixXd restrict(const Eigen::MatrixXd& A);
Eigen::VectorXd restrict(const Eigen::VectorXd& a);
/// Inverse of restrict for vectors (zeros in the dropped slots).
Eigen::VectorXd extend(const Eigen::VectorXd& r);

/// ∂_x on the restricted subspace: block-skew, cos_k -> -ω_k sin_k, sin_k -> ω_k cos_k.
Eigen::MatrixXd derivative(const SpectralGrid& grid);
/// ∂_x|∂_x|^{-1} on the restricted subspace (unit-modulus version of derivative()).
Eigen::MatrixXd unit_derivative(const SpectralGrid& grid);

}  // namespace basis

/// Matrix of L = multiplier + potential, symmetrized.
DenseMatrix assemble(const LinOperator& L);
/// Same, with the serial potential kernel.
DenseMatrix assemble_serial(const LinOperator& L);

double symmetry_defect(const Eigen::MatrixXd& A);

/// |∂|^s + c - (p+1)U^p.
LinOperator kdv_linearization(const WaveProfile& U);

/// c|∂|^s + (c-1) - (p+1)U^p.
LinOperator bbm_linearization(const WaveProfile& U);

/// R A R with R = (-∂² + ε²)^{1/4}.
DenseMatrix sandwich(const LinOperator& L, double eps);

/// B A B with B = (1 + |∂|^s)^{-1/2}.
DenseMatrix bbm_symmetrize(const LinOperator& L0);

/// -∂² + c - V.  Warns when V has not decayed at the box edge.
LinOperator schrodinger_operator(const RealField& V, double c);

/// Applies L matrix-free to a field.
RealField apply(const LinOperator& L, const RealField& f);

}  // namespace krein
