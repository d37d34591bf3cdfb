#pragma once

// Thin LAPACK wrappers.

#include <Eigen/Dense>

namespace krein::linalg {

/// Symmetric eigensolve (dsyevd), eigenvalues ascending.  Only the lower
/// triangle is read.  vectors may be null.
void eigh(const Eigen::MatrixXd& A, Eigen::VectorXd& values, Eigen::MatrixXd* vectors);

/// General real eigensolve (dgeev).  Right eigenvectors, unit 2-norm, when
/// vectors is non-null.
void eig(const Eigen::MatrixXd& A, Eigen::VectorXcd& values, Eigen::MatrixXcd* vectors);

}  // namespace krein::linalg
