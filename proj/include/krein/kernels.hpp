#pragma once

// Hot loops of the pipeline.  Each kernel has a serial reference and an
// OpenMP version; the two must agree to round-off.

#include <Eigen/Dense>

namespace krein::kernels {

/// Φᵀ diag(v) Φ in the real orthonormal Fourier basis (see operators.hpp for
/// the index layout), built from the DFT of v.
Eigen::MatrixXd potential_block_serial(const Eigen::VectorXd& v);
Eigen::MatrixXd potential_block(const Eigen::VectorXd& v);

/// Trigonometric interpolant of periodic samples f_j = f(x0 + j·period/n),
/// evaluated at arbitrary points y.  Points outside [x0, x0 + period) give 0
/// (the line function is taken to vanish beyond the box).
Eigen::VectorXd trig_interpolate_serial(const Eigen::VectorXd& f, double x0, double period,
                                        const Eigen::VectorXd& y);
Eigen::VectorXd trig_interpolate(const Eigen::VectorXd& f, double x0, double period,
                                 const Eigen::VectorXd& y);

/// Re(v_jᴴ A v_j) for every column v_j of V.
Eigen::VectorXd quadratic_forms_serial(const Eigen::MatrixXd& A, const Eigen::MatrixXcd& V);
Eigen::VectorXd quadratic_forms(const Eigen::MatrixXd& A, const Eigen::MatrixXcd& V);

}  // namespace krein::kernels
