#include "krein/linalg.hpp"

#include <string>
#include <vector>

#include <lapacke.h>

#include "krein/errors.hpp"

namespace krein::linalg {

void eigh(const Eigen::MatrixXd& A, Eigen::VectorXd& values, Eigen::MatrixXd* vectors) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  values.resize(n);
  if (n == 0) {
    if (vectors) vectors->resize(0, 0);
    return;
  }
  Eigen::MatrixXd work = A;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n,
                                         work.data(), n, values.data());
  if (info != 0) throw NumericalError("dsyevd failed, info = " + std::to_string(info));
  if (vectors) *vectors = std::move(work);
}

void eig(const Eigen::MatrixXd& A, Eigen::VectorXcd& values, Eigen::MatrixXcd* vectors) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  values.resize(n);
  if (n == 0) {
    if (vectors) vectors->resize(0, 0);
    return;
  }
  Eigen::MatrixXd work = A;
  std::vector<double> wr(n), wi(n);
  Eigen::MatrixXd vr;
  if (vectors) vr.resize(n, n);
  const lapack_int info =
      LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n, work.data(), n, wr.data(),
                    wi.data(), nullptr, 1, vectors ? vr.data() : nullptr, n);
  if (info != 0) throw NumericalError("dgeev failed, info = " + std::to_string(info));
  for (lapack_int j = 0; j < n; ++j) values[j] = {wr[j], wi[j]};
  if (!vectors) return;
  vectors->resize(n, n);
  for (lapack_int j = 0; j < n; ++j) {
    if (wi[j] == 0.0) {
      vectors->col(j) = vr.col(j).cast<std::complex<double>>();
    } else {
      // conjugate pair stored as (re, im) in columns j, j+1
      const Eigen::VectorXcd v =
          vr.col(j).cast<std::complex<double>>() + std::complex<double>(0, 1) * vr.col(j + 1);
      vectors->col(j) = v;
      vectors->col(j + 1) = v.conjugate();
      ++j;
    }
  }
  for (lapack_int j = 0; j < n; ++j) vectors->col(j).normalize();
}

}  // namespace krein::linalg
