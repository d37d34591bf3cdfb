#include "krein/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "krein/spectral_core.hpp"

namespace krein::kernels {

namespace {

struct CosSinTable {
  int n;
  Eigen::VectorXcd half;
  // Σ v_j cos(2πqj/n) and Σ v_j sin(2πqj/n) for any integer q.
  double c(int q) const {
    q = ((q % n) + n) % n;
    return q <= n / 2 ? half[q].real() : half[n - q].real();
  }
  double s(int q) const {
    q = ((q % n) + n) % n;
    return q <= n / 2 ? -half[q].imag() : half[n - q].imag();
  }
};

inline double basis_norm(int i, int n) {
  return (i == 0 || i == n / 2) ? 1.0 / std::sqrt(double(n)) : std::sqrt(2.0 / n);
}

inline void fill_row(const CosSinTable& t, Eigen::MatrixXd& M, int i) {
  const int n = t.n, h = n / 2;
  const double b = std::sqrt(2.0 / n);
  if (i <= h) {
    const int k = i;
    const double ak = basis_norm(k, n);
    for (int l = 0; l <= h; ++l)
      M(i, l) = ak * basis_norm(l, n) * 0.5 * (t.c(k - l) + t.c(k + l));
    for (int l = 1; l < h; ++l) M(i, h + l) = ak * b * 0.5 * (t.s(l + k) + t.s(l - k));
  } else {
    const int k = i - h;
    for (int l = 0; l <= h; ++l)
      M(i, l) = basis_norm(l, n) * b * 0.5 * (t.s(k + l) + t.s(k - l));
    for (int l = 1; l < h; ++l) M(i, h + l) = b * b * 0.5 * (t.c(k - l) - t.c(k + l));
  }
}

inline double interpolate_one(const Eigen::VectorXcd& half, int n, double x0, double period,
                              double y) {
  if (y < x0 || y >= x0 + period) return 0.0;
  const double theta = 2.0 * std::numbers::pi * (y - x0) / period;
  double acc = half[0].real();
  const std::complex<double> step = std::polar(1.0, theta);
  std::complex<double> rot = step;
  for (int k = 1; k < n / 2; ++k) {
    // re-seed periodically to keep the recurrence at round-off level
    if ((k & 63) == 0) rot = std::polar(1.0, theta * k);
    acc += 2.0 * (half[k] * rot).real();
    rot *= step;
  }
  acc += half[n / 2].real() * std::cos(theta * (n / 2));
  return acc / n;
}

}  // namespace

Eigen::MatrixXd potential_block_serial(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  CosSinTable t{n, fft::forward_half(v)};
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) fill_row(t, M, i);
  return M;
}

Eigen::MatrixXd potential_block(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  CosSinTable t{n, fft::forward_half(v)};
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) fill_row(t, M, i);
  return M;
}

Eigen::VectorXd trig_interpolate_serial(const Eigen::VectorXd& f, double x0, double period,
                                        const Eigen::VectorXd& y) {
  const int n = static_cast<int>(f.size());
  const Eigen::VectorXcd half = fft::forward_half(f);
  Eigen::VectorXd out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = interpolate_one(half, n, x0, period, y[i]);
  return out;
}

Eigen::VectorXd trig_interpolate(const Eigen::VectorXd& f, double x0, double period,
                                 const Eigen::VectorXd& y) {
  const int n = static_cast<int>(f.size());
  const Eigen::VectorXcd half = fft::forward_half(f);
  Eigen::VectorXd out(y.size());
  const long m = static_cast<long>(y.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < m; ++i) out[i] = interpolate_one(half, n, x0, period, y[i]);
  return out;
}

Eigen::VectorXd quadratic_forms_serial(const Eigen::MatrixXd& A, const Eigen::MatrixXcd& V) {
  Eigen::VectorXd out(V.cols());
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    const Eigen::VectorXd re = V.col(j).real(), im = V.col(j).imag();
    Eigen::VectorXd are = Eigen::VectorXd::Zero(A.rows()), aim = Eigen::VectorXd::Zero(A.rows());
    are.noalias() += A * re;
    aim.noalias() += A * im;
    out[j] = re.dot(are) + im.dot(aim);
  }
  return out;
}

Eigen::VectorXd quadratic_forms(const Eigen::MatrixXd& A, const Eigen::MatrixXcd& V) {
  constexpr long kBlock = 64;
  const long m = static_cast<long>(V.cols());
  const long blocks = (m + kBlock - 1) / kBlock;
  Eigen::VectorXd out(m);
#pragma omp parallel for schedule(dynamic)
  for (long b = 0; b < blocks; ++b) {
    const long j0 = b * kBlock, w = std::min(kBlock, m - j0);
    const Eigen::MatrixXd re = V.middleCols(j0, w).real(), im = V.middleCols(j0, w).imag();
    const Eigen::MatrixXd are = A * re, aim = A * im;
    out.segment(j0, w) = (re.cwiseProduct(are) + im.cwiseProduct(aim)).colwise().sum().transpose();
  }
  return out;
}

}  // namespace krein::kernels
