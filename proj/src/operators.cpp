#include "krein/operators.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "krein/kernels.hpp"

namespace krein {

namespace basis {

Eigen::VectorXd analysis(const Eigen::VectorXd& f) {
  const int n = static_cast<int>(f.size()), h = n / 2;
  const Eigen::VectorXcd F = fft::forward_half(f);
  const double a0 = 1.0 / std::sqrt(double(n)), b = std::sqrt(2.0 / n);
  Eigen::VectorXd a(n);
  a[0] = a0 * F[0].real();
  a[h] = a0 * F[h].real();
  for (int k = 1; k < h; ++k) {
    a[k] = b * F[k].real();
    a[h + k] = -b * F[k].imag();
  }
  return a;
}

Eigen::VectorXd synthesis(const Eigen::VectorXd& a) {
  const int n = static_cast<int>(a.size()), h = n / 2;
  const double rn = std::sqrt(double(n)), r2 = std::sqrt(n / 2.0);
  Eigen::VectorXcd G(h + 1);
  G[0] = rn * a[0];
  G[h] = rn * a[h];
  for (int k = 1; k < h; ++k) G[k] = {r2 * a[k], -r2 * a[h + k]};
  return fft::backward_half(G, n);
}

Eigen::MatrixXd matrix(int n) {
  const int h = n / 2;
  Eigen::MatrixXd P(n, n);
  const double a0 = 1.0 / std::sqrt(double(n)), b = std::sqrt(2.0 / n);
  for (int j = 0; j < n; ++j) {
    const double th = 2.0 * std::numbers::pi * j / n;
    P(j, 0) = a0;
    P(j, h) = (j % 2 == 0 ? 1.0 : -1.0) * a0;
    for (int k = 1; k < h; ++k) {
      P(j, k) = b * std::cos(k * th);
      P(j, h + k) = b * std::sin(k * th);
    }
  }
  return P;
}

Eigen::VectorXd diagonal(const Eigen::VectorXd& native_symbol) {
  const int n = static_cast<int>(native_symbol.size()), h = n / 2;
  Eigen::VectorXd d(n);
  for (int k = 0; k <= h; ++k) d[k] = native_symbol[k];
  for (int k = 1; k < h; ++k) d[h + k] = native_symbol[k];
  return d;
}

std::vector<int> restricted_indices(int n) {
  const int h = n / 2;
  std::vector<int> idx;
  idx.reserve(n - 2);
  for (int k = 1; k < h; ++k) idx.push_back(k);
  for (int k = 1; k < h; ++k) idx.push_back(h + k);
  return idx;
}

Eigen::MatrixXd restrict(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows()), h = n / 2, m = h - 1;
  Eigen::MatrixXd R(2 * m, 2 * m);
  R.block(0, 0, m, m) = A.block(1, 1, m, m);
  R.block(0, m, m, m) = A.block(1, h + 1, m, m);
  R.block(m, 0, m, m) = A.block(h + 1, 1, m, m);
  R.block(m, m, m, m) = A.block(h + 1, h + 1, m, m);
  return R;
}

Eigen::VectorXd restrict(const Eigen::VectorXd& a) {
  const int n = static_cast<int>(a.size()), h = n / 2, m = h - 1;
  Eigen::VectorXd r(2 * m);
  r.head(m) = a.segment(1, m);
  r.tail(m) = a.segment(h + 1, m);
  return r;
}

Eigen::VectorXd extend(const Eigen::VectorXd& r) {
  const int m = static_cast<int>(r.size()) / 2, h = m + 1, n = 2 * h;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  a.segment(1, m) = r.head(m);
  a.segment(h + 1, m) = r.tail(m);
  return a;
}

namespace {
Eigen::MatrixXd skew_blocks(int n, const std::function<double(int)>& w) {
  const int m = n / 2 - 1;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  for (int k = 1; k <= m; ++k) {
    D(m + k - 1, k - 1) = -w(k);
    D(k - 1, m + k - 1) = w(k);
  }
  return D;
}
}  // namespace

Eigen::MatrixXd derivative(const SpectralGrid& grid) {
  const double L = grid.half_length();
  return skew_blocks(grid.n(), [L](int k) { return std::numbers::pi * k / L; });
}

Eigen::MatrixXd unit_derivative(const SpectralGrid& grid) {
  return skew_blocks(grid.n(), [](int) { return 1.0; });
}

}  // namespace basis

namespace {

Eigen::VectorXd native_symbol(const SpectralGrid& g, double s, double a, double b) {
  Eigen::VectorXd m(g.n());
  for (int k = 0; k < g.n(); ++k) {
    const double w = 2.0 * std::numbers::pi * std::abs(g.wavenumbers()[k]);
    m[k] = a * (w == 0.0 ? 0.0 : std::pow(w, s)) + b;
  }
  return m;
}

DenseMatrix assemble_with(const LinOperator& L, bool parallel) {
  Eigen::MatrixXd M = parallel ? kernels::potential_block(L.potential)
                               : kernels::potential_block_serial(L.potential);
  M.diagonal() += basis::diagonal(L.multiplier_symbol);
  Eigen::MatrixXd S = 0.5 * (M + M.transpose());
  return DenseMatrix{L.grid, std::move(S), L.label};
}

DenseMatrix conjugate_diag(const DenseMatrix& A, const Eigen::VectorXd& d, std::string label) {
  Eigen::MatrixXd M = d.asDiagonal() * A.entries * d.asDiagonal();
  Eigen::MatrixXd S = 0.5 * (M + M.transpose());
  return DenseMatrix{A.grid, std::move(S), std::move(label)};
}

}  // namespace

DenseMatrix assemble(const LinOperator& L) { return assemble_with(L, true); }

DenseMatrix assemble_serial(const LinOperator& L) { return assemble_with(L, false); }

double symmetry_defect(const Eigen::MatrixXd& A) {
  const double scale = A.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (A - A.transpose()).cwiseAbs().maxCoeff() / scale;
}

LinOperator kdv_linearization(const WaveProfile& U) {
  const bool ok = U.model == WaveModel::FKDV || (U.model == WaveModel::NORMALIZED && U.c == 1.0);
  if (!ok) throw std::invalid_argument("kdv_linearization needs an FKDV (or normalized) profile");
  LinOperator L;
  L.grid = U.grid();
  L.multiplier_symbol = native_symbol(*U.grid(), U.s, 1.0, U.c);
  L.potential = -(U.p + 1.0) * profile_power(U.values(), U.p);
  L.dispersion_s = U.s;
  std::ostringstream os;
  os << "L_kdv(s=" << U.s << ",p=" << U.p << ",c=" << U.c << ")";
  L.label = os.str();
  return L;
}

LinOperator bbm_linearization(const WaveProfile& U) {
  if (U.model != WaveModel::FBBM) throw std::invalid_argument("bbm_linearization needs an FBBM profile");
  if (!(U.c > 1.0)) throw std::invalid_argument("BBM speed must exceed 1");
  LinOperator L;
  L.grid = U.grid();
  L.multiplier_symbol = native_symbol(*U.grid(), U.s, U.c, U.c - 1.0);
  L.potential = -(U.p + 1.0) * profile_power(U.values(), U.p);
  L.dispersion_s = U.s;
  std::ostringstream os;
  os << "L0_bbm(s=" << U.s << ",p=" << U.p << ",c=" << U.c << ")";
  L.label = os.str();
  return L;
}

DenseMatrix sandwich(const LinOperator& L, double eps) {
  const Multiplier R = regularized_quarter_root_multiplier(L.grid, eps);
  Eigen::VectorXd native(L.grid->n());
  for (int k = 0; k < L.grid->n(); ++k) native[k] = R.symbol[k].real();
  std::ostringstream os;
  os << "sandwich(" << L.label << ",eps=" << eps << ")";
  return conjugate_diag(assemble(L), basis::diagonal(native), os.str());
}

DenseMatrix bbm_symmetrize(const LinOperator& L0) {
  Eigen::VectorXd native = native_symbol(*L0.grid, L0.dispersion_s, 1.0, 1.0);
  native = native.cwiseSqrt().cwiseInverse();
  return conjugate_diag(assemble(L0), basis::diagonal(native), "symmetrized(" + L0.label + ")");
}

LinOperator schrodinger_operator(const RealField& V, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("Schrodinger shift c must be positive");
  LinOperator L;
  L.grid = V.grid;
  L.multiplier_symbol = native_symbol(*V.grid, 2.0, 1.0, c);
  L.potential = -V.values;
  L.dispersion_s = 2.0;
  const double vmax = V.values.cwiseAbs().maxCoeff();
  if (boundary_value(V) > 1e-6 * vmax)
    L.warnings.push_back("potential has not decayed at the box edge");
  std::ostringstream os;
  os << "schrodinger(c=" << c << ")";
  L.label = os.str();
  return L;
}

RealField apply(const LinOperator& L, const RealField& f) {
  if (!L.grid->same_as(*f.grid)) throw std::invalid_argument("operator and field grids differ");
  const int n = L.grid->n();
  Eigen::VectorXcd h = fft::forward_half(f.values);
  for (int k = 0; k <= n / 2; ++k) h[k] *= L.multiplier_symbol[k];
  Eigen::VectorXd out = fft::backward_half(h, n) + L.potential.cwiseProduct(f.values);
  return RealField(f.grid, out);
}

}  // namespace krein
