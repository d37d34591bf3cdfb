#include "krein/spectral_core.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

#include "krein/errors.hpp"

namespace krein {

namespace {

// FFTW planning is not thread-safe, execution with the new-array interface
// is.  Plans are created once per size and never destroyed.
struct Plans {
  fftw_plan r2c;
  fftw_plan c2r;
};

const Plans& plans_for(int n) {
  static std::mutex mu;
  static std::map<int, Plans> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
  Plans p;
  p.r2c = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.c2r = fftw_plan_dft_c2r_1d(n, out, in, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(in);
  fftw_free(out);
  return cache.emplace(n, p).first->second;
}

void check_same(const SpectralGrid& a, const SpectralGrid& b) {
  if (!a.same_as(b)) throw GridMismatch("fields live on different grids");
}

bool is_nyquist(int k, int n) { return k == n / 2; }

}  // namespace

namespace fft {

Eigen::VectorXcd forward_half(const Eigen::VectorXd& f) {
  const int n = static_cast<int>(f.size());
  Eigen::VectorXcd out(n / 2 + 1);
  Eigen::VectorXd in = f;  // r2c may clobber its input
  fftw_execute_dft_r2c(plans_for(n).r2c, in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

Eigen::VectorXd backward_half(const Eigen::VectorXcd& half, int n) {
  Eigen::VectorXcd in = half;  // c2r always clobbers its input
  Eigen::VectorXd out(n);
  fftw_execute_dft_c2r(plans_for(n).c2r, reinterpret_cast<fftw_complex*>(in.data()),
                       out.data());
  return out / static_cast<double>(n);
}

}  // namespace fft

SpectralGrid::SpectralGrid(int n, double half_length)
    : n_(n), half_length_(half_length), spacing_(2.0 * half_length / n), wavenumbers_(n) {
  for (int k = 0; k < n; ++k) {
    const int kk = k < n / 2 ? k : k - n;
    wavenumbers_[k] = kk / (2.0 * half_length);
  }
}

Eigen::VectorXd SpectralGrid::points() const {
  Eigen::VectorXd x(n_);
  for (int j = 0; j < n_; ++j) x[j] = point(j);
  return x;
}

GridPtr make_grid(int n, double half_length) {
  if (n < 8 || n % 2 != 0) throw std::invalid_argument("grid size must be even and >= 8");
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw std::invalid_argument("half_length must be positive");
  return std::make_shared<const SpectralGrid>(n, half_length);
}

RealField::RealField(GridPtr g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw std::invalid_argument("null grid");
  if (values.size() != grid->n()) throw GridMismatch("field length differs from grid size");
}

Multiplier fractional_derivative_multiplier(const GridPtr& grid, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("fractional order must be >= 0");
  Multiplier m{grid, {}, "abs_d^" + std::to_string(s), SymbolKind::SelfAdjoint, false};
  m.symbol.resize(grid->n());
  for (int k = 0; k < grid->n(); ++k) {
    const double w = 2.0 * std::numbers::pi * std::abs(grid->wavenumbers()[k]);
    m.symbol[k] = s == 0.0 ? 1.0 : std::pow(w, s);
  }
  return m;
}

Multiplier inverse_fractional_multiplier(const GridPtr& grid, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("inverse order must be > 0");
  Multiplier m{grid, {}, "abs_d^-" + std::to_string(a), SymbolKind::SelfAdjoint, true};
  m.symbol.resize(grid->n());
  for (int k = 0; k < grid->n(); ++k) {
    const double w = 2.0 * std::numbers::pi * std::abs(grid->wavenumbers()[k]);
    m.symbol[k] = k == 0 ? 0.0 : std::pow(w, -a);
  }
  return m;
}

Multiplier derivative_multiplier(const GridPtr& grid) {
  Multiplier m{grid, {}, "d", SymbolKind::SkewAdjoint, false};
  m.symbol.resize(grid->n());
  for (int k = 0; k < grid->n(); ++k) {
    if (is_nyquist(k, grid->n())) continue;
    m.symbol[k] = {0.0, 2.0 * std::numbers::pi * grid->wavenumbers()[k]};
  }
  return m;
}

Multiplier hilbert_multiplier(const GridPtr& grid) {
  Multiplier m{grid, {}, "J", SymbolKind::SkewAdjoint, false};
  m.symbol.resize(grid->n());
  for (int k = 1; k < grid->n(); ++k) {
    if (is_nyquist(k, grid->n())) continue;
    m.symbol[k] = {0.0, grid->wavenumbers()[k] > 0 ? -1.0 : 1.0};
  }
  return m;
}

Multiplier antiderivative_multiplier(const GridPtr& grid) {
  Multiplier m{grid, {}, "d^-1", SymbolKind::SkewAdjoint, true};
  m.symbol.resize(grid->n());
  for (int k = 1; k < grid->n(); ++k) {
    if (is_nyquist(k, grid->n())) continue;
    // 1/(2πiξ) = -i/(2πξ), the inverse of the ∂ symbol
    m.symbol[k] = {0.0, -1.0 / (2.0 * std::numbers::pi * grid->wavenumbers()[k])};
  }
  return m;
}

Multiplier regularized_quarter_root_multiplier(const GridPtr& grid, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("eps must be >= 0");
  Multiplier m{grid, {}, "quarter_root_eps", SymbolKind::SelfAdjoint, false};
  m.symbol.resize(grid->n());
  for (int k = 0; k < grid->n(); ++k) {
    const double w = 2.0 * std::numbers::pi * grid->wavenumbers()[k];
    m.symbol[k] = std::sqrt(std::sqrt(w * w + eps * eps));
  }
  return m;
}

Multiplier compose(const Multiplier& a, const Multiplier& b) {
  check_same(*a.grid, *b.grid);
  Multiplier m{a.grid, a.symbol, a.name + "*" + b.name, SymbolKind::SelfAdjoint,
               a.requires_mean_zero || b.requires_mean_zero};
  for (size_t k = 0; k < m.symbol.size(); ++k) m.symbol[k] *= b.symbol[k];
  m.kind = a.kind == b.kind ? SymbolKind::SelfAdjoint : SymbolKind::SkewAdjoint;
  return m;
}

RealField apply(const Multiplier& m, const RealField& f, double mean_tol) {
  check_same(*m.grid, *f.grid);
  if (m.requires_mean_zero) {
    const double mu = mean(f);
    if (std::abs(mu) > mean_tol * rms(f))
      throw NonIntegrableInput(m.name + " needs a mean-zero field (mean " + std::to_string(mu) + ")");
  }
  const int n = f.grid->n();
  Eigen::VectorXcd half = fft::forward_half(f.values);
  for (int k = 0; k <= n / 2; ++k) half[k] *= m.symbol[k];
  return RealField(f.grid, fft::backward_half(half, n));
}

Eigen::VectorXcd transform(const RealField& f) {
  const int n = f.grid->n();
  Eigen::VectorXcd half = fft::forward_half(f.values);
  Eigen::VectorXcd full(n);
  for (int k = 0; k <= n / 2; ++k) full[k] = half[k];
  for (int k = n / 2 + 1; k < n; ++k) full[k] = std::conj(half[n - k]);
  return full;
}

RealField inverse_transform(const GridPtr& grid, const Eigen::VectorXcd& spectrum) {
  const int n = grid->n();
  if (spectrum.size() != n) throw GridMismatch("spectrum length differs from grid size");
  // Hermitian part only: the real synthesis of an arbitrary spectrum.
  Eigen::VectorXcd half(n / 2 + 1);
  half[0] = spectrum[0].real();
  for (int k = 1; k < n / 2; ++k) half[k] = 0.5 * (spectrum[k] + std::conj(spectrum[n - k]));
  half[n / 2] = spectrum[n / 2].real();
  return RealField(grid, fft::backward_half(half, n));
}

double inner_product(const RealField& f, const RealField& g) {
  check_same(*f.grid, *g.grid);
  return f.grid->spacing() * f.values.dot(g.values);
}

double fourier_pairing(const SpectralGrid& grid, const Eigen::VectorXcd& F,
                       const Eigen::VectorXcd& G) {
  if (F.size() != grid.n() || G.size() != grid.n())
    throw GridMismatch("spectrum length differs from grid size");
  std::complex<double> acc = 0.0;
  for (int k = 0; k < grid.n(); ++k) acc += F[k] * std::conj(G[k]);
  return grid.spacing() / grid.n() * acc.real();
}

double mean(const RealField& f) { return f.values.mean(); }

double rms(const RealField& f) { return f.values.norm() / std::sqrt(static_cast<double>(f.values.size())); }

double l2_norm(const RealField& f) { return std::sqrt(inner_product(f, f)); }

double sup_norm(const RealField& f) { return f.values.cwiseAbs().maxCoeff(); }

}  // namespace krein
