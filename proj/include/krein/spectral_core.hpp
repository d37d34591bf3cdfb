#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace krein {

/// Uniform periodic grid of n points on [-ℓ, ℓ) standing in for the real line.
///
/// Wavenumbers follow the 2π-in-exponent convention, ξ_k = k / (2ℓ), and are
/// stored in the native DFT layout: 0, 1, ..., n/2-1, -n/2, ..., -1 (divided
/// by 2ℓ).  The single entry at -n/2 is the Nyquist mode.
class SpectralGrid {
 public:
  SpectralGrid(int n, double half_length);

  int n() const noexcept { return n_; }
  double half_length() const noexcept { return half_length_; }
  double spacing() const noexcept { return spacing_; }
  const std::vector<double>& wavenumbers() const noexcept { return wavenumbers_; }

  /// x_j = -ℓ + j·spacing.
  double point(int j) const noexcept { return -half_length_ + j * spacing_; }
  Eigen::VectorXd points() const;

  /// Index of the collocation point x = 0.
  int center_index() const noexcept { return n_ / 2; }

  bool same_as(const SpectralGrid& other) const noexcept {
    return n_ == other.n_ && half_length_ == other.half_length_;
  }

 private:
  int n_;
  double half_length_;
  double spacing_;
  std::vector<double> wavenumbers_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

/// Throws std::invalid_argument for odd n, n < 8 or non-positive ℓ.
GridPtr make_grid(int n, double half_length);

/// Samples f(x_j) on a grid.
struct RealField {
  GridPtr grid;
  Eigen::VectorXd values;

  RealField(GridPtr g, Eigen::VectorXd v);

  template <class F>
  static RealField sample(const GridPtr& g, F&& f) {
    Eigen::VectorXd v(g->n());
    for (int j = 0; j < g->n(); ++j) v[j] = f(g->point(j));
    return RealField(g, std::move(v));
  }
};

enum class SymbolKind { SelfAdjoint, SkewAdjoint };

/// A Fourier multiplier m(ξ_k) on a grid, native DFT layout.
///
/// Skew-adjoint symbols vanish on the Nyquist mode: that mode has no
/// conjugate partner, so a purely imaginary symbol cannot act on it and keep
/// fields real.
struct Multiplier {
  GridPtr grid;
  std::vector<std::complex<double>> symbol;
  std::string name;
  SymbolKind kind = SymbolKind::SelfAdjoint;
  /// The zero-mode symbol is a placeholder; inputs must be mean-zero.
  bool requires_mean_zero = false;
};

/// |∂_x|^s: symbol (2π|ξ|)^s.  Throws for s < 0.
Multiplier fractional_derivative_multiplier(const GridPtr& grid, double s);

/// |∂_x|^{-a} for a > 0, zero on the zero mode.
Multiplier inverse_fractional_multiplier(const GridPtr& grid, double a);

/// ∂_x: symbol 2πiξ.
Multiplier derivative_multiplier(const GridPtr& grid);

/// J = ∂_x|∂_x|^{-1}: symbol -i·sign(ξ), zero on the zero mode.
Multiplier hilbert_multiplier(const GridPtr& grid);

/// ∂_x^{-1}: symbol -1/(2πiξ), zero on the zero mode.
Multiplier antiderivative_multiplier(const GridPtr& grid);

/// (-∂_x² + ε²)^{1/4}: symbol (4π²ξ² + ε²)^{1/4}.
Multiplier regularized_quarter_root_multiplier(const GridPtr& grid, double eps);

/// Pointwise product of symbols (operator composition).
Multiplier compose(const Multiplier& a, const Multiplier& b);

/// Applies a multiplier.  Multipliers flagged requires_mean_zero reject
/// inputs with |mean| > mean_tol·rms(f) by throwing NonIntegrableInput.
RealField apply(const Multiplier& m, const RealField& f, double mean_tol = 1e-10);

/// Full-length DFT, F_k = Σ_j f_j e^{-2πi kj/n}.
Eigen::VectorXcd transform(const RealField& f);

/// Inverse of transform; the imaginary part of the synthesis is dropped.
RealField inverse_transform(const GridPtr& grid, const Eigen::VectorXcd& spectrum);

/// Trapezoidal ⟨f, g⟩ = spacing · Σ f_j g_j.  Throws GridMismatch.
double inner_product(const RealField& f, const RealField& g);

/// Fourier-side pairing (spacing/n) Σ F_k conj(G_k); equals inner_product by Parseval.
double fourier_pairing(const SpectralGrid& grid, const Eigen::VectorXcd& F,
                       const Eigen::VectorXcd& G);

double mean(const RealField& f);
double rms(const RealField& f);
double l2_norm(const RealField& f);
double sup_norm(const RealField& f);

namespace fft {
/// Half spectrum (n/2 + 1 entries) of a real sequence, unnormalized.
Eigen::VectorXcd forward_half(const Eigen::VectorXd& f);
/// Inverse of forward_half including the 1/n factor.
Eigen::VectorXd backward_half(const Eigen::VectorXcd& half, int n);
}  // namespace fft

}  // namespace krein
