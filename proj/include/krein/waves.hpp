#pragma once

#include <optional>
#include <string>
#include <vector>

#include "krein/spectral_core.hpp"

namespace krein {

enum class WaveModel { FKDV, FBBM, NORMALIZED };

std::string to_string(WaveModel m);

struct SolverOptions {
  int max_iters = 500;
  double tol = 1e-8;
  /// Petviashvili exponent; (p+1)/p when unset.
  std::optional<double> gamma;
  double seed_width = 2.0;

  /// tol 1e-10 for s = 2, 1e-8 otherwise.
  static SolverOptions defaults_for(double s);
};

struct WaveProfile {
  explicit WaveProfile(RealField f) : field(std::move(f)) {}

  RealField field;
  double s = 2.0;
  double p = 1.0;
  double c = 1.0;
  WaveModel model = WaveModel::NORMALIZED;
  double residual_norm = 0.0;
  /// max |U| over the outer 5% of the grid on each side.
  double boundary_value = 0.0;
  int iterations = 0;
  double stabilizing_factor = 1.0;
  bool truncation_warning = false;
  std::vector<std::string> warnings;

  const GridPtr& grid() const { return field.grid; }
  const Eigen::VectorXd& values() const { return field.values; }
  double peak() const { return field.values.maxCoeff(); }
};

/// Upper end of the existence window: 2s/(1-s) for s < 1, +inf otherwise.
double p_max(double s);

/// u^p for positive profiles.  Values below 1e-14·max(u) are clamped to that
/// floor first; the clamped L1 mass relative to ‖u‖₁ is written to
/// clamped_fraction when given.
Eigen::VectorXd clamped_power(const Eigen::VectorXd& u, double p,
                              double* clamped_fraction = nullptr);

/// u^r as used by the pipeline: exact repeated products for integer r (sign
/// kept, no clamping), clamped_power otherwise.
Eigen::VectorXd profile_power(const Eigen::VectorXd& u, double r,
                              double* clamped_fraction = nullptr);

/// Petviashvili iteration for |∂|^s Q + Q - Q^{p+1} = 0, centered at x = 0.
/// Throws ExistenceWindowError outside 0 < p < p_max(s), 0 < s <= 2, and
/// ConvergenceFailure if the residual target is not met.
WaveProfile solve_ground_state(double s, double p, const GridPtr& grid,
                               const SolverOptions& opts);

/// U_c(x) = c^{1/p} Q(c^{1/s} x), Q resampled by trigonometric interpolation.
WaveProfile kdv_wave(const WaveProfile& Q, double c);

/// U_c(x) = (c-1)^{1/p} Q(((c-1)/c)^{1/s} x), Q resampled by trigonometric
/// interpolation.
WaveProfile bbm_wave(const WaveProfile& Q, double c);

/// KdV wave without interpolation: Q is solved on the dilated grid of
/// half-length c^{1/s}ℓ, whose nodes map onto the target grid exactly.
WaveProfile kdv_wave_on(const GridPtr& grid, double s, double p, double c,
                        const SolverOptions& opts);

/// BBM analogue of kdv_wave_on (dilation ((c-1)/c)^{1/s}).
WaveProfile bbm_wave_on(const GridPtr& grid, double s, double p, double c,
                        const SolverOptions& opts);

/// Benjamin-Ono soliton 4c/(1+c²x²).  It solves |∂|U + cU - U²/2 = 0; the
/// residual of that equation is stored in residual_norm.
WaveProfile bo_profile(const GridPtr& grid, double c);

/// Classical gKdV soliton c^{1/p}((p+2)/2)^{1/p} sech^{2/p}(p√c x/2).
WaveProfile sech_profile(const GridPtr& grid, double p, double c);

/// Sup-norm residual of the profile equation matching the model tag:
///   NORMALIZED, FKDV: |∂|^s U + cU - U^{p+1}
///   FBBM:            c|∂|^s U + (c-1)U - U^{p+1}
double existence_residual(const WaveProfile& U);

/// max |U| over the outer 5% of the grid.
double boundary_value(const RealField& f);

}  // namespace krein
