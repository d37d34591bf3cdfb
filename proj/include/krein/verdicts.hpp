#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "krein/spectra.hpp"
#include "krein/waves.hpp"

namespace krein {

enum class Verdict { STABLE, UNSTABLE, DEGENERATE };
std::string to_string(Verdict v);

/// Grid and tolerance settings for one verdict computation.
struct Numerics {
  int n = 1024;
  double half_length = 40.0;
  SolverOptions solver;
  /// Relative zero tolerance for counts and pseudo-inverses (times ‖A‖₂).
  double zero_rel = 1e-8;
  /// |slope| ≤ degeneracy_rel·energy/c is DEGENERATE.
  double degeneracy_rel = 1e-3;
  /// Zero an under-resolved translation eigenvalue (see deflate_kernel).
  bool restore_translation = true;
  /// Step of the BBM finite-difference slope.
  double bbm_dc = 1e-3;
  /// Throw TheoryViolation instead of recording it.
  bool strict = true;
  /// Keep eigenvalues, classes and form values in the result.
  bool keep_spectrum = false;
};

/// Grids that resolve the translation mode for each dispersion order:
/// s ≥ 1.9: (1024, 40); 1 ≤ s < 1.9: (2048, 100); 0.7 ≤ s < 1: (2048, 40);
/// s < 0.7: (2048, 20).
Numerics default_numerics(double s);

struct BbmChecks {
  double finite_difference = 0.0;
  double closed_form = 0.0;
  double printed_bracket = 0.0;
  bool step_flag = false;
};

struct KreinIndexResult {
  double s = 0.0, p = 0.0, c = 0.0;
  WaveModel model = WaveModel::FKDV;
  int n = 0;
  double half_length = 0.0;

  int n_L = 0;
  /// Constrained quantity with the line antiderivative (full basis).
  double d = 0.0;
  /// Same on the mean-zero subspace; K_torus uses this one.
  double d_restricted = 0.0;
  int n_L_restricted = 0;
  /// -2d: ∂_c⟨U_c,U_c⟩ (KdV) or ∂_c⟨(I+M)U_c,U_c⟩ (BBM).
  double slope = 0.0;
  /// Scaling-law slope (KdV) or closed form (BBM).
  double slope_reference = 0.0;
  double slope_tol = 0.0;

  int K_formula = 0;
  int k_r = 0, k_c = 0, k_i_minus = 0;
  int K_direct = 0;
  /// n(A_r) - n(d_r): the identity the periodic matrix obeys exactly.
  int K_torus = 0;
  Verdict verdict = Verdict::STABLE;
  bool theory_violation = false;
  bool accuracy_warning = false;

  int indeterminate = 0;
  double zero_spread = 0.0;
  double quadruple_defect = 0.0;
  GeneralizedKernel gker;
  double wave_residual = 0.0;
  double boundary_ratio = 0.0;
  bool translation_restored = false;
  double restored_eigenvalue = 0.0;
  std::optional<BbmChecks> bbm;
  std::vector<std::string> diagnostics;

  std::vector<std::complex<double>> eigenvalues;
  std::vector<EigenClass> classes;
  std::vector<double> form_values;
};

/// Full pipeline for |∂|^s u + cu - u^{p+1} waves.  Stage failures propagate
/// with the stage name prefixed; a formula/direct mismatch throws
/// TheoryViolation when numerics.strict.
KreinIndexResult kdv_verdict(double s, double p, double c, const Numerics& numerics);

/// Same for c|∂|^s u + (c-1)u - u^{p+1} waves through B L₀ B.
KreinIndexResult bbm_verdict(double s, double p, double c, const Numerics& numerics);

enum class SweepAxis { P, C, S };

struct SweepPoint {
  double value = 0.0;
  std::string status;  // "ok", "theory_violation" or the failure message
  std::optional<KreinIndexResult> result;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  /// Consecutive successful, non-degenerate points whose verdicts differ.
  std::vector<std::pair<double, double>> flips;
};

/// `steps` evenly spaced values on [lo, hi] (one value when steps == 1 or
/// lo == hi, none when steps == 0).  Failures are recorded, not thrown.
/// Numerics come from `numerics` when given, else default_numerics(s) per point.
SweepResult sweep(SweepAxis axis, double lo, double hi, int steps, double s, double p, double c,
                  WaveModel model, const std::optional<Numerics>& numerics = {});

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfCheckReport {
  std::string case_name;
  std::vector<Assertion> assertions;
  bool all_passed() const;
};

/// Known cases: gkdv-p2, gkdv-p5, schrodinger-sech2, bo.
std::vector<std::string> self_check_cases();

/// Throws std::invalid_argument for unknown names.
SelfCheckReport self_check(const std::string& case_name);

}  // namespace krein
