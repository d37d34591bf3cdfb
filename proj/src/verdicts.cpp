#include "krein/verdicts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "krein/errors.hpp"

namespace krein {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::STABLE: return "STABLE";
    case Verdict::UNSTABLE: return "UNSTABLE";
    case Verdict::DEGENERATE: return "DEGENERATE";
  }
  return "?";
}

Numerics default_numerics(double s) {
  Numerics n;
  n.solver = SolverOptions::defaults_for(s);
  n.solver.max_iters = 5000;
  if (s >= 1.9) {
    n.n = 1024;
    n.half_length = 40.0;
  } else if (s >= 1.0) {
    n.n = 2048;
    n.half_length = 100.0;
  } else if (s >= 0.7) {
    n.n = 2048;
    n.half_length = 40.0;
  } else {
    n.n = 2048;
    n.half_length = 20.0;
  }
  return n;
}

namespace {

template <class E>
[[noreturn]] void rethrow_as(const char* stage, const E& e) {
  throw E(std::string(stage) + ": " + e.what());
}

// Runs f, prefixing the stage name to any numerical failure.
template <class F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConvergenceFailure& e) {
    throw ConvergenceFailure(std::string(stage) + ": " + e.what(), e.last_residual());
  } catch (const ExistenceWindowError& e) {
    rethrow_as(stage, e);
  } catch (const FredholmViolation& e) {
    rethrow_as(stage, e);
  } catch (const NonIntegrableInput& e) {
    rethrow_as(stage, e);
  } catch (const GridMismatch& e) {
    rethrow_as(stage, e);
  } catch (const TheoryViolation& e) {
    rethrow_as(stage, e);
  } catch (const NumericalError& e) {
    rethrow_as(stage, e);
  }
}

int count_below(const Eigen::VectorXd& v, double t) {
  return static_cast<int>((v.array() < -t).count());
}

int count_zero(const Eigen::VectorXd& v) { return static_cast<int>((v.array() == 0.0).count()); }

struct PipelineInput {
  Eigen::MatrixXd A;      // full-basis symmetric matrix
  Eigen::VectorXd mode;   // expected kernel direction (coefficients)
  Eigen::VectorXd w;      // ∂⁻¹ψ₀ coefficients
  std::string ham_label;
};

void run_pipeline(KreinIndexResult& r, PipelineInput in, const GridPtr& g, const Numerics& nm) {
  const int n = g->n();
  const double h = g->spacing();

  SymmetricEigen eig = staged("eigensolve", [&] { return symmetric_eigen(in.A, n / 2 + 1); });
  const double zt = nm.zero_rel * eig.scale;
  const Deflation df =
      deflate_kernel(in.A, eig, zt, nm.restore_translation ? &in.mode : nullptr);
  r.translation_restored = df.restored;
  r.restored_eigenvalue = df.restored_eigenvalue;
  for (const auto& w : df.warnings) r.diagnostics.push_back(w);
  if (df.restored) r.accuracy_warning = true;
  r.n_L = count_below(eig.values, zt);
  const int kdim = count_zero(eig.values);
  if (kdim != 1) {
    r.diagnostics.push_back("kernel dimension " + std::to_string(kdim) + " (expected 1)");
    r.accuracy_warning = true;
  }
  const ConstrainedQuantity d =
      staged("constrained quantity", [&] { return constrained_quantity(eig, in.w, h, zt); });
  r.d = d.value;
  if (d.near_singular) r.diagnostics.push_back("constrained solve is near singular");

  Eigen::MatrixXd Ar = basis::restrict(in.A);
  SymmetricEigen er = staged("restricted eigensolve", [&] { return symmetric_eigen(Ar, n / 2 - 1); });
  const double ztr = nm.zero_rel * er.scale;
  const Eigen::VectorXd mr = basis::restrict(in.mode);
  deflate_kernel(Ar, er, ztr, nm.restore_translation ? &mr : nullptr);
  r.n_L_restricted = count_below(er.values, ztr);
  const Eigen::VectorXd wr = basis::restrict(in.w);
  r.d_restricted = staged("restricted constrained quantity",
                          [&] { return constrained_quantity(er, wr, h, ztr).value; });

  HamiltonianSpectrum H = staged("hamiltonian eigensolve", [&] {
    return hamiltonian_spectrum(Ar, basis::derivative(*g), true);
  });
  H.method = in.ham_label;
  r.gker = generalized_kernel(kdim, r.d, 0.5 * r.slope_tol);
  const KreinClassification kc =
      classify_krein(H, default_krein_tolerances(H, er.scale), r.gker.dim);
  r.k_r = kc.k_r;
  r.k_c = kc.k_c;
  r.k_i_minus = kc.k_i_minus;
  r.K_direct = kc.k_ham();
  r.indeterminate = static_cast<int>(kc.indeterminate.size());
  r.zero_spread = kc.zero_spread;
  r.quadruple_defect = quadruple_defect(H.eigenvalues);
  if (r.indeterminate > 0) {
    r.diagnostics.push_back(std::to_string(r.indeterminate) + " indeterminate signatures");
    r.accuracy_warning = true;
  }
  r.K_torus = r.n_L_restricted - (r.d_restricted < 0.0 ? 1 : 0);
  if (nm.keep_spectrum) {
    r.eigenvalues.assign(H.eigenvalues.data(), H.eigenvalues.data() + H.eigenvalues.size());
    r.classes = kc.classes;
    r.form_values.assign(kc.form_values.data(), kc.form_values.data() + kc.form_values.size());
  }
}

void decide(KreinIndexResult& r, const Numerics& nm) {
  r.slope = -2.0 * r.d;
  const bool degenerate = std::abs(r.slope) <= r.slope_tol;
  r.K_formula = r.n_L - (r.slope > 0.0 ? 1 : 0);
  if (degenerate) {
    r.verdict = Verdict::DEGENERATE;
    r.diagnostics.push_back("slope within the degeneracy band; index formula not applied");
  } else if (r.K_formula == 0) {
    r.verdict = Verdict::STABLE;
  } else if (r.K_formula % 2 != 0) {
    r.verdict = Verdict::UNSTABLE;
  } else if (r.k_r + r.k_c > 0) {
    r.verdict = Verdict::UNSTABLE;
  } else {
    r.verdict = Verdict::STABLE;
    r.diagnostics.push_back("even index carried by negative-signature imaginary eigenvalues");
  }
  if (!degenerate && r.slope_reference != 0.0 && (r.slope > 0.0) != (r.slope_reference > 0.0)) {
    r.diagnostics.push_back("numerical slope sign differs from the reference slope");
    r.accuracy_warning = true;
  }
  if (r.K_torus != r.K_direct) {
    r.diagnostics.push_back("periodic identity n(A_r) - n(d_r) = " + std::to_string(r.K_torus) +
                            " differs from the direct count");
    r.accuracy_warning = true;
  }
  std::ostringstream why;
  if (!degenerate && r.K_formula != r.K_direct)
    why << "K_formula = " << r.K_formula << " but k_r + k_c + k_i- = " << r.K_direct << "; ";
  if (!degenerate && r.K_formula % 2 != 0 && r.k_r < 1)
    why << "odd index without a positive real eigenvalue; ";
  if (r.bbm && (r.bbm->finite_difference > 0.0) != (r.bbm->closed_form > 0.0))
    why << "finite-difference slope and closed form disagree in sign; ";
  if (!why.str().empty()) {
    r.theory_violation = true;
    r.diagnostics.push_back("theory violation: " + why.str());
    if (nm.strict) throw TheoryViolation(why.str());
  }
}

GridPtr grid_for(const Numerics& nm) { return make_grid(nm.n, nm.half_length); }

}  // namespace

KreinIndexResult kdv_verdict(double s, double p, double c, const Numerics& nm) {
  KreinIndexResult r;
  r.s = s;
  r.p = p;
  r.c = c;
  r.model = WaveModel::FKDV;
  r.n = nm.n;
  r.half_length = nm.half_length;
  const GridPtr g = grid_for(nm);
  const WaveProfile U = staged("wave", [&] { return kdv_wave_on(g, s, p, c, nm.solver); });
  r.wave_residual = U.residual_norm;
  r.boundary_ratio = U.boundary_value / U.peak();
  for (const auto& w : U.warnings) r.diagnostics.push_back(w);
  if (U.truncation_warning) r.accuracy_warning = true;

  const LinOperator L = kdv_linearization(U);
  const double energy = inner_product(U.field, U.field);
  r.slope_tol = nm.degeneracy_rel * energy / c;
  r.slope_reference = slope_analytic(s, p, c, energy / std::pow(c, 2.0 / p - 1.0 / s));

  PipelineInput in;
  in.A = assemble(L).entries;
  const RealField dU = apply(derivative_multiplier(g), U.field);
  in.mode = basis::analysis(dU.values);
  in.w = basis::analysis(line_antiderivative(dU).values);
  in.ham_label = "dgeev(D*L_r)";
  run_pipeline(r, std::move(in), g, nm);
  decide(r, nm);
  return r;
}

KreinIndexResult bbm_verdict(double s, double p, double c, const Numerics& nm) {
  KreinIndexResult r;
  r.s = s;
  r.p = p;
  r.c = c;
  r.model = WaveModel::FBBM;
  r.n = nm.n;
  r.half_length = nm.half_length;
  if (!(c > 1.0)) throw ExistenceWindowError("wave: BBM wave speed must exceed 1");
  const GridPtr g = grid_for(nm);
  auto family = [&](double cc) { return bbm_wave_on(g, s, p, cc, nm.solver); };
  const WaveProfile U = staged("wave", [&] { return family(c); });
  r.wave_residual = U.residual_norm;
  r.boundary_ratio = U.boundary_value / U.peak();
  for (const auto& w : U.warnings) r.diagnostics.push_back(w);
  if (U.truncation_warning) r.accuracy_warning = true;

  const BbmSlope bs = staged("bbm slope", [&] { return bbm_slope(family, c, nm.bbm_dc); });
  r.bbm = BbmChecks{bs.finite_difference, bs.closed_form, bs.printed_bracket, bs.step_flag};
  if (bs.step_flag) {
    r.diagnostics.push_back("finite-difference slope differs from the closed form by > 5%");
    r.accuracy_warning = true;
  }
  if ((bs.printed_bracket > 0.0) != (bs.closed_form > 0.0)) {
    r.diagnostics.push_back("printed bracket sign differs from the closed form");
    r.accuracy_warning = true;
  }
  r.slope_reference = bs.closed_form;
  r.slope_tol = nm.degeneracy_rel * bbm_energy(U) / c;

  const LinOperator L0 = bbm_linearization(U);
  // B⁻¹ = (1 + |∂|^s)^{1/2} per basis function
  Eigen::VectorXd binv(g->n());
  for (int k = 0; k < g->n(); ++k)
    binv[k] = std::sqrt(1.0 + std::pow(2.0 * std::numbers::pi * std::abs(g->wavenumbers()[k]), s));
  const Eigen::VectorXd bd = basis::diagonal(binv);

  PipelineInput in;
  in.A = bbm_symmetrize(L0).entries;
  const RealField dU = apply(derivative_multiplier(g), U.field);
  in.mode = bd.cwiseProduct(basis::analysis(dU.values));
  in.w = bd.cwiseProduct(basis::analysis(U.values()));
  in.ham_label = "dgeev(D*(B L0 B)_r)";
  run_pipeline(r, std::move(in), g, nm);
  decide(r, nm);
  return r;
}

SweepResult sweep(SweepAxis axis, double lo, double hi, int steps, double s, double p, double c,
                  WaveModel model, const std::optional<Numerics>& numerics) {
  SweepResult out;
  if (steps <= 0) return out;
  const int m = (lo == hi) ? 1 : steps;
  out.points.resize(m);
  for (int i = 0; i < m; ++i) {
    const double v = m == 1 ? lo : lo + (hi - lo) * i / static_cast<double>(m - 1);
    // drop accumulation dust so 3.5 + 0.4 prints as 3.9
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    out.points[i].value = std::strtod(buf, nullptr);
  }

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < m; ++i) {
    SweepPoint& pt = out.points[i];
    double ss = s, pp = p, cc = c;
    (axis == SweepAxis::P ? pp : axis == SweepAxis::C ? cc : ss) = pt.value;
    Numerics nm = numerics.value_or(default_numerics(ss));
    nm.strict = false;
    try {
      pt.result = model == WaveModel::FBBM ? bbm_verdict(ss, pp, cc, nm) : kdv_verdict(ss, pp, cc, nm);
      pt.status = pt.result->theory_violation ? "theory_violation" : "ok";
    } catch (const std::exception& e) {
      pt.status = e.what();
    }
  }
  const SweepPoint* prev = nullptr;
  for (const auto& pt : out.points) {
    if (!pt.result || pt.result->verdict == Verdict::DEGENERATE) continue;
    if (prev && prev->result->verdict != pt.result->verdict)
      out.flips.emplace_back(prev->value, pt.value);
    prev = &pt;
  }
  return out;
}

bool SelfCheckReport::all_passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

std::vector<std::string> self_check_cases() {
  return {"gkdv-p2", "gkdv-p5", "schrodinger-sech2", "bo"};
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

int negative_count(const Eigen::MatrixXd& A) {
  const SymmetricEigen e = symmetric_eigen(A, 0, false);
  return count_below(e.values, 1e-8 * e.scale);
}

Eigen::VectorXd basis_symbol(const SpectralGrid& g, const Multiplier& m) {
  Eigen::VectorXd v(g.n());
  for (int k = 0; k < g.n(); ++k) v[k] = m.symbol[k].real();
  return basis::diagonal(v);
}

void add(SelfCheckReport& rep, std::string name, bool ok, std::string detail) {
  rep.assertions.push_back({std::move(name), ok, std::move(detail)});
}

void check_sandwich_counts(SelfCheckReport& rep, const LinOperator& L, int expected) {
  const int nl = negative_count(assemble(L).entries);
  add(rep, "n(L) = " + std::to_string(expected), nl == expected, "n(L) = " + std::to_string(nl));
  for (double eps : {0.0, 1e-3, 1e-2, 1e-1}) {
    const int ns = negative_count(sandwich(L, eps).entries);
    add(rep, "n(L_sandwich, eps=" + fmt(eps) + ") = n(L)", ns == nl, "n = " + std::to_string(ns));
  }
}

void check_identities(SelfCheckReport& rep, const RealField& f) {
  const GridPtr& g = f.grid;
  const double pars = std::abs(inner_product(f, f) - fourier_pairing(*g, transform(f), transform(f))) /
                      inner_product(f, f);
  add(rep, "Parseval", pars <= 1e-12, "relative defect " + fmt(pars));
  const RealField df = apply(derivative_multiplier(g), f);
  const RealField jd = apply(hilbert_multiplier(g), apply(fractional_derivative_multiplier(g, 1.0), f));
  const double fac = (df.values + jd.values).cwiseAbs().maxCoeff() / df.values.cwiseAbs().maxCoeff();
  add(rep, "Hilbert factorization of d/dx", fac <= 1e-10, "relative defect " + fmt(fac));
  const RealField jj = apply(hilbert_multiplier(g), apply(hilbert_multiplier(g), df));
  const double sq = (jj.values + df.values).cwiseAbs().maxCoeff() / df.values.cwiseAbs().maxCoeff();
  add(rep, "J^2 = -I on mean-zero fields", sq <= 1e-10, "relative defect " + fmt(sq));
}

// Nonzero eigenvalues of D·A_r and J·(R A R)_r, matched both ways.
void check_sandwich_spectrum(SelfCheckReport& rep, const LinOperator& L) {
  const GridPtr& g = L.grid;
  const Eigen::MatrixXd Ar = basis::restrict(assemble(L).entries);
  const Eigen::MatrixXd Sr = basis::restrict(sandwich(L, 0.0).entries);
  const HamiltonianSpectrum a = hamiltonian_spectrum(Ar, basis::derivative(*g), false);
  const HamiltonianSpectrum b = hamiltonian_spectrum(Sr, basis::unit_derivative(*g), false);
  const double scale = std::max(a.scale, b.scale);
  auto worst = [&](const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
    double w = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (std::abs(x[i]) <= 1e-6 * scale) continue;
      w = std::max(w, (y.array() - x[i]).abs().minCoeff());
    }
    return w / scale;
  };
  const double e = std::max(worst(a.eigenvalues, b.eigenvalues), worst(b.eigenvalues, a.eigenvalues));
  add(rep, "sandwich Hamiltonian eigenvalues match", e <= 1e-6, "relative mismatch " + fmt(e));
}

// ⟨(R_ε A R_ε)⁺ R_ε w, R_ε w⟩ for ε ↓ 0.
void check_eps_limit(SelfCheckReport& rep, const LinOperator& L, const RealField& dU) {
  const GridPtr& g = L.grid;
  const Eigen::VectorXd w = basis::analysis(line_antiderivative(dU).values);
  const Eigen::VectorXd k = basis::analysis(dU.values);
  std::vector<double> vals;
  std::string detail;
  for (double eps : {1e-1, 1e-2, 1e-3, 0.0}) {
    const Eigen::VectorXd r = basis_symbol(*g, regularized_quarter_root_multiplier(g, eps));
    Eigen::VectorXd rinv = r;
    for (Eigen::Index i = 0; i < r.size(); ++i) rinv[i] = r[i] > 0.0 ? 1.0 / r[i] : 0.0;
    Eigen::MatrixXd M = sandwich(L, eps).entries;
    SymmetricEigen e = symmetric_eigen(M, g->n() / 2 + 1);
    const Eigen::VectorXd mode = rinv.cwiseProduct(k);
    deflate_kernel(M, e, 1e-8 * e.scale, &mode);
    const Eigen::VectorXd v = r.cwiseProduct(w);
    const double d = constrained_quantity(e, v, g->spacing(), 1e-8 * e.scale, 1e-4).value;
    vals.push_back(d);
    detail += "eps=" + fmt(eps) + ": " + fmt(d) + "; ";
  }
  const bool stable = (vals[1] > 0) == (vals[2] > 0) && (vals[2] > 0) == (vals[3] > 0);
  add(rep, "constrained quantity sign stable for eps <= 1e-2", stable, detail);
}

SelfCheckReport check_gkdv(double p) {
  SelfCheckReport rep;
  rep.case_name = p == 2.0 ? "gkdv-p2" : "gkdv-p5";
  const GridPtr g = make_grid(512, 40.0);
  const WaveProfile U = kdv_wave_on(g, 2.0, p, 1.0, SolverOptions::defaults_for(2.0));
  add(rep, "wave residual <= 1e-10", U.residual_norm <= 1e-10, fmt(U.residual_norm));
  const LinOperator L = kdv_linearization(U);
  check_sandwich_counts(rep, L, 1);
  const RealField dU = apply(derivative_multiplier(g), U.field);
  const Eigen::VectorXd mode = basis::analysis(dU.values);
  const GeneralizedKernel gk = generalized_kernel_dim(L, 1e-8, &mode);
  add(rep, "generalized kernel dimension 2", gk.dim == 2, "dim = " + std::to_string(gk.dim));
  check_sandwich_spectrum(rep, L);
  check_identities(rep, U.field);
  const double d = constrained_quantity(L, dU).value;
  const double ref = -0.5 * slope_analytic(2.0, p, 1.0, inner_product(U.field, U.field));
  add(rep, "constrained quantity matches -slope/2", std::abs(d - ref) <= 1e-4 * std::abs(ref),
      "d = " + fmt(d) + ", reference " + fmt(ref));
  check_eps_limit(rep, L, dU);
  return rep;
}

SelfCheckReport check_schrodinger() {
  SelfCheckReport rep;
  rep.case_name = "schrodinger-sech2";
  const GridPtr g = make_grid(512, 20.0);
  const RealField V = RealField::sample(g, [](double x) { return 2.0 / std::pow(std::cosh(x), 2); });
  const double c = 0.5;
  const LinOperator L = schrodinger_operator(V, c);
  check_sandwich_counts(rep, L, 1);
  const SymmetricEigen e = symmetric_eigen(assemble(L).entries, g->n() / 2 + 1, false);
  const double lo = e.values[0];
  add(rep, "ground eigenvalue = c - 1", std::abs(lo - (c - 1.0)) <= 1e-8, fmt(lo));
  check_identities(rep, V);
  return rep;
}

SelfCheckReport check_bo() {
  SelfCheckReport rep;
  rep.case_name = "bo";
  const GridPtr g = make_grid(1024, 50.0);
  const WaveProfile U = bo_profile(g, 1.0);
  // |∂| + c - U is the p = 1 linearization about U/2
  WaveProfile half = U;
  half.field.values *= 0.5;
  const LinOperator L = kdv_linearization(half);
  check_sandwich_counts(rep, L, 1);
  const RealField dU = apply(derivative_multiplier(g), U.field);
  const Eigen::VectorXd mode = basis::analysis(dU.values);
  const GeneralizedKernel gk = generalized_kernel_dim(L, 1e-8, &mode);
  add(rep, "generalized kernel dimension 2", gk.dim == 2, "dim = " + std::to_string(gk.dim));
  const double slope = -2.0 * constrained_quantity(L, dU).value;
  const double ref = 8.0 * std::numbers::pi;
  add(rep, "slope = 8*pi", std::abs(slope - ref) <= 1e-3 * ref, "slope = " + fmt(slope));
  check_identities(rep, U.field);
  return rep;
}

}  // namespace

SelfCheckReport self_check(const std::string& name) {
  if (name == "gkdv-p2") return check_gkdv(2.0);
  if (name == "gkdv-p5") return check_gkdv(5.0);
  if (name == "schrodinger-sech2") return check_schrodinger();
  if (name == "bo") return check_bo();
  throw std::invalid_argument("unknown self-check case '" + name + "'");
}

}  // namespace krein
