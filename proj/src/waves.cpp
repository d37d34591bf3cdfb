#include "krein/waves.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string_view>

#include "krein/errors.hpp"
#include "krein/kernels.hpp"

namespace krein {

namespace {

constexpr double kClampFloor = 1e-14;

bool is_small_integer(double r) {
  return r >= 1.0 && r <= 32.0 && std::abs(r - std::round(r)) < 1e-12;
}

// Symbol a(2π|ξ|)^s + b on the half spectrum.
Eigen::VectorXd half_symbol(const SpectralGrid& g, double s, double a, double b) {
  const int n = g.n();
  Eigen::VectorXd m(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) {
    const double w = 2.0 * std::numbers::pi * std::abs(g.wavenumbers()[k]);
    m[k] = a * (k == 0 ? 0.0 : std::pow(w, s)) + b;
  }
  return m;
}

Eigen::VectorXd apply_half(const Eigen::VectorXd& m, const Eigen::VectorXd& u) {
  Eigen::VectorXcd h = fft::forward_half(u);
  for (Eigen::Index k = 0; k < h.size(); ++k) h[k] *= m[k];
  return fft::backward_half(h, static_cast<int>(u.size()));
}

// Σ over the full spectrum of a_k b̄_k, from half spectra of real signals.
double half_pairing(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, int n) {
  double acc = (a[0] * std::conj(b[0])).real() + (a[n / 2] * std::conj(b[n / 2])).real();
  for (int k = 1; k < n / 2; ++k) acc += 2.0 * (a[k] * std::conj(b[k])).real();
  return acc;
}

constexpr std::string_view kDecayNote = "profile not decayed at the box edge";

// Re-evaluates the decay check; a note inherited from Q is replaced.
void finish_profile(WaveProfile& w) {
  std::erase_if(w.warnings, [](const std::string& m) { return m.starts_with(kDecayNote); });
  w.truncation_warning = false;
  w.boundary_value = boundary_value(w.field);
  const double pk = w.peak();
  if (!(pk > 0.0) || w.boundary_value / pk > 1e-3) {
    w.truncation_warning = true;
    std::ostringstream os;
    os << kDecayNote << ": boundary/peak = " << w.boundary_value / pk;
    w.warnings.push_back(os.str());
  }
}

void check_window(double s, double p) {
  if (!(s > 0.0 && s <= 2.0)) throw ExistenceWindowError("dispersion order s must lie in (0, 2]");
  if (!(p > 0.0)) throw ExistenceWindowError("nonlinearity exponent p must be positive");
  if (!(p < p_max(s))) {
    std::ostringstream os;
    os << "no ground state for p = " << p << ": p_max(" << s << ") = " << p_max(s);
    throw ExistenceWindowError(os.str());
  }
}

}  // namespace

std::string to_string(WaveModel m) {
  switch (m) {
    case WaveModel::FKDV: return "FKDV";
    case WaveModel::FBBM: return "FBBM";
    case WaveModel::NORMALIZED: return "NORMALIZED";
  }
  return "?";
}

SolverOptions SolverOptions::defaults_for(double s) {
  SolverOptions o;
  o.tol = s == 2.0 ? 1e-10 : 1e-8;
  return o;
}

double p_max(double s) {
  return s < 1.0 ? 2.0 * s / (1.0 - s) : std::numeric_limits<double>::infinity();
}

Eigen::VectorXd clamped_power(const Eigen::VectorXd& u, double p, double* clamped_fraction) {
  const double peak = u.maxCoeff();
  const double floor = kClampFloor * std::max(peak, 0.0);
  Eigen::VectorXd out(u.size());
  double clamped = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    double v = u[j];
    if (v < floor) {
      clamped += std::abs(v - floor);
      v = floor;
    }
    out[j] = v > 0.0 ? std::exp(p * std::log(v)) : 0.0;
  }
  if (clamped_fraction) {
    const double l1 = u.cwiseAbs().sum();
    *clamped_fraction = l1 > 0.0 ? clamped / l1 : 0.0;
  }
  return out;
}

Eigen::VectorXd profile_power(const Eigen::VectorXd& u, double r, double* clamped_fraction) {
  if (!is_small_integer(r)) return clamped_power(u, r, clamped_fraction);
  if (clamped_fraction) *clamped_fraction = 0.0;
  const int e = static_cast<int>(std::round(r));
  Eigen::VectorXd out = u;
  for (int i = 1; i < e; ++i) out = out.cwiseProduct(u);
  return out;
}

double boundary_value(const RealField& f) {
  const int n = f.grid->n();
  const int w = std::max(1, static_cast<int>(std::ceil(0.05 * n)));
  double b = 0.0;
  for (int j = 0; j < w; ++j) {
    b = std::max(b, std::abs(f.values[j]));
    b = std::max(b, std::abs(f.values[n - 1 - j]));
  }
  return b;
}

WaveProfile solve_ground_state(double s, double p, const GridPtr& grid, const SolverOptions& opts) {
  check_window(s, p);
  if (!(opts.tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  const double gamma = opts.gamma.value_or((p + 1.0) / p);
  if (!(gamma > 1.0 && gamma < 3.0)) throw std::invalid_argument("gamma must lie in (1, 3)");

  const int n = grid->n();
  const Eigen::VectorXd m = half_symbol(*grid, s, 1.0, 1.0);
  Eigen::VectorXd q(n);
  for (int j = 0; j < n; ++j) {
    const double x = grid->point(j) / opts.seed_width;
    q[j] = std::exp(-x * x);
  }

  double residual = std::numeric_limits<double>::infinity();
  double factor = 0.0;
  double clamped = 0.0;
  int it = 0;
  for (it = 1; it <= opts.max_iters; ++it) {
    const Eigen::VectorXd nl = profile_power(q, p + 1.0, &clamped);
    const Eigen::VectorXcd qh = fft::forward_half(q);
    Eigen::VectorXcd nh = fft::forward_half(nl);
    Eigen::VectorXcd mq = qh;
    for (int k = 0; k <= n / 2; ++k) mq[k] *= m[k];
    factor = half_pairing(mq, qh, n) / half_pairing(nh, qh, n);
    if (!(factor > 0.0) || !std::isfinite(factor))
      throw ConvergenceFailure("Petviashvili stabilizing factor left (0, inf)", residual);
    for (int k = 0; k <= n / 2; ++k) nh[k] /= m[k];
    q = std::pow(factor, gamma) * fft::backward_half(nh, n);

    Eigen::Index jmax = 0;
    q.maxCoeff(&jmax);
    const int shift = grid->center_index() - static_cast<int>(jmax);
    if (shift != 0) {
      Eigen::VectorXd r(n);
      for (int j = 0; j < n; ++j) r[((j + shift) % n + n) % n] = q[j];
      q = r;
    }
    for (int j = 1; j < n / 2; ++j) {
      const double avg = 0.5 * (q[j] + q[n - j]);
      q[j] = avg;
      q[n - j] = avg;
    }

    residual = (apply_half(m, q) - profile_power(q, p + 1.0)).cwiseAbs().maxCoeff();
    if (residual <= opts.tol) break;
  }
  if (residual > opts.tol) {
    std::ostringstream os;
    os << "Petviashvili iteration did not reach tol " << opts.tol << " in " << opts.max_iters
       << " iterations (s = " << s << ", p = " << p << ", last residual " << residual << ")";
    throw ConvergenceFailure(os.str(), residual);
  }

  WaveProfile w{RealField(grid, q)};
  w.s = s;
  w.p = p;
  w.c = 1.0;
  w.model = WaveModel::NORMALIZED;
  w.residual_norm = residual;
  w.iterations = it;
  w.stabilizing_factor = factor;
  profile_power(q, p + 1.0, &clamped);
  if (clamped > 1e-10) w.warnings.push_back("power clamping touched more than 1e-10 of the L1 mass");
  finish_profile(w);
  return w;
}

namespace {

WaveProfile rescaled(const WaveProfile& Q, double amplitude, double dilation, WaveModel model,
                     double c) {
  const GridPtr& g = Q.grid();
  Eigen::VectorXd y = dilation * g->points();
  Eigen::VectorXd u = amplitude * kernels::trig_interpolate(Q.values(), -g->half_length(),
                                                             2.0 * g->half_length(), y);
  WaveProfile w{RealField(g, u)};
  w.s = Q.s;
  w.p = Q.p;
  w.c = c;
  w.model = model;
  w.iterations = Q.iterations;
  w.stabilizing_factor = Q.stabilizing_factor;
  w.warnings = Q.warnings;
  w.residual_norm = existence_residual(w);
  finish_profile(w);
  return w;
}

}  // namespace

WaveProfile kdv_wave(const WaveProfile& Q, double c) {
  if (Q.model != WaveModel::NORMALIZED) throw std::invalid_argument("kdv_wave needs a normalized Q");
  if (!(c > 0.0)) throw ExistenceWindowError("KdV wave speed must be positive");
  if (c == 1.0) {
    WaveProfile w = Q;
    w.model = WaveModel::FKDV;
    return w;
  }
  return rescaled(Q, std::pow(c, 1.0 / Q.p), std::pow(c, 1.0 / Q.s), WaveModel::FKDV, c);
}

WaveProfile bbm_wave(const WaveProfile& Q, double c) {
  if (Q.model != WaveModel::NORMALIZED) throw std::invalid_argument("bbm_wave needs a normalized Q");
  if (!(c > 1.0)) throw ExistenceWindowError("BBM wave speed must exceed 1");
  return rescaled(Q, std::pow(c - 1.0, 1.0 / Q.p), std::pow((c - 1.0) / c, 1.0 / Q.s),
                  WaveModel::FBBM, c);
}

namespace {

WaveProfile dilated(const GridPtr& grid, double s, double p, double c, double amplitude,
                    double dilation, WaveModel model, const SolverOptions& opts) {
  const GridPtr wide = make_grid(grid->n(), dilation * grid->half_length());
  WaveProfile Q = solve_ground_state(s, p, wide, opts);
  WaveProfile w{RealField(grid, amplitude * Q.values())};
  w.s = s;
  w.p = p;
  w.c = c;
  w.model = model;
  w.iterations = Q.iterations;
  w.stabilizing_factor = Q.stabilizing_factor;
  w.warnings = Q.warnings;
  w.residual_norm = existence_residual(w);
  finish_profile(w);
  return w;
}

}  // namespace

WaveProfile kdv_wave_on(const GridPtr& grid, double s, double p, double c,
                        const SolverOptions& opts) {
  if (!(c > 0.0)) throw ExistenceWindowError("KdV wave speed must be positive");
  return dilated(grid, s, p, c, std::pow(c, 1.0 / p), std::pow(c, 1.0 / s), WaveModel::FKDV, opts);
}

WaveProfile bbm_wave_on(const GridPtr& grid, double s, double p, double c,
                        const SolverOptions& opts) {
  if (!(c > 1.0)) throw ExistenceWindowError("BBM wave speed must exceed 1");
  return dilated(grid, s, p, c, std::pow(c - 1.0, 1.0 / p), std::pow((c - 1.0) / c, 1.0 / s),
                 WaveModel::FBBM, opts);
}

WaveProfile bo_profile(const GridPtr& grid, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("BO speed must be positive");
  WaveProfile w{RealField::sample(grid, [c](double x) { return 4.0 * c / (1.0 + c * c * x * x); })};
  w.s = 1.0;
  w.p = 1.0;
  w.c = c;
  w.model = WaveModel::FKDV;
  const Eigen::VectorXd m = half_symbol(*grid, 1.0, 1.0, c);
  const Eigen::VectorXd u = w.values();
  w.residual_norm = (apply_half(m, u) - 0.5 * u.cwiseProduct(u)).cwiseAbs().maxCoeff();
  w.warnings.push_back("residual measured against |d|U + cU - U^2/2");
  finish_profile(w);
  return w;
}

WaveProfile sech_profile(const GridPtr& grid, double p, double c) {
  if (!(p > 0.0) || !(c > 0.0)) throw std::invalid_argument("sech_profile needs p, c > 0");
  const double amp = std::pow(c * (p + 2.0) / 2.0, 1.0 / p);
  const double k = p * std::sqrt(c) / 2.0;
  WaveProfile w{RealField::sample(grid, [&](double x) {
    return amp * std::pow(1.0 / std::cosh(k * x), 2.0 / p);
  })};
  w.s = 2.0;
  w.p = p;
  w.c = c;
  w.model = WaveModel::FKDV;
  w.residual_norm = existence_residual(w);
  finish_profile(w);
  return w;
}

double existence_residual(const WaveProfile& U) {
  const bool bbm = U.model == WaveModel::FBBM;
  const Eigen::VectorXd m =
      bbm ? half_symbol(*U.grid(), U.s, U.c, U.c - 1.0) : half_symbol(*U.grid(), U.s, 1.0, U.c);
  return (apply_half(m, U.values()) - profile_power(U.values(), U.p + 1.0))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace krein
