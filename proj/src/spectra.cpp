#include "krein/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "krein/errors.hpp"
#include "krein/kernels.hpp"
#include "krein/linalg.hpp"

namespace krein {

int even_block_size(int order, int n) {
  if (order == n) return n / 2 + 1;
  if (order == n - 2) return n / 2 - 1;
  return 0;
}

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& A, int even_block, bool vectors) {
  const int N = static_cast<int>(A.rows());
  SymmetricEigen out;
  bool split = false;
  if (even_block > 0 && even_block < N) {
    const double amax = A.cwiseAbs().maxCoeff();
    const double off = A.block(even_block, 0, N - even_block, even_block).cwiseAbs().maxCoeff();
    split = off <= 1e-13 * amax;
  }
  if (!split) {
    linalg::eigh(A, out.values, vectors ? &out.vectors : nullptr);
  } else {
    const int e = even_block, o = N - even_block;
    Eigen::VectorXd we, wo;
    Eigen::MatrixXd ve, vo;
    linalg::eigh(A.topLeftCorner(e, e), we, vectors ? &ve : nullptr);
    linalg::eigh(A.bottomRightCorner(o, o), wo, vectors ? &vo : nullptr);
    Eigen::VectorXd all(N);
    all << we, wo;
    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return all[a] < all[b]; });
    out.values.resize(N);
    if (vectors) out.vectors = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
      const int src = order[i];
      out.values[i] = all[src];
      if (!vectors) continue;
      if (src < e)
        out.vectors.col(i).head(e) = ve.col(src);
      else
        out.vectors.col(i).tail(o) = vo.col(src - e);
    }
    out.parity_split = true;
  }
  out.scale = N ? out.values.cwiseAbs().maxCoeff() : 0.0;
  return out;
}

std::vector<RealField> SpectralReport::kernel_fields() const {
  std::vector<RealField> out;
  for (const auto& v : kernel_vectors) {
    if (v.size() != grid->n()) throw GridMismatch("kernel vectors are not in the full basis");
    out.emplace_back(grid, basis::synthesis(v));
  }
  return out;
}

SpectralReport symmetric_spectrum(const DenseMatrix& A, std::optional<double> zero_tol) {
  if (symmetry_defect(A.entries) > 1e-10)
    throw std::invalid_argument("symmetric_spectrum: matrix is not symmetric");
  const int n = A.grid ? A.grid->n() : 0;
  const SymmetricEigen eig = symmetric_eigen(A.entries, even_block_size(A.order(), n));
  SpectralReport r;
  r.label = A.label;
  r.grid = A.grid;
  r.scale = eig.scale;
  r.zero_tol = zero_tol.value_or(1e-8 * eig.scale);
  r.eigenvectors = eig.vectors;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double l = eig.values[i];
    r.eigenvalues.emplace_back(l, 0.0);
    if (l < -r.zero_tol) ++r.negative_count;
    if (std::abs(l) <= r.zero_tol) {
      ++r.kernel_dim;
      r.kernel_vectors.push_back(eig.vectors.col(i));
    }
  }
  return r;
}

Deflation deflate_kernel(Eigen::MatrixXd& A, SymmetricEigen& eig, double zero_tol,
                         const Eigen::VectorXd* mode) {
  Deflation d;
  const Eigen::Index N = eig.values.size();
  for (Eigen::Index i = 0; i < N; ++i) {
    if (std::abs(eig.values[i]) > zero_tol || eig.values[i] == 0.0) {
      if (eig.values[i] == 0.0) ++d.zeroed;
      continue;
    }
    A.noalias() -= eig.values[i] * eig.vectors.col(i) * eig.vectors.col(i).transpose();
    eig.values[i] = 0.0;
    ++d.zeroed;
  }
  if (d.zeroed > 0 || !mode || mode->norm() == 0.0) return d;

  const Eigen::VectorXd m = mode->normalized();
  Eigen::Index best = 0;
  (eig.vectors.transpose() * m).cwiseAbs().maxCoeff(&best);
  d.alignment = std::abs(eig.vectors.col(best).dot(m));
  double next = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < N; ++i)
    if (i != best) next = std::min(next, std::abs(eig.values[i]));
  const double lam = eig.values[best];
  if (d.alignment >= 0.99 && std::abs(lam) <= 1e-2 * next) {
    A.noalias() -= lam * eig.vectors.col(best) * eig.vectors.col(best).transpose();
    eig.values[best] = 0.0;
    d.zeroed = 1;
    d.restored = true;
    d.restored_eigenvalue = lam;
    std::ostringstream os;
    os << "translation mode under-resolved: eigenvalue " << lam << " (alignment " << d.alignment
       << ") set to zero";
    d.warnings.push_back(os.str());
  }
  return d;
}

ConstrainedQuantity constrained_quantity(const SymmetricEigen& eig, const Eigen::VectorXd& w,
                                         double spacing, double zero_tol, double fredholm_tol) {
  ConstrainedQuantity q;
  const Eigen::VectorXd c = eig.vectors.transpose() * w;
  const double wn = w.norm();
  double sum = 0.0, smallest = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double l = eig.values[i];
    if (std::abs(l) <= zero_tol) {
      if (wn > 0.0) q.fredholm_residual = std::max(q.fredholm_residual, std::abs(c[i]) / wn);
      continue;
    }
    smallest = std::min(smallest, std::abs(l));
    sum += c[i] * c[i] / l;
  }
  if (q.fredholm_residual > fredholm_tol) {
    std::ostringstream os;
    os << "antiderivative of the kernel vector is not orthogonal to the kernel (residual "
       << q.fredholm_residual << ")";
    throw FredholmViolation(os.str());
  }
  q.value = spacing * sum;
  q.near_singular = smallest <= 1e-6 * eig.scale;
  return q;
}

RealField line_antiderivative(const RealField& psi0) {
  RealField w = apply(antiderivative_multiplier(psi0.grid), psi0);
  w.values.array() -= w.values[0];
  return w;
}

ConstrainedQuantity constrained_quantity(const LinOperator& L, const RealField& psi0) {
  const DenseMatrix A = assemble(L);
  const int n = L.grid->n();
  const SymmetricEigen eig = symmetric_eigen(A.entries, even_block_size(n, n));
  const RealField w = line_antiderivative(psi0);
  return constrained_quantity(eig, basis::analysis(w.values), L.grid->spacing(), 1e-8 * eig.scale);
}

double slope_analytic(double s, double p, double c, double q_norm_sq) {
  const double e = 2.0 / p - 1.0 / s;
  return e * std::pow(c, e - 1.0) * q_norm_sq;
}

double bbm_closed_form(double s, double p, double c, double N, double T) {
  const double a = 2.0 / p - 1.0 / s;
  const double pre = std::pow(c - 1.0, a - 1.0) * std::pow(c, 1.0 / s - 2.0) / (p * s);
  return pre * (c * (2.0 * s * c - p) * N + (c - 1.0) * (2.0 * s * c + (s - 1.0) * p) * T);
}

double bbm_printed_bracket(double s, double p, double c, double N, double T) {
  return ((4.0 - p) * s * c + 2.0 * (s - 1.0) * p) * N + (2.0 * s * c + (s - 1.0) * p) * T;
}

namespace {

// ‖|∂|^{s/2}U‖² by Parseval.
double half_derivative_norm_sq(const RealField& u, double s) {
  const auto& g = *u.grid;
  const int n = g.n();
  const Eigen::VectorXcd h = fft::forward_half(u.values);
  double acc = 0.0;
  for (int k = 1; k <= n / 2; ++k) {
    const double w = std::pow(2.0 * std::numbers::pi * std::abs(g.wavenumbers()[k]), s);
    acc += (k == n / 2 ? 1.0 : 2.0) * w * std::norm(h[k]);
  }
  return g.spacing() / n * acc;
}

}  // namespace

double bbm_energy(const WaveProfile& U) {
  return inner_product(U.field, U.field) + half_derivative_norm_sq(U.field, U.s);
}

BbmSlope bbm_slope(const std::function<WaveProfile(double)>& family, double c, double dc) {
  if (!(dc > 0.0) || !(c - dc > 1.0)) throw std::invalid_argument("bbm_slope needs c - dc > 1");
  BbmSlope r;
  r.finite_difference = (bbm_energy(family(c + dc)) - bbm_energy(family(c - dc))) / (2.0 * dc);
  const WaveProfile U = family(c);
  const double s = U.s, p = U.p;
  const double k = std::pow((c - 1.0) / c, 1.0 / s);
  const double a2 = std::pow(c - 1.0, 2.0 / p);
  r.q_norm_sq = k * inner_product(U.field, U.field) / a2;
  r.q_half_sq = std::pow(k, 1.0 - s) * half_derivative_norm_sq(U.field, s) / a2;
  r.closed_form = bbm_closed_form(s, p, c, r.q_norm_sq, r.q_half_sq);
  r.printed_bracket = bbm_printed_bracket(s, p, c, r.q_norm_sq, r.q_half_sq);
  r.step_flag = std::abs(r.finite_difference - r.closed_form) > 0.05 * std::abs(r.closed_form);
  return r;
}

HamiltonianSpectrum hamiltonian_spectrum(const Eigen::MatrixXd& Ar, const Eigen::MatrixXd& skew,
                                         bool vectors) {
  HamiltonianSpectrum h;
  const Eigen::MatrixXd H = skew * Ar;
  linalg::eig(H, h.eigenvalues, vectors ? &h.eigenvectors : nullptr);
  // deterministic order: real part descending, then imaginary part descending
  const Eigen::Index N = h.eigenvalues.size();
  std::vector<Eigen::Index> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const auto x = h.eigenvalues[a], y = h.eigenvalues[b];
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  Eigen::VectorXcd ev(N);
  Eigen::MatrixXcd vv(vectors ? N : 0, vectors ? N : 0);
  for (Eigen::Index i = 0; i < N; ++i) {
    ev[i] = h.eigenvalues[order[i]];
    if (vectors) vv.col(i) = h.eigenvectors.col(order[i]);
  }
  h.eigenvalues = std::move(ev);
  if (vectors) h.eigenvectors = std::move(vv);
  h.restricted_form = Ar;
  h.scale = N ? h.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  h.method = "dgeev(D*A_r)";
  return h;
}

HamiltonianSpectrum hamiltonian_spectrum(const DenseMatrix& A, HamKind kind) {
  if (symmetry_defect(A.entries) > 1e-10)
    throw std::invalid_argument("hamiltonian_spectrum: matrix is not symmetric");
  if (A.order() != A.grid->n()) throw GridMismatch("hamiltonian_spectrum expects a full-basis matrix");
  HamiltonianSpectrum h =
      hamiltonian_spectrum(basis::restrict(A.entries), basis::derivative(*A.grid), true);
  h.method = kind == HamKind::KDV ? "dgeev(D*L_r)" : "dgeev(D*B L0 B_r)";
  return h;
}

double quadruple_defect(const Eigen::VectorXcd& eigs) {
  const Eigen::Index N = eigs.size();
  if (N == 0) return 0.0;
  const double scale = std::max(eigs.cwiseAbs().maxCoeff(), 1e-300);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < N; ++i) {
    double dneg = std::numeric_limits<double>::infinity(), dconj = dneg;
    for (Eigen::Index j = 0; j < N; ++j) {
      dneg = std::min(dneg, std::abs(eigs[j] + eigs[i]));
      dconj = std::min(dconj, std::abs(eigs[j] - std::conj(eigs[i])));
    }
    worst = std::max(worst, std::max(dneg, dconj));
  }
  return worst / scale;
}

std::string to_string(EigenClass c) {
  switch (c) {
    case EigenClass::REAL_POS: return "REAL_POS";
    case EigenClass::REAL_NEG: return "REAL_NEG";
    case EigenClass::COMPLEX: return "COMPLEX";
    case EigenClass::IMAG_POS_SIG: return "IMAG_POS_SIG";
    case EigenClass::IMAG_NEG_SIG: return "IMAG_NEG_SIG";
    case EigenClass::ZERO: return "ZERO";
    case EigenClass::INDET: return "INDET";
  }
  return "?";
}

KreinTolerances default_krein_tolerances(const HamiltonianSpectrum& H, double form_norm) {
  return {1e-8 * H.scale, 1e-8 * H.scale, 1e-8 * form_norm};
}

namespace {

// Signature values on one cluster of (numerically) equal imaginary eigenvalues.
Eigen::VectorXd cluster_forms(const HamiltonianSpectrum& H, const Eigen::VectorXd& diag,
                              const std::vector<Eigen::Index>& members) {
  const Eigen::Index m = static_cast<Eigen::Index>(members.size());
  if (m == 1) return Eigen::VectorXd::Constant(1, diag[members[0]]);
  Eigen::MatrixXcd V(H.eigenvectors.rows(), m);
  for (Eigen::Index a = 0; a < m; ++a) V.col(a) = H.eigenvectors.col(members[a]);
  // orthonormal basis of the cluster span, then the Hermitian form on it
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(V);
  const Eigen::MatrixXcd Qm = qr.householderQ() * Eigen::MatrixXcd::Identity(V.rows(), m);
  const Eigen::MatrixXcd AQ = H.restricted_form.cast<std::complex<double>>() * Qm;
  Eigen::MatrixXcd F = Qm.adjoint() * AQ;
  F = 0.5 * (F + F.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(F);
  return es.eigenvalues();
}

}  // namespace

KreinClassification classify_krein(const HamiltonianSpectrum& H, const KreinTolerances& tol,
                                   int zero_count) {
  KreinClassification k;
  k.re_tol = tol.re_tol;
  k.im_tol = tol.im_tol;
  k.sig_tol = tol.sig_tol;
  const Eigen::Index N = H.eigenvalues.size();
  k.classes.assign(N, EigenClass::INDET);
  k.form_values = kernels::quadratic_forms(H.restricted_form, H.eigenvectors);

  std::vector<bool> done(N, false);
  std::vector<Eigen::Index> by_modulus(N);
  std::iota(by_modulus.begin(), by_modulus.end(), 0);
  std::stable_sort(by_modulus.begin(), by_modulus.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(H.eigenvalues[a]) < std::abs(H.eigenvalues[b]);
  });
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(zero_count, N); ++i) {
    const Eigen::Index j = by_modulus[i];
    k.classes[j] = EigenClass::ZERO;
    k.zero_spread = std::max(k.zero_spread, std::abs(H.eigenvalues[j]));
    done[j] = true;
  }

  std::vector<Eigen::Index> upper, lower;
  for (Eigen::Index i = 0; i < N; ++i) {
    if (done[i]) continue;
    const double re = H.eigenvalues[i].real(), im = H.eigenvalues[i].imag();
    const bool real_axis = std::abs(im) <= tol.im_tol;
    if (std::abs(re) <= tol.re_tol && real_axis) {
      k.classes[i] = EigenClass::ZERO;
      k.zero_spread = std::max(k.zero_spread, std::abs(H.eigenvalues[i]));
    } else if (re > tol.re_tol) {
      k.classes[i] = real_axis ? EigenClass::REAL_POS : EigenClass::COMPLEX;
      (real_axis ? k.k_r : k.k_c) += 1;
    } else if (re < -tol.re_tol) {
      k.classes[i] = real_axis ? EigenClass::REAL_NEG : EigenClass::COMPLEX;
    } else {
      (im > 0 ? upper : lower).push_back(i);
    }
  }
  k.zero_count = static_cast<int>(std::count(k.classes.begin(), k.classes.end(), EigenClass::ZERO));

  auto handle = [&](std::vector<Eigen::Index>& idx, bool count) {
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
      return std::abs(H.eigenvalues[a].imag()) < std::abs(H.eigenvalues[b].imag());
    });
    size_t start = 0;
    while (start < idx.size()) {
      size_t end = start + 1;
      while (end < idx.size() && std::abs(H.eigenvalues[idx[end]].imag() -
                                          H.eigenvalues[idx[end - 1]].imag()) <= tol.im_tol)
        ++end;
      std::vector<Eigen::Index> members(idx.begin() + start, idx.begin() + end);
      const Eigen::VectorXd f = cluster_forms(H, k.form_values, members);
      for (size_t a = 0; a < members.size(); ++a) {
        const Eigen::Index j = members[a];
        k.form_values[j] = f[static_cast<Eigen::Index>(a)];
        if (std::abs(f[a]) <= tol.sig_tol) {
          k.classes[j] = EigenClass::INDET;
          if (count) k.indeterminate.emplace_back(H.eigenvalues[j], f[a]);
        } else if (f[a] < 0.0) {
          k.classes[j] = EigenClass::IMAG_NEG_SIG;
          if (count) k.k_i_minus += 2;
        } else {
          k.classes[j] = EigenClass::IMAG_POS_SIG;
        }
      }
      start = end;
    }
  };
  handle(upper, true);
  handle(lower, false);
  return k;
}

GeneralizedKernel generalized_kernel(int kernel_dim, double chain_value, double chain_tol) {
  GeneralizedKernel g;
  g.kernel_dim = kernel_dim;
  g.chain_value = chain_value;
  g.chain_tol = chain_tol;
  if (kernel_dim <= 0) return g;
  g.chain_extends = std::abs(chain_value) <= chain_tol;
  g.dim = 2 * kernel_dim + (g.chain_extends ? 2 : 0);
  return g;
}

GeneralizedKernel generalized_kernel_dim(const LinOperator& L, double tol,
                                         const Eigen::VectorXd* mode) {
  DenseMatrix A = assemble(L);
  const int n = L.grid->n();
  SymmetricEigen eig = symmetric_eigen(A.entries, even_block_size(n, n));
  const double zt = 1e-8 * eig.scale;
  deflate_kernel(A.entries, eig, zt, mode);
  int kdim = 0;
  Eigen::Index kidx = -1;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (eig.values[i] == 0.0) {
      ++kdim;
      kidx = i;
    }
  double chain = 0.0, chain_tol = 0.0;
  if (kdim > 0) {
    RealField psi(L.grid, basis::synthesis(eig.vectors.col(kidx)));
    const RealField w = line_antiderivative(psi);
    chain = constrained_quantity(eig, basis::analysis(w.values), L.grid->spacing(), zt).value;
    chain_tol = 5e-4 * inner_product(w, w) / L.multiplier_symbol[0];
  }
  GeneralizedKernel g = generalized_kernel(kdim, chain, chain_tol);

  Eigen::MatrixXd Ar = basis::restrict(A.entries);
  SymmetricEigen er = symmetric_eigen(Ar, even_block_size(n - 2, n));
  if (mode) {
    const Eigen::VectorXd mr = basis::restrict(*mode);
    deflate_kernel(Ar, er, 1e-8 * er.scale, &mr);
  } else {
    deflate_kernel(Ar, er, 1e-8 * er.scale);
  }
  const HamiltonianSpectrum H = hamiltonian_spectrum(Ar, basis::derivative(*L.grid), false);
  g.eigen_count = 0;
  for (Eigen::Index i = 0; i < H.eigenvalues.size(); ++i)
    if (std::abs(H.eigenvalues[i]) <= tol * H.scale) ++g.eigen_count;
  return g;
}

}  // namespace krein
