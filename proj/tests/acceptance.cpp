// Acceptance suite: one PASS/FAIL line per criterion.  Exit status is the
// number of failed criteria (capped at 1) so ctest records any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "krein/io.hpp"
#include "krein/spectra.hpp"
#include "krein/verdicts.hpp"

using namespace krein;

namespace {

// Pinned tolerances.
constexpr double kSechSup = 1e-8;            // 1: sup error of the s=2, p=2 ground state
constexpr double kSechResidual = 1e-10;      // 1: residual of the closed-form gKdV solitons
constexpr double kFlipLo2 = 3.8, kFlipHi2 = 4.2;  // 2: bracket window at s = 2
constexpr double kFlipStep2 = 0.1;
constexpr double kFracWindow = 0.1;          // 3: |bracket end - 2s| bound
constexpr double kFracStep = 0.2;
constexpr double kBoMassRel = 0.01;          // 8: <U,U> vs 8 pi
constexpr double kIdentityRel = 1e-10;       // 9: operator identities
constexpr double kGridSlack = 1e-9;          // float slack when comparing grid values

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

// Cases whose index identity is re-checked in criterion 4.
std::vector<KreinIndexResult> g_index_cases;

std::string brief(const KreinIndexResult& r) {
  std::ostringstream os;
  os << to_string(r.model) << "(s=" << r.s << ",p=" << r.p << ",c=" << r.c << ") " << to_string(r.verdict)
     << " K=" << r.K_direct;
  return os.str();
}

Numerics lax(double s) {
  Numerics n = default_numerics(s);
  n.strict = false;  // mismatches are reported by criterion 4, not thrown
  return n;
}

void criterion1(Outcome& o) {
  const GridPtr g = make_grid(1024, 40.0);
  const WaveProfile Q = solve_ground_state(2.0, 2.0, g, SolverOptions::defaults_for(2.0));
  const RealField exact = RealField::sample(g, [](double x) { return std::sqrt(2.0) / std::cosh(x); });
  const double err = (Q.values() - exact.values).cwiseAbs().maxCoeff();
  o.detail << "sup|Q - sqrt2 sech| = " << err;
  o.require(err <= kSechSup, "ground state");
  for (double p : {1.0, 2.0, 3.0}) {
    const WaveProfile U = sech_profile(g, p, 1.0);
    o.detail << "; residual(p=" << p << ") = " << U.residual_norm;
    o.require(U.residual_norm <= kSechResidual, "sech residual");
  }
}

void criterion2(Outcome& o) {
  for (double p : {1.0, 2.0, 3.0}) {
    const KreinIndexResult r = kdv_verdict(2.0, p, 1.0, lax(2.0));
    g_index_cases.push_back(r);
    o.require(r.verdict == Verdict::STABLE, "p=" + io::format_double(p) + " not STABLE");
  }
  for (double p : {4.5, 5.0}) {
    const KreinIndexResult r = kdv_verdict(2.0, p, 1.0, lax(2.0));
    g_index_cases.push_back(r);
    o.require(r.verdict == Verdict::UNSTABLE && r.k_r == 1, "p=" + io::format_double(p) + " not UNSTABLE/k_r=1");
  }
  const int steps = static_cast<int>(std::lround((kFlipHi2 - kFlipLo2) / kFlipStep2)) + 1;
  const SweepResult sw = sweep(SweepAxis::P, kFlipLo2, kFlipHi2, steps, 2.0, 0.0, 1.0, WaveModel::FKDV);
  for (const auto& pt : sw.points)
    if (pt.result && pt.result->verdict != Verdict::DEGENERATE) g_index_cases.push_back(*pt.result);
  o.detail << "p in {1,2,3} STABLE, {4.5,5} UNSTABLE; flips:";
  for (auto [a, b] : sw.flips) o.detail << " (" << a << ", " << b << ")";
  o.require(sw.flips.size() == 1, "expected exactly one flip");
  if (sw.flips.size() == 1)
    o.require(sw.flips[0].first >= kFlipLo2 - kGridSlack && sw.flips[0].second <= kFlipHi2 + kGridSlack,
              "flip outside [3.8, 4.2]");
}

void criterion3(Outcome& o) {
  for (double s : {0.6, 0.75, 1.5}) {
    const double pc = 2.0 * s;
    // four points 0.2 apart, straddling 2s symmetrically
    const double lo = pc - 1.5 * kFracStep, hi = pc + 1.5 * kFracStep;
    const SweepResult sw = sweep(SweepAxis::P, lo, hi, 4, s, 0.0, 1.0, WaveModel::FKDV);
    const Numerics nm = default_numerics(s);
    o.detail << (s == 0.6 ? "" : "; ") << "s=" << s << " (n=" << nm.n << ", l=" << nm.half_length << "):";
    for (const auto& pt : sw.points) {
      if (pt.result) {
        o.detail << " " << pt.value << "=" << to_string(pt.result->verdict).substr(0, 1);
        g_index_cases.push_back(*pt.result);
      } else {
        o.detail << " " << pt.value << "=failed";
        o.require(false, "s=" + io::format_double(s) + " point " + io::format_double(pt.value) + ": " + pt.status);
      }
    }
    o.require(sw.flips.size() == 1, "s=" + io::format_double(s) + ": expected exactly one flip");
    if (sw.flips.size() == 1) {
      const auto [a, b] = sw.flips[0];
      o.detail << " flip (" << a << ", " << b << ")";
      o.require(a >= pc - kFracWindow - kGridSlack && b <= pc + kFracWindow + kGridSlack,
                "s=" + io::format_double(s) + ": flip not within 0.1 of 2s");
      o.require(sw.points.front().result && sw.points.front().result->verdict == Verdict::STABLE,
                "s=" + io::format_double(s) + ": not STABLE below 2s");
    }
  }
}

// BBM results are produced by criterion 6, which runs first.
void criterion4(Outcome& o) {
  int checked = 0;
  for (const auto& r : g_index_cases) {
    if (r.verdict == Verdict::DEGENERATE) continue;
    ++checked;
    const bool ok = r.K_formula == r.K_direct && r.K_direct == r.k_r + r.k_c + r.k_i_minus && !r.theory_violation;
    o.require(ok, brief(r) + " K_formula=" + std::to_string(r.K_formula));
  }
  o.detail << checked << " non-degenerate cases checked";
  o.require(checked > 0, "no cases");
}

void criterion5(Outcome& o) {
  auto counts = [&](const LinOperator& L, const std::string& name) {
    const int nL = symmetric_spectrum(assemble(L)).negative_count;
    o.detail << name << ": n(L)=" << nL << " n(sandwich)=";
    for (double eps : {0.0, 1e-3, 1e-2, 1e-1}) {
      const int ns = symmetric_spectrum(sandwich(L, eps)).negative_count;
      o.detail << (eps == 0.0 ? "" : ",") << ns;
      o.require(ns == nL, name + " eps=" + io::format_double(eps));
    }
  };
  const GridPtr g = make_grid(1024, 40.0);
  for (double p : {2.0, 5.0}) {
    const WaveProfile U = kdv_wave_on(g, 2.0, p, 1.0, SolverOptions::defaults_for(2.0));
    counts(kdv_linearization(U), "gKdV p=" + io::format_double(p));
    o.detail << "; ";
  }
  const GridPtr h = make_grid(512, 20.0);
  const RealField V = RealField::sample(h, [](double x) { return 2.0 / std::pow(std::cosh(x), 2); });
  counts(schrodinger_operator(V, 0.5), "Schrodinger");
}

void criterion6(Outcome& o) {
  const double cases[][3] = {{2, 2, 2}, {2, 4, 2}, {1, 2, 2}, {1.5, 1, 1.5}};
  for (const auto& cs : cases) {
    const KreinIndexResult r = bbm_verdict(cs[0], cs[1], cs[2], lax(cs[0]));
    g_index_cases.push_back(r);
    const bool closed_pos = r.bbm->closed_form > 0.0;
    const bool fd_pos = r.bbm->finite_difference > 0.0;
    o.detail << brief(r) << " closed=" << r.bbm->closed_form << " fd=" << r.bbm->finite_difference << "; ";
    o.require(closed_pos == fd_pos, brief(r) + " slope signs differ");
    o.require(r.verdict == Verdict::STABLE && closed_pos, brief(r) + " not STABLE");
  }
}

void criterion7(Outcome& o) {
  auto gker = [](double s, double p, const Numerics& nm) {
    const GridPtr g = make_grid(nm.n, nm.half_length);
    const WaveProfile U = kdv_wave_on(g, s, p, 1.0, nm.solver);
    const RealField dU = apply(derivative_multiplier(g), U.field);
    const Eigen::VectorXd mode = basis::analysis(dU.values);
    return generalized_kernel_dim(kdv_linearization(U), 1e-8, &mode);
  };
  const GeneralizedKernel a = gker(2.0, 2.0, default_numerics(2.0));
  const GeneralizedKernel b = gker(1.0, 2.0, default_numerics(1.0));
  o.detail << "gKdV p=2: " << a.dim << "; s=1, p=2: " << b.dim << " (chain value " << b.chain_value << ")";
  o.require(a.dim == 2, "gKdV p=2");
  o.require(b.dim >= 3, "borderline p = 2s");
}

void criterion8(Outcome& o) {
  const GridPtr g = make_grid(4096, 400.0);
  const WaveProfile U = bo_profile(g, 1.0);
  const double mass = inner_product(U.field, U.field), want = 8.0 * std::numbers::pi;
  o.detail << "<U,U> = " << mass << " (8 pi = " << want << ")";
  o.require(std::abs(mass - want) <= kBoMassRel * want, "BO mass");
  const KreinIndexResult r = kdv_verdict(1.0, 1.0, 1.0, lax(1.0));
  g_index_cases.push_back(r);
  o.detail << "; " << brief(r);
  o.require(r.verdict == Verdict::STABLE && r.K_direct == 0, "s=1, p=1 not STABLE");
}

RealField random_field(const GridPtr& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  const int n = g->n();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (int k = 1; k <= n / 4; ++k) {
    const double a = nd(rng) / (1.0 + 0.1 * k), b = nd(rng) / (1.0 + 0.1 * k);
    for (int j = 0; j < n; ++j) {
      const double th = 2.0 * std::numbers::pi * k * j / n;
      v[j] += a * std::cos(th) + b * std::sin(th);
    }
  }
  return RealField(g, v);
}

void criterion9(Outcome& o) {
  const GridPtr g = make_grid(512, 25.0);
  std::mt19937_64 rng(20261017);
  const Multiplier D = derivative_multiplier(g), J = hilbert_multiplier(g);
  const Multiplier A = fractional_derivative_multiplier(g, 1.0), I = antiderivative_multiplier(g);
  double fac = 0, sq = 0, skew = 0, pars = 0;
  for (int t = 0; t < 100; ++t) {
    const RealField f = random_field(g, rng), h = random_field(g, rng);
    const RealField df = apply(D, f);
    fac = std::max(fac, (df.values + apply(J, apply(A, f)).values).cwiseAbs().maxCoeff() / df.values.cwiseAbs().maxCoeff());
    sq = std::max(sq, (apply(J, apply(J, f)).values + f.values).cwiseAbs().maxCoeff() / f.values.cwiseAbs().maxCoeff());
    skew = std::max(skew, std::abs(inner_product(apply(I, f), f)) / inner_product(f, f));
    const double ph = fourier_pairing(*g, transform(f), transform(h));
    pars = std::max(pars, std::abs(inner_product(f, h) - ph) / (l2_norm(f) * l2_norm(h)));
  }
  o.detail << "d = -J|d|: " << fac << "; J^2 = -I: " << sq << "; <d^-1 f, f>: " << skew << "; Parseval: " << pars;
  o.require(fac <= kIdentityRel, "Hilbert factorization");
  o.require(sq <= kIdentityRel, "J^2");
  o.require(skew <= kIdentityRel, "skew-symmetry");
  o.require(pars <= kIdentityRel, "Parseval");
}

void criterion10(Outcome& o) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("krein_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  std::vector<std::string> bodies;
  for (const char* run : {"a", "b"}) {
    const fs::path out = dir / run;
    const std::string cmd = std::string("\"") + KREINIDX_PATH +
                            "\" spectrum --model fkdv --s 2 --p 5 --c 1 --n 512 --half-length 30 --out \"" +
                            out.string() + "\" > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    o.require(rc == 0, std::string("run ") + run + " exit status " + std::to_string(rc));
    std::ifstream in(out / "spectrum.csv", std::ios::binary);
    std::ostringstream body;
    body << in.rdbuf();
    bodies.push_back(body.str());
  }
  o.detail << "spectrum.csv sizes " << bodies[0].size() << ", " << bodies[1].size();
  o.require(!bodies[0].empty() && bodies[0] == bodies[1], "outputs differ");
  fs::remove_all(dir);
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<void(Outcome&)>>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {6, criterion6}, {4, criterion4},
      {5, criterion5}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}};
  std::vector<std::string> lines(11);
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char head[64];
    std::snprintf(head, sizeof head, "criterion %2d: %s (%.0f s) ", id, o.pass ? "PASS" : "FAIL", secs);
    lines[id] = head + o.detail.str();
    std::cerr << lines[id] << std::endl;
    failed += o.pass ? 0 : 1;
  }
  for (int id = 1; id <= 10; ++id) std::cout << lines[id] << "\n";
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
