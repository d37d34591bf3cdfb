#include <doctest.h>

#include <cmath>
#include <numbers>

#include "krein/errors.hpp"
#include "krein/waves.hpp"

using namespace krein;

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

void check_wave_invariants(const WaveProfile& U) {
  const auto& v = U.values();
  const int n = static_cast<int>(v.size());
  const double peak = U.peak();
  CHECK(v.maxCoeff() == v[n / 2]);
  double asym = 0.0;
  for (int j = 1; j < n; ++j) asym = std::max(asym, std::abs(v[j] - v[n - j]));
  CHECK(asym <= 1e-8 * peak);
  CHECK(v.minCoeff() >= -1e-8 * peak);
}

}  // namespace

TEST_CASE("ground state s=2, p=2 is sqrt(2) sech") {
  const GridPtr g = make_grid(1024, 40.0);
  const WaveProfile Q = solve_ground_state(2.0, 2.0, g, SolverOptions::defaults_for(2.0));
  const RealField exact = RealField::sample(g, [](double x) { return std::sqrt(2.0) * sech(x); });
  CHECK((Q.values() - exact.values).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(Q.model == WaveModel::NORMALIZED);
  CHECK(Q.c == 1.0);
  CHECK(Q.residual_norm <= 1e-10);
  CHECK(std::abs(Q.stabilizing_factor - 1.0) <= 1e-8);
  check_wave_invariants(Q);
  CHECK_FALSE(Q.truncation_warning);
}

TEST_CASE("fractional ground states satisfy the invariants") {
  const GridPtr g = make_grid(1024, 60.0);
  for (auto [s, p] : {std::pair{1.5, 2.0}, std::pair{1.0, 1.0}, std::pair{0.8, 1.2}}) {
    const WaveProfile Q = solve_ground_state(s, p, g, SolverOptions::defaults_for(s));
    CHECK(Q.residual_norm <= 1e-8);
    CHECK(existence_residual(Q) <= 1e-8);
    CHECK(std::abs(Q.stabilizing_factor - 1.0) <= 1e-8);
    check_wave_invariants(Q);
  }
}

TEST_CASE("fKdV s=1, p=1 ground state is 2/(1+x^2)") {
  // |d|Q + Q - Q^2 = 0: Q = 2/(1+x^2) is half the Benjamin-Ono soliton at c = 1
  const GridPtr g = make_grid(2048, 100.0);
  SolverOptions o = SolverOptions::defaults_for(1.0);
  o.max_iters = 5000;
  const WaveProfile Q = solve_ground_state(1.0, 1.0, g, o);
  CHECK(Q.peak() == doctest::Approx(2.0).epsilon(1e-3));
  const WaveProfile bo = bo_profile(g, 1.0);
  CHECK((Q.values() - 0.5 * bo.values()).cwiseAbs().maxCoeff() <= 2e-3);
}

TEST_CASE("existence window") {
  const GridPtr g = make_grid(256, 20.0);
  CHECK(p_max(0.5) == doctest::Approx(2.0));
  CHECK(std::isinf(p_max(1.0)));
  CHECK_THROWS_AS(solve_ground_state(0.5, 3.0, g, SolverOptions{}), ExistenceWindowError);
  CHECK_THROWS_AS(solve_ground_state(2.5, 1.0, g, SolverOptions{}), ExistenceWindowError);
  try {
    solve_ground_state(0.5, 3.0, g, SolverOptions{});
  } catch (const ExistenceWindowError& e) {
    CHECK(std::string(e.what()).find("p_max") != std::string::npos);
  }
  SolverOptions bad;
  bad.gamma = 3.5;
  CHECK_THROWS_AS(solve_ground_state(2.0, 2.0, g, bad), std::invalid_argument);
}

TEST_CASE("non-convergence reports the last residual") {
  const GridPtr g = make_grid(256, 20.0);
  SolverOptions o;
  o.max_iters = 2;
  o.tol = 1e-14;
  try {
    solve_ground_state(2.0, 2.0, g, o);
    FAIL("expected ConvergenceFailure");
  } catch (const ConvergenceFailure& e) {
    CHECK(e.last_residual() > 0.0);
  }
}

TEST_CASE("KdV scaling") {
  const GridPtr g = make_grid(1024, 40.0);
  const WaveProfile Q = solve_ground_state(2.0, 2.0, g, SolverOptions::defaults_for(2.0));
  SUBCASE("c = 1 is the same profile") {
    const WaveProfile U = kdv_wave(Q, 1.0);
    CHECK(U.model == WaveModel::FKDV);
    CHECK((U.values() - Q.values()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("c = 4 peak is 2 sqrt(2)") {
    const WaveProfile U = kdv_wave(Q, 4.0);
    CHECK(U.peak() == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-10));
    CHECK(existence_residual(U) <= 1e-9);
  }
  SUBCASE("mass law and interpolation vs dilated solve") {
    for (double c : {0.5, 2.0, 3.0}) {
      const WaveProfile U = kdv_wave(Q, c);
      const double e = 2.0 / 2.0 - 1.0 / 2.0;
      const double want = std::pow(c, e) * inner_product(Q.field, Q.field);
      CHECK(inner_product(U.field, U.field) == doctest::Approx(want).epsilon(1e-6));
      const WaveProfile V = kdv_wave_on(g, 2.0, 2.0, c, SolverOptions::defaults_for(2.0));
      CHECK((U.values() - V.values()).cwiseAbs().maxCoeff() <= 1e-6);
      CHECK(V.residual_norm <= 10 * 1e-10);
    }
  }
  CHECK_THROWS_AS(kdv_wave(Q, 0.0), ExistenceWindowError);
}

TEST_CASE("fractional KdV mass law") {
  const GridPtr g = make_grid(1024, 60.0);
  const double s = 1.5, p = 2.0;
  const WaveProfile Q = solve_ground_state(s, p, g, SolverOptions::defaults_for(s));
  for (double c : {0.7, 1.6}) {
    const WaveProfile U = kdv_wave(Q, c);
    const double want = std::pow(c, 2.0 / p - 1.0 / s) * inner_product(Q.field, Q.field);
    CHECK(inner_product(U.field, U.field) == doctest::Approx(want).epsilon(1e-6));
    // Interpolation truncates the algebraic tail; the dilated solve does not.
    const WaveProfile V = kdv_wave_on(g, s, p, c, SolverOptions::defaults_for(s));
    CHECK(existence_residual(V) <= 10 * 1e-8);
  }
}

TEST_CASE("BBM scaling") {
  const GridPtr g = make_grid(1024, 40.0);
  const WaveProfile Q = solve_ground_state(2.0, 2.0, g, SolverOptions::defaults_for(2.0));
  const WaveProfile U = bbm_wave(Q, 2.0);
  CHECK(U.model == WaveModel::FBBM);
  CHECK(existence_residual(U) <= 1e-7);
  const WaveProfile V = bbm_wave_on(g, 2.0, 2.0, 2.0, SolverOptions::defaults_for(2.0));
  CHECK(V.residual_norm <= 1e-7);
  for (double c : {1.1, 1.01, 1.001}) {
    const WaveProfile W = bbm_wave(Q, c);
    CHECK(W.peak() == doctest::Approx(std::pow(c - 1.0, 0.5) * Q.peak()).epsilon(1e-10));
  }
  CHECK_THROWS_AS(bbm_wave(Q, 1.0), ExistenceWindowError);
  CHECK_THROWS_AS(bbm_wave_on(g, 2.0, 2.0, 1.0, SolverOptions{}), ExistenceWindowError);
}

TEST_CASE("Benjamin-Ono profile") {
  const GridPtr g = make_grid(4096, 400.0);
  const WaveProfile U = bo_profile(g, 1.0);
  CHECK(U.peak() == doctest::Approx(4.0));
  CHECK(std::abs(inner_product(U.field, U.field) - 8.0 * std::numbers::pi) <= 0.01 * 8.0 * std::numbers::pi);
  const GridPtr h = make_grid(64, 8.0);
  for (double c : {0.5, 1.0, 2.0}) {
    const WaveProfile V = bo_profile(h, c);
    CHECK(V.peak() == doctest::Approx(4.0 * c));
    CHECK(4.0 * c / (1.0 + c * c * (1.0 / c) * (1.0 / c)) == doctest::Approx(2.0 * c));
  }
}

TEST_CASE("sech profiles") {
  const GridPtr g = make_grid(1024, 40.0);
  for (double p : {1.0, 2.0, 3.0}) {
    const WaveProfile U = sech_profile(g, p, 1.0);
    CHECK(U.residual_norm <= 1e-10);
    CHECK(existence_residual(U) <= 1e-10);
    CHECK(U.peak() == doctest::Approx(std::pow((p + 2.0) / 2.0, 1.0 / p)).epsilon(1e-14));
  }
  const WaveProfile U2 = sech_profile(g, 2.0, 1.0);
  for (int j = 0; j < g->n(); j += 97)
    CHECK(U2.values()[j] == doctest::Approx(std::sqrt(2.0) * sech(g->point(j))).epsilon(1e-14));
  const WaveProfile U1 = sech_profile(g, 1.0, 1.0);
  for (int j = 0; j < g->n(); j += 97)
    CHECK(U1.values()[j] == doctest::Approx(1.5 * std::pow(sech(g->point(j) / 2.0), 2)).epsilon(1e-14));
  const WaveProfile Uc = sech_profile(g, 2.0, 2.5);
  CHECK(Uc.peak() == doctest::Approx(std::pow(2.5 * 2.0, 0.5)).epsilon(1e-14));
}

TEST_CASE("clamped power and truncation warning") {
  Eigen::VectorXd u(4);
  u << 1.0, 1e-20, 0.25, -1e-18;
  double frac = -1.0;
  const Eigen::VectorXd r = clamped_power(u, 1.5, &frac);
  CHECK(r[0] == 1.0);
  CHECK(r[2] == doctest::Approx(0.125));
  CHECK(r[1] == doctest::Approx(std::pow(1e-14, 1.5)));
  CHECK(frac >= 0.0);
  const Eigen::VectorXd q = profile_power(u, 2.0);
  CHECK(q[3] == doctest::Approx(1e-36));

  const GridPtr g = make_grid(256, 4.0);
  const WaveProfile U = sech_profile(g, 1.0, 0.1);
  CHECK(U.truncation_warning);
}
