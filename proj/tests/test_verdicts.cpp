#include <doctest.h>

#include <algorithm>

#include "krein/errors.hpp"
#include "krein/verdicts.hpp"

using namespace krein;

TEST_CASE("verdict names") {
  CHECK(to_string(Verdict::STABLE) == "STABLE");
  CHECK(to_string(Verdict::UNSTABLE) == "UNSTABLE");
  CHECK(to_string(Verdict::DEGENERATE) == "DEGENERATE");
}

TEST_CASE("default numerics by dispersion order") {
  CHECK(default_numerics(2.0).n == 1024);
  CHECK(default_numerics(2.0).half_length == 40.0);
  CHECK(default_numerics(1.5).half_length == 100.0);
  CHECK(default_numerics(0.8).half_length == 40.0);
  CHECK(default_numerics(0.6).half_length == 20.0);
  CHECK(default_numerics(0.6).n == 2048);
}

TEST_CASE("KdV s=2, p=2 is stable") {
  const KreinIndexResult r = kdv_verdict(2.0, 2.0, 1.0, default_numerics(2.0));
  CHECK(r.n_L == 1);
  CHECK(r.slope > 0.0);
  CHECK(r.d < 0.0);
  CHECK(r.slope == doctest::Approx(-2.0 * r.d));
  CHECK(r.K_formula == 0);
  CHECK(r.K_direct == 0);
  CHECK(r.K_direct == r.k_r + r.k_c + r.k_i_minus);
  CHECK(r.verdict == Verdict::STABLE);
  CHECK_FALSE(r.theory_violation);
  CHECK(r.gker.dim == 2);
}

TEST_CASE("KdV s=2, p=5 is unstable with one real eigenvalue") {
  const KreinIndexResult r = kdv_verdict(2.0, 5.0, 1.0, default_numerics(2.0));
  CHECK(r.n_L == 1);
  CHECK(r.slope < 0.0);
  CHECK(r.K_formula == 1);
  CHECK(r.k_r == 1);
  CHECK(r.K_direct == 1);
  CHECK(r.verdict == Verdict::UNSTABLE);
}

TEST_CASE("KdV s=2, p=4 is degenerate") {
  const KreinIndexResult r = kdv_verdict(2.0, 4.0, 1.0, default_numerics(2.0));
  CHECK(r.verdict == Verdict::DEGENERATE);
  CHECK(r.gker.dim >= 3);
}

TEST_CASE("verdict is invariant under the speed scaling") {
  for (double p : {2.0, 5.0}) {
    const Verdict base = kdv_verdict(2.0, p, 1.0, default_numerics(2.0)).verdict;
    for (double c : {0.5, 3.0}) {
      const KreinIndexResult r = kdv_verdict(2.0, p, c, default_numerics(2.0));
      CHECK(r.verdict == base);
      CHECK(r.slope == doctest::Approx(r.slope_reference).epsilon(1e-3));
    }
  }
}

TEST_CASE("fractional KdV s=0.6, p=1 is stable") {
  const KreinIndexResult r = kdv_verdict(0.6, 1.0, 1.0, default_numerics(0.6));
  CHECK(r.verdict == Verdict::STABLE);
  CHECK(r.K_direct == 0);
  CHECK_FALSE(r.theory_violation);
}

TEST_CASE("BBM s=2, p=2, c=2 is stable") {
  Numerics num = default_numerics(2.0);
  num.keep_spectrum = true;
  const KreinIndexResult r = bbm_verdict(2.0, 2.0, 2.0, num);
  CHECK(r.model == WaveModel::FBBM);
  REQUIRE(r.bbm.has_value());
  CHECK(r.bbm->finite_difference > 0.0);
  CHECK(r.bbm->closed_form > 0.0);
  CHECK_FALSE(r.bbm->step_flag);
  CHECK(r.verdict == Verdict::STABLE);
  CHECK(r.K_direct == 0);
  CHECK(r.eigenvalues.size() == r.classes.size());
  CHECK(r.eigenvalues.size() == static_cast<size_t>(r.n - 2));
}

TEST_CASE("verdict input errors") {
  CHECK_THROWS_AS(bbm_verdict(2.0, 2.0, 1.0, default_numerics(2.0)), ExistenceWindowError);
  CHECK_THROWS_AS(kdv_verdict(0.5, 3.0, 1.0, default_numerics(0.5)), ExistenceWindowError);
  try {
    bbm_verdict(2.0, 2.0, 1.0, default_numerics(2.0));
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("wave") != std::string::npos);
  }
}

TEST_CASE("sweeps") {
  Numerics num = default_numerics(2.0);
  num.n = 512;
  SUBCASE("no steps") {
    const SweepResult sw = sweep(SweepAxis::P, 2.0, 5.0, 0, 2.0, 0.0, 1.0, WaveModel::FKDV, num);
    CHECK(sw.points.empty());
    CHECK(sw.flips.empty());
  }
  SUBCASE("single point") {
    const SweepResult sw = sweep(SweepAxis::P, 3.0, 3.0, 5, 2.0, 0.0, 1.0, WaveModel::FKDV, num);
    REQUIRE(sw.points.size() == 1);
    CHECK(sw.points[0].value == 3.0);
    CHECK(sw.points[0].status == "ok");
    CHECK(sw.flips.empty());
  }
  SUBCASE("flip across p = 4") {
    const SweepResult sw = sweep(SweepAxis::P, 3.0, 5.0, 3, 2.0, 0.0, 1.0, WaveModel::FKDV, num);
    REQUIRE(sw.points.size() == 3);
    CHECK(sw.points[1].result->verdict == Verdict::DEGENERATE);
    REQUIRE(sw.flips.size() == 1);
    CHECK(sw.flips[0] == std::pair{3.0, 5.0});
  }
  SUBCASE("failures are recorded") {
    const SweepResult sw = sweep(SweepAxis::C, 0.5, 1.5, 3, 2.0, 2.0, 0.0, WaveModel::FBBM, num);
    REQUIRE(sw.points.size() == 3);
    CHECK(sw.points[0].status != "ok");
    CHECK_FALSE(sw.points[0].result.has_value());
    CHECK(sw.points[2].status == "ok");
  }
}

TEST_CASE("self-check cases") {
  const auto names = self_check_cases();
  CHECK(names == std::vector<std::string>{"gkdv-p2", "gkdv-p5", "schrodinger-sech2", "bo"});
  for (const auto& name : names) {
    CAPTURE(name);
    const SelfCheckReport r = self_check(name);
    CHECK(r.case_name == name);
    CHECK_FALSE(r.assertions.empty());
    for (const auto& a : r.assertions) {
      CAPTURE(a.name);
      CAPTURE(a.detail);
      CHECK(a.passed);
    }
  }
  CHECK_THROWS_AS(self_check("nope"), std::invalid_argument);
}
