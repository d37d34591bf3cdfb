// Serial vs OpenMP timings of the pipeline kernels.
//   bench_kernels [n] [repeats]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>

#include <omp.h>

#include "krein/kernels.hpp"

namespace {

double best_of(int repeats, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, double diff) {
  std::printf("%-20s serial %9.4f s   openmp %9.4f s   speedup %5.2f   max|diff| %.3g\n", name, serial,
              parallel, serial / parallel, diff);
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 1024;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  std::printf("n = %d, threads = %d, best of %d\n", n, omp_get_max_threads(), repeats);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(n);
  for (auto& x : v) x = nd(rng);

  Eigen::MatrixXd Ps, Pp;
  const double ps = best_of(repeats, [&] { Ps = krein::kernels::potential_block_serial(v); });
  const double pp = best_of(repeats, [&] { Pp = krein::kernels::potential_block(v); });
  report("potential_block", ps, pp, (Ps - Pp).cwiseAbs().maxCoeff());

  Eigen::VectorXd y(4 * n);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (auto& t : y) t = u(rng);
  Eigen::VectorXd Is, Ip;
  const double is = best_of(repeats, [&] { Is = krein::kernels::trig_interpolate_serial(v, -20.0, 40.0, y); });
  const double ip = best_of(repeats, [&] { Ip = krein::kernels::trig_interpolate(v, -20.0, 40.0, y); });
  report("trig_interpolate", is, ip, (Is - Ip).cwiseAbs().maxCoeff());

  const Eigen::MatrixXd A = 0.5 * (Ps + Ps.transpose());
  const Eigen::MatrixXcd V = Eigen::MatrixXcd::Random(n, n);
  Eigen::VectorXd Qs, Qp;
  const double qs = best_of(repeats, [&] { Qs = krein::kernels::quadratic_forms_serial(A, V); });
  const double qp = best_of(repeats, [&] { Qp = krein::kernels::quadratic_forms(A, V); });
  report("quadratic_forms", qs, qp, (Qs - Qp).cwiseAbs().maxCoeff() / Qs.cwiseAbs().maxCoeff());
  return 0;
}
