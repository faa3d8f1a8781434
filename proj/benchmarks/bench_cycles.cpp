// Throughput comparison of the OpenMP simulation kernel against the
// single-threaded reference, with an agreement check on the estimates.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "clearsim/sim.hpp"

using namespace clearsim;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace

int main(int argc, char** argv) {
  std::int64_t n_cycles = 2000000;
  std::string kind_name = "hp1";
  std::int64_t q = 5;
  double T = 1.5;
  double lambda = 2.0;
  std::uint64_t seed = 42;

  for (int i = 1; i < argc; ++i) {
    const char* a = argv[i];
    const auto next = [&]() -> const char* {
      if (i + 1 >= argc) {
        std::fprintf(stderr, "missing value for %s\n", a);
        std::exit(2);
      }
      return argv[++i];
    };
    if (!std::strcmp(a, "--cycles")) n_cycles = std::atoll(next());
    else if (!std::strcmp(a, "--policy")) kind_name = next();
    else if (!std::strcmp(a, "--q")) q = std::atoll(next());
    else if (!std::strcmp(a, "--T")) T = std::atof(next());
    else if (!std::strcmp(a, "--lambda")) lambda = std::atof(next());
    else if (!std::strcmp(a, "--seed")) seed = std::strtoull(next(), nullptr, 10);
    else {
      std::fprintf(stderr,
                   "usage: bench_cycles [--cycles N] [--policy KIND] [--q Q] "
                   "[--T T] [--lambda L] [--seed S]\n");
      return 2;
    }
  }

  const auto kind = policy_kind_from_string(kind_name);
  if (!kind) {
    std::fprintf(stderr, "unknown policy kind %s\n", kind_name.c_str());
    return 2;
  }
  PolicySpec spec{*kind, std::nullopt, std::nullopt};
  if (*kind == PolicyKind::QP || *kind == PolicyKind::HP1 ||
      *kind == PolicyKind::HP2 || *kind == PolicyKind::RHP1)
    spec.q = q;
  if (*kind != PolicyKind::QP) spec.T = T;
  spec.validate();
  const ArrivalRate rate(lambda);

#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("policy=%s lambda=%g cycles=%lld threads=%d\n",
              to_string(spec.kind), lambda, static_cast<long long>(n_cycles),
              threads);

  auto t0 = std::chrono::steady_clock::now();
  const SimEstimate ref = simulate_reference(spec, rate, n_cycles, seed);
  const double t_ref = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const SimEstimate par = simulate(spec, rate, n_cycles, seed);
  const double t_par = seconds_since(t0);

  std::printf("reference: %8.3f s  (%.2fM cycles/s)\n", t_ref,
              n_cycles / t_ref / 1e6);
  std::printf("parallel:  %8.3f s  (%.2fM cycles/s)  speedup %.2fx\n", t_par,
              n_cycles / t_par / 1e6, t_ref / t_par);
  std::printf("aod_hat: reference %.12g  parallel %.12g\n", ref.aod.mean,
              par.aod.mean);

  const double worst =
      std::max({rel_diff(ref.cycle.mean, par.cycle.mean),
                rel_diff(ref.wait.mean, par.wait.mean),
                rel_diff(ref.orders.mean, par.orders.mean),
                rel_diff(ref.aod.mean, par.aod.mean)});
  std::printf("max relative difference between kernels: %.3g\n", worst);
  if (worst > 1e-10) {
    std::fprintf(stderr, "kernels disagree beyond summation-order noise\n");
    return 1;
  }
  return 0;
}
