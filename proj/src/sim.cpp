#include "clearsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace clearsim {
namespace {

// Per-cycle accumulation happens in fixed-size blocks whose partial sums are
// merged in block order, so the result is independent of thread count.
constexpr std::int64_t kBlockCycles = 4096;

struct CompiledPolicy {
  PolicyKind kind;
  std::int64_t q = 0;
  double T = 0.0;
};

CompiledPolicy compile(const PolicySpec& policy) {
  policy.validate();
  return {policy.kind, policy.q.value_or(0), policy.T.value_or(0.0)};
}

struct CycleOut {
  double length = 0.0;   // tau, from cycle start
  double wait = 0.0;     // integral of the count process up to tau
  double active = 0.0;   // stopping time of the final (only) window
  std::int64_t orders = 0;
};

// One regeneration cycle. Waiting accrues as an area sweep: while n orders
// sit in the system for dt, wait grows by n*dt, which keeps every increment
// nonnegative.
CycleOut run_cycle(const CompiledPolicy& p, double lambda, CycleRng& rng) {
  switch (p.kind) {
    case PolicyKind::QP: {
      double t = 0.0, w = 0.0;
      for (std::int64_t n = 0; n < p.q; ++n) {
        const double e = rng.exponential(lambda);
        w += static_cast<double>(n) * e;
        t += e;
      }
      return {t, w, t, p.q};
    }
    case PolicyKind::TP1: {
      double t = 0.0, w = 0.0;
      std::int64_t n = 0;
      for (;;) {
        const double e = rng.exponential(lambda);
        if (t + e >= p.T) {
          w += static_cast<double>(n) * (p.T - t);
          return {p.T, w, p.T, n};
        }
        w += static_cast<double>(n) * e;
        t += e;
        ++n;
      }
    }
    case PolicyKind::TP2: {
      double t = rng.exponential(lambda);
      const double deadline = t + p.T;
      double w = 0.0;
      std::int64_t n = 1;
      for (;;) {
        const double e = rng.exponential(lambda);
        if (t + e >= deadline) {
          w += static_cast<double>(n) * (deadline - t);
          return {deadline, w, deadline, n};
        }
        w += static_cast<double>(n) * e;
        t += e;
        ++n;
      }
    }
    case PolicyKind::HP1: {
      double t = 0.0, w = 0.0;
      std::int64_t n = 0;
      for (;;) {
        if (n == p.q) return {t, w, t, n};
        const double e = rng.exponential(lambda);
        if (t + e >= p.T) {
          w += static_cast<double>(n) * (p.T - t);
          return {p.T, w, p.T, n};
        }
        w += static_cast<double>(n) * e;
        t += e;
        ++n;
      }
    }
    case PolicyKind::HP2: {
      double t = rng.exponential(lambda);
      const double deadline = t + p.T;
      double w = 0.0;
      std::int64_t n = 1;
      for (;;) {
        if (n == p.q) return {t, w, t, n};
        const double e = rng.exponential(lambda);
        if (t + e >= deadline) {
          w += static_cast<double>(n) * (deadline - t);
          return {deadline, w, deadline, n};
        }
        w += static_cast<double>(n) * e;
        t += e;
        ++n;
      }
    }
    case PolicyKind::RTP1: {
      // Clear at the end of the first window of length T containing an
      // arrival; earlier windows are empty so no waiting accrues in them.
      double t = rng.exponential(lambda);
      const double k = std::floor(t / p.T) + 1.0;
      const double deadline = k * p.T;
      double w = 0.0;
      std::int64_t n = 1;
      for (;;) {
        const double e = rng.exponential(lambda);
        if (t + e >= deadline) {
          w += static_cast<double>(n) * (deadline - t);
          return {deadline, w, p.T, n};
        }
        w += static_cast<double>(n) * e;
        t += e;
        ++n;
      }
    }
    case PolicyKind::RHP1: {
      // Quantity clock and deadline both restart at each empty window
      // boundary; the cycle length keeps the empty windows.
      const double t1 = rng.exponential(lambda);
      const double start = std::floor(t1 / p.T) * p.T;
      const double deadline = start + p.T;
      double t = t1, w = 0.0;
      std::int64_t n = 1;
      for (;;) {
        if (n == p.q) return {t, w, t - start, n};
        const double e = rng.exponential(lambda);
        if (t + e >= deadline) {
          w += static_cast<double>(n) * (deadline - t);
          return {deadline, w, p.T, n};
        }
        w += static_cast<double>(n) * e;
        t += e;
        ++n;
      }
    }
  }
  throw std::logic_error("unreachable policy kind");
}

struct Sums {
  double c = 0, c2 = 0;
  double n = 0, n2 = 0;
  double w = 0, w2 = 0, wn = 0;
  double rw = 0, rw2 = 0;
  double rn = 0, rn2 = 0;

  void add(const CycleOut& o, double lambda) {
    const double nn = static_cast<double>(o.orders);
    const double rw_i = o.wait - nn * (nn - 1.0) / (2.0 * lambda);
    const double rn_i = nn - lambda * o.active;
    c += o.length;
    c2 += o.length * o.length;
    n += nn;
    n2 += nn * nn;
    w += o.wait;
    w2 += o.wait * o.wait;
    wn += o.wait * nn;
    rw += rw_i;
    rw2 += rw_i * rw_i;
    rn += rn_i;
    rn2 += rn_i * rn_i;
  }

  void merge(const Sums& s) {
    c += s.c;   c2 += s.c2;
    n += s.n;   n2 += s.n2;
    w += s.w;   w2 += s.w2;  wn += s.wn;
    rw += s.rw; rw2 += s.rw2;
    rn += s.rn; rn2 += s.rn2;
  }
};

Sums accumulate_block(const CompiledPolicy& p, double lambda,
                      std::uint64_t seed, std::int64_t first,
                      std::int64_t last) {
  Sums s;
  for (std::int64_t i = first; i < last; ++i) {
    CycleRng rng = CycleRng::substream(seed, static_cast<std::uint64_t>(i));
    s.add(run_cycle(p, lambda, rng), lambda);
  }
  return s;
}

Estimate mean_and_se(double sum, double sum_sq, std::int64_t n) {
  const double nd = static_cast<double>(n);
  const double mean = sum / nd;
  if (n < 2) return {mean, 0.0};
  const double var = std::max(0.0, (sum_sq - nd * mean * mean) / (nd - 1.0));
  return {mean, std::sqrt(var / nd)};
}

SimEstimate assemble(const Sums& total, std::int64_t n_cycles,
                     std::uint64_t seed) {
  SimEstimate out;
  out.n_cycles = n_cycles;
  out.seed = seed;
  out.cycle = mean_and_se(total.c, total.c2, n_cycles);
  out.orders = mean_and_se(total.n, total.n2, n_cycles);
  out.wait = mean_and_se(total.w, total.w2, n_cycles);
  out.residual_w = mean_and_se(total.rw, total.rw2, n_cycles);
  out.residual_n = mean_and_se(total.rn, total.rn2, n_cycles);

  // Renewal-reward ratio estimator with a delta-method standard error.
  const double nd = static_cast<double>(n_cycles);
  const double ratio = out.wait.mean / out.orders.mean;
  out.aod.mean = ratio;
  if (n_cycles >= 2 && total.n > 0.0) {
    const double mw = total.w / nd;
    const double mn = total.n / nd;
    const double s_ww = (total.w2 - nd * mw * mw) / (nd - 1.0);
    const double s_nn = (total.n2 - nd * mn * mn) / (nd - 1.0);
    const double s_wn = (total.wn - nd * mw * mn) / (nd - 1.0);
    const double var_ratio =
        std::max(0.0, s_ww - 2.0 * ratio * s_wn + ratio * ratio * s_nn) /
        (mn * mn * nd);
    out.aod.se = std::sqrt(var_ratio);
  }
  return out;
}

void require_cycles(std::int64_t n_cycles) {
  if (n_cycles < 1)
    throw std::invalid_argument("n_cycles must be >= 1, got " +
                                std::to_string(n_cycles));
}

}  // namespace

CycleRecord sample_cycle(const PolicySpec& policy, ArrivalRate rate,
                         CycleRng& rng) {
  const CycleOut o = run_cycle(compile(policy), rate.lambda, rng);
  return {o.length, o.orders, o.wait};
}

SimEstimate simulate(const PolicySpec& policy, ArrivalRate rate,
                     std::int64_t n_cycles, std::uint64_t seed) {
  require_cycles(n_cycles);
  const CompiledPolicy p = compile(policy);
  const double lambda = rate.lambda;

  const std::int64_t n_blocks = (n_cycles + kBlockCycles - 1) / kBlockCycles;
  std::vector<Sums> partial(static_cast<std::size_t>(n_blocks));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t b = 0; b < n_blocks; ++b) {
    const std::int64_t first = b * kBlockCycles;
    const std::int64_t last = std::min(n_cycles, first + kBlockCycles);
    partial[static_cast<std::size_t>(b)] =
        accumulate_block(p, lambda, seed, first, last);
  }

  Sums total;
  for (const Sums& s : partial) total.merge(s);
  return assemble(total, n_cycles, seed);
}

SimEstimate simulate_reference(const PolicySpec& policy, ArrivalRate rate,
                               std::int64_t n_cycles, std::uint64_t seed) {
  require_cycles(n_cycles);
  const CompiledPolicy p = compile(policy);
  Sums total;
  for (std::int64_t i = 0; i < n_cycles; ++i) {
    CycleRng rng = CycleRng::substream(seed, static_cast<std::uint64_t>(i));
    total.add(run_cycle(p, rate.lambda, rng), rate.lambda);
  }
  return assemble(total, n_cycles, seed);
}

std::pair<Estimate, Estimate> martingale_check(const PolicySpec& policy,
                                               ArrivalRate rate,
                                               std::int64_t n_cycles,
                                               std::uint64_t seed) {
  const SimEstimate est = simulate(policy, rate, n_cycles, seed);
  return {est.residual_w, est.residual_n};
}

}  // namespace clearsim
