// Pilot runs that fix the tolerance bands of the CLT-variance and
// bias-constant acceptance checks. Output is committed as pilots/results.txt.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "recreg/simulation.hpp"

using namespace recreg;
using namespace recreg::sim;

namespace {

// Averaged estimate at x started from r0, without the harness.
double rbar_from(const SimConfig& cfg, std::uint64_t rep, double x, double r0) {
  RecursiveRegressor reg(cfg.estimator_cfg, cfg.kernel, {x}, r0);
  for (const auto& s : draw_samples(cfg, rep)) reg.update(s);
  return reg.r_bar()[0];
}

}  // namespace

int main(int argc, char** argv) {
  const unsigned threads = argc > 1 ? static_cast<unsigned>(std::atoi(argv[1])) : 1;

  // Variance of standardized errors at the coverage-study configuration.
  for (std::uint64_t seed : {1001ULL, 2002ULL, 3003ULL}) {
    SimConfig cfg;
    cfg.n = 10'000;
    cfg.reps = 2000;
    cfg.seed = seed;
    const auto diag = clt_diagnostic(cfg, 0.0, threads);
    for (const auto& s : diag.samples) {
      std::printf("clt seed=%llu estimator=%s n=%zu reps=%zu mean=%.4f variance=%.4f ks=%.4f\n",
                  static_cast<unsigned long long>(seed), s.estimator.c_str(), diag.n, diag.reps,
                  s.mean, s.variance, s.ks_distance);
    }
  }

  // Bias-dominant regime: gamma_n = n^-0.95, h_n = q_n = n^-0.1, cos model, x = 0.
  const SequenceSpec h(1.0, 0.1);
  const EstimatorConfig bias_cfg(SequenceSpec(1.0, 0.95), h, h, SequenceSpec(0.8, 1.0));
  SimConfig cfg;
  cfg.estimator_cfg = bias_cfg;
  cfg.n = 10'000;
  cfg.reps = 500;
  const auto oracle = make_oracle(cfg.model, cfg.design, cfg.d);
  const double target =
      clt_params_averaged(oracle, 0.0, bias_cfg, cfg.kernel, Regime::bias_dominant()).bias;
  for (std::uint64_t seed : {1001ULL, 2002ULL, 3003ULL}) {
    cfg.seed = seed;
    const double mc = averaged_scaled_bias(cfg, 0.0, threads);
    std::printf("bias seed=%llu n=%zu reps=%zu mc=%.4f target=%.4f rel_err=%.4f\n",
                static_cast<unsigned long long>(seed), cfg.n, cfg.reps, mc, target,
                std::abs(mc - target) / std::abs(target));
  }

  // Start-value attribution: zero start against the true r(0) = 1.
  for (std::size_t n : {10'000UL, 100'000UL}) {
    SimConfig c;
    c.n = n;
    c.reps = n > 10'000 ? 400 : 2000;
    c.seed = 1001;
    const double v = clt_params_averaged(make_oracle(c.model, c.design, c.d), 0.0, c.estimator_cfg,
                                         c.kernel, Regime::balanced(0.0))
                         .variance;
    const double scale = std::sqrt(static_cast<double>(n) * c.estimator_cfg.bandwidth().eval(n) / v);
    for (double r0 : {0.0, 1.0}) {
      double m = 0.0, m2 = 0.0;
      for (std::uint64_t r = 0; r < c.reps; ++r) {
        const double e = scale * (rbar_from(c, r, 0.0, r0) - 1.0);
        m += e;
        m2 += e * e;
      }
      m /= static_cast<double>(c.reps);
      std::printf("clt-start n=%zu reps=%zu r0=%g mean=%.4f variance=%.4f\n", n, c.reps, r0, m,
                  m2 / static_cast<double>(c.reps) - m * m);
    }
  }
  for (std::size_t n : {10'000UL, 100'000UL}) {
    cfg.n = n;
    cfg.reps = n > 10'000 ? 200 : 500;
    cfg.seed = 1001;
    const double hn = h.eval(n);
    for (double r0 : {0.0, 1.0}) {
      double m = 0.0;
      for (std::uint64_t r = 0; r < cfg.reps; ++r) m += (rbar_from(cfg, r, 0.0, r0) - 1.0) / (hn * hn);
      std::printf("bias-start n=%zu reps=%zu r0=%g mc=%.4f target=%.4f\n", n, cfg.reps, r0,
                  m / static_cast<double>(cfg.reps), target);
    }
  }
}
