#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "recreg/asymptotics.hpp"
#include "recreg/error.hpp"
#include "recreg/estimator.hpp"
#include "recreg/interval.hpp"
#include "recreg/kernel.hpp"
#include "recreg/sequence.hpp"

namespace recreg::sim {

// ---------------------------------------------------------------------------
// Models and designs

enum class ModelId { cosine, bimodal_exp, linear, constant };

struct RegressionModel {
  ModelId id = ModelId::cosine;
  double level = 1.0;  // value of the constant model

  double operator()(double x) const {
    switch (id) {
      case ModelId::cosine: return std::cos(x);
      case ModelId::bimodal_exp:
        return 0.3 * std::exp(-4.0 * (x + 1.0) * (x + 1.0)) +
               0.7 * std::exp(-16.0 * (x - 1.0) * (x - 1.0));
      case ModelId::linear: return 1.0 + 0.4 * x;
      case ModelId::constant: return level;
    }
    return 0.0;
  }

  std::string_view name() const {
    switch (id) {
      case ModelId::cosine: return "cos";
      case ModelId::bimodal_exp: return "bimodal_exp";
      case ModelId::linear: return "linear";
      case ModelId::constant: return "constant";
    }
    return "?";
  }

  static RegressionModel from_name(std::string_view s) {
    if (s == "cos" || s == "cosine") return {ModelId::cosine};
    if (s == "bimodal_exp" || s == "bimodal") return {ModelId::bimodal_exp};
    if (s == "linear") return {ModelId::linear};
    if (s == "constant") return {ModelId::constant};
    throw InvalidArgument("unknown model '" + std::string(s) + "'");
  }

  friend bool operator==(const RegressionModel&, const RegressionModel&) = default;
};

enum class DesignId { std_normal, normal_mixture, student6 };

/// Distribution of the covariate X.
struct DesignDensity {
  DesignId id = DesignId::std_normal;

  double pdf(double x) const {
    constexpr double inv_sqrt_2pi = std::numbers::inv_sqrtpi / std::numbers::sqrt2;
    switch (id) {
      case DesignId::std_normal: return inv_sqrt_2pi * std::exp(-0.5 * x * x);
      case DesignId::normal_mixture:
        return 0.5 * inv_sqrt_2pi *
               (std::exp(-0.5 * (x + 0.5) * (x + 0.5)) + std::exp(-0.5 * (x - 0.5) * (x - 0.5)));
      case DesignId::student6: {
        constexpr double nu = 6.0;
        // Gamma(7/2) / (sqrt(6 pi) Gamma(3)) = (15/8) sqrt(pi) / (2 sqrt(6 pi))
        const double c = 15.0 / 16.0 / std::sqrt(nu);
        return c * std::pow(1.0 + x * x / nu, -(nu + 1.0) / 2.0);
      }
    }
    return 0.0;
  }

  /// Draws X from the stream. Student-t is built as Z / sqrt(chi2_6 / 6) with
  /// chi2_6 a sum of six squared normals from the same stream.
  template <typename Engine>
  double sample(Engine& rng, std::normal_distribution<double>& normal) const {
    switch (id) {
      case DesignId::std_normal: return normal(rng);
      case DesignId::normal_mixture: {
        const double shift = (rng() >> 63) ? 0.5 : -0.5;
        return shift + normal(rng);
      }
      case DesignId::student6: {
        const double z = normal(rng);
        double chi2 = 0.0;
        for (int k = 0; k < 6; ++k) {
          const double e = normal(rng);
          chi2 += e * e;
        }
        return z / std::sqrt(chi2 / 6.0);
      }
    }
    return 0.0;
  }

  std::string_view name() const {
    switch (id) {
      case DesignId::std_normal: return "std_normal";
      case DesignId::normal_mixture: return "normal_mixture";
      case DesignId::student6: return "student6";
    }
    return "?";
  }

  static DesignDensity from_name(std::string_view s) {
    if (s == "std_normal" || s == "normal") return {DesignId::std_normal};
    if (s == "normal_mixture" || s == "mixture") return {DesignId::normal_mixture};
    if (s == "student6" || s == "student" || s == "student_t6" || s == "t6") return {DesignId::student6};
    throw InvalidArgument("unknown design '" + std::string(s) + "'");
  }

  friend bool operator==(const DesignDensity&, const DesignDensity&) = default;
};

inline ModelOracle make_oracle(const RegressionModel& model, const DesignDensity& design,
                               double d) {
  return {[model](double x) { return model(x); }, [design](double x) { return design.pdf(x); },
          [d](double) { return d * d; }};
}

// ---------------------------------------------------------------------------
// Random streams
//
// Every replication owns an std::mt19937_64 seeded with a SplitMix64 hash of
// (master seed, n, d, replication index). Results therefore depend only on the
// configuration, never on scheduling.

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t n, double d,
                                 std::uint64_t replication) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ n);
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(d));
  return splitmix64(h ^ replication);
}

// ---------------------------------------------------------------------------
// Configuration and results

enum class EstimatorChoice { nw, averaged, both };

inline std::string_view estimator_name(EstimatorChoice e) {
  switch (e) {
    case EstimatorChoice::nw: return "nw";
    case EstimatorChoice::averaged: return "averaged";
    case EstimatorChoice::both: return "both";
  }
  return "?";
}

inline EstimatorChoice estimator_from_name(std::string_view s) {
  if (s == "nw") return EstimatorChoice::nw;
  if (s == "averaged") return EstimatorChoice::averaged;
  if (s == "both") return EstimatorChoice::both;
  throw InvalidArgument("unknown estimator '" + std::string(s) + "'");
}

inline std::string_view residuals_name(Residuals r) {
  return r == Residuals::in_sample ? "in_sample" : "leave_one_out";
}

inline Residuals residuals_from_name(std::string_view s) {
  if (s == "in_sample") return Residuals::in_sample;
  if (s == "leave_one_out") return Residuals::leave_one_out;
  throw InvalidArgument("unknown residual convention '" + std::string(s) + "'");
}

struct SimConfig {
  RegressionModel model;
  DesignDensity design;
  double d = 1.0;
  std::size_t n = 200;
  std::size_t reps = 5000;
  std::vector<double> points{-0.5, 0.0, 0.5};
  EstimatorConfig estimator_cfg = EstimatorConfig::coverage_study();
  Kernel kernel = Kernel::gaussian();
  std::uint64_t seed = 42;
  EstimatorChoice estimators = EstimatorChoice::both;
  // Leave-one-out reproduces the published coverage tables; in-sample is the
  // plain plug-in.
  Residuals residuals = Residuals::leave_one_out;

  void validate() const {
    if (reps < 1) throw InvalidArgument("reps must be >= 1");
    if (n < 2) throw InvalidArgument("n must be >= 2");
    if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidArgument("noise scale d must be >= 0");
    if (points.empty()) throw InvalidArgument("at least one evaluation point is required");
  }
};

/// Y = r(X) + d eps with X from the design and eps standard normal, X drawn first.
template <typename Eng>
Sample sample(const SimConfig& cfg, Eng& rng, std::normal_distribution<double>& normal) {
  const double x = cfg.design.sample(rng, normal);
  const double eps = normal(rng);
  return {x, cfg.model(x) + cfg.d * eps};
}

inline std::vector<Sample> draw_samples(const SimConfig& cfg, std::uint64_t replication) {
  Engine rng(stream_seed(cfg.seed, cfg.n, cfg.d, replication));
  std::normal_distribution<double> normal;
  std::vector<Sample> out;
  out.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) out.push_back(sample(cfg, rng, normal));
  return out;
}

struct CoverageCell {
  std::string model;
  std::string design;
  double d = 0.0;
  std::size_t n = 0;
  double x = 0.0;
  std::string estimator;
  std::size_t reps = 0;
  std::size_t covered = 0;
  std::size_t degenerate = 0;
  double coverage = 0.0;
  double se = 0.0;
  double mean_width = 0.0;
  double theoretical_level = 0.0;
};

struct CoverageReport {
  std::vector<CoverageCell> cells;

  const CoverageCell* find(double d, std::size_t n, double x, std::string_view estimator) const {
    for (const auto& c : cells)
      if (c.d == d && c.n == n && c.x == x && c.estimator == estimator) return &c;
    return nullptr;
  }
};

/// Outcome of one replication at one evaluation point.
struct PointOutcome {
  bool nw_covered = false;
  bool nw_degenerate = false;
  double nw_width = 0.0;
  bool avg_covered = false;
  bool avg_degenerate = false;
  double avg_width = 0.0;
};

/// Runs one replication: both intervals from the same sample (paired).
/// The averaged fit at each X_i comes from carrying the X_i as extra
/// evaluation points of the recursion, which equals exact replay. Under
/// leave-one-out residuals sample i skips its own point X_i.
inline std::vector<PointOutcome> run_replication(const SimConfig& cfg, std::uint64_t replication) {
  const auto samples = draw_samples(cfg, replication);
  const std::size_t m = cfg.points.size();
  const std::size_t n = samples.size();
  std::vector<PointOutcome> out(m);
  const double k2 = cfg.kernel.square_integral();
  const double h_n = cfg.estimator_cfg.bandwidth().eval(n);

  if (cfg.estimators != EstimatorChoice::averaged) {
    std::vector<double> fitted;
    bool fit_ok = true;
    try {
      fitted = nadaraya_watson_fitted(samples, h_n, cfg.kernel, cfg.residuals);
    } catch (const DegenerateDenominator&) {
      fit_ok = false;
    }
    for (std::size_t j = 0; j < m; ++j) {
      const double x = cfg.points[j];
      auto& o = out[j];
      if (!fit_ok) {
        o.nw_degenerate = true;
        continue;
      }
      try {
        const double density = rosenblatt_density(samples, x, h_n, cfg.kernel);
        if (density == 0.0) throw DegenerateDenominator("Rosenblatt density is zero at x");
        const double center = nadaraya_watson(samples, x, h_n, cfg.kernel);
        const auto iv = interval_from_fit(center, samples, fitted, h_n, density, k2);
        o.nw_covered = iv.contains(cfg.model(x));
        o.nw_width = 2.0 * iv.half_width;
      } catch (const DegenerateDenominator&) {
        o.nw_degenerate = true;
      }
    }
  }

  if (cfg.estimators != EstimatorChoice::nw) {
    std::vector<double> pts = cfg.points;
    pts.reserve(m + n);
    for (const auto& s : samples) pts.push_back(s.x);
    RecursiveRegressor reg(cfg.estimator_cfg, cfg.kernel, std::move(pts));
    RecursiveDensity dens(cfg.estimator_cfg, cfg.kernel, cfg.points);
    const bool loo = cfg.residuals == Residuals::leave_one_out;
    for (std::size_t k = 0; k < n; ++k) {
      reg.update(samples[k], loo ? m + k : RecursiveRegressor::no_exclusion);
      dens.update(samples[k].x);
    }
    const auto r_bar = reg.r_bar();
    const auto fitted = r_bar.subspan(m);
    for (std::size_t j = 0; j < m; ++j) {
      auto& o = out[j];
      const double f_hat = dens.f_hat()[j];
      if (!(f_hat > 1e-12)) {
        o.avg_degenerate = true;
        continue;
      }
      const auto iv = interval_from_fit(r_bar[j], samples, fitted, h_n, f_hat, k2);
      o.avg_covered = iv.contains(cfg.model(cfg.points[j]));
      o.avg_width = 2.0 * iv.half_width;
    }
  }
  return out;
}

/// Runs `body(i)` for i in [0, count) on `threads` workers. The first
/// exception thrown by any worker is rethrown on the caller's thread.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

inline double nw_theoretical_level() { return theoretical_level(1.0, 1.0); }

inline double averaged_theoretical_level(const EstimatorConfig& cfg) {
  return theoretical_level(1.0, variance_factor(cfg.q(), cfg.a()));
}

/// Coverage of both intervals at every evaluation point for one (n, d).
/// Degenerate replications count as non-covering; widths average over the
/// non-degenerate ones.
inline CoverageReport run_cell(const SimConfig& cfg, unsigned threads = 1) {
  cfg.validate();
  if (cfg.estimators != EstimatorChoice::nw) {
    const auto rep = validate_assumptions(cfg.estimator_cfg, EstimatorMode::averaged);
    if (!rep.passed()) {
      std::string msg = "averaged estimator assumptions fail:";
      for (const auto& c : rep.checks)
        if (!c.passed) msg += " " + c.name;
      throw ConditionViolated(msg);
    }
    if (auto c = check_contraction(cfg.estimator_cfg, cfg.kernel); !c.passed) {
      throw ContractionViolation(c.message);
    }
  }

  std::vector<std::vector<PointOutcome>> outcomes(cfg.reps);
  parallel_for(cfg.reps, threads, [&](std::size_t i) { outcomes[i] = run_replication(cfg, i); });

  CoverageReport report;
  const double reps = static_cast<double>(cfg.reps);
  auto finish = [&](CoverageCell cell, double width_sum) {
    cell.coverage = static_cast<double>(cell.covered) / reps;
    cell.se = std::sqrt(cell.coverage * (1.0 - cell.coverage) / reps);
    const std::size_t ok = cell.reps - cell.degenerate;
    cell.mean_width = ok > 0 ? width_sum / static_cast<double>(ok) : NAN;
    report.cells.push_back(std::move(cell));
  };

  for (std::size_t j = 0; j < cfg.points.size(); ++j) {
    CoverageCell base;
    base.model = cfg.model.name();
    base.design = cfg.design.name();
    base.d = cfg.d;
    base.n = cfg.n;
    base.x = cfg.points[j];
    base.reps = cfg.reps;

    if (cfg.estimators != EstimatorChoice::averaged) {
      CoverageCell cell = base;
      cell.estimator = "nw";
      cell.theoretical_level = nw_theoretical_level();
      double width = 0.0;
      for (const auto& rep : outcomes) {
        const auto& o = rep[j];
        cell.covered += o.nw_covered;
        cell.degenerate += o.nw_degenerate;
        if (!o.nw_degenerate) width += o.nw_width;
      }
      finish(std::move(cell), width);
    }
    if (cfg.estimators != EstimatorChoice::nw) {
      CoverageCell cell = base;
      cell.estimator = "averaged";
      cell.theoretical_level = averaged_theoretical_level(cfg.estimator_cfg);
      double width = 0.0;
      for (const auto& rep : outcomes) {
        const auto& o = rep[j];
        cell.covered += o.avg_covered;
        cell.degenerate += o.avg_degenerate;
        if (!o.avg_degenerate) width += o.avg_width;
      }
      finish(std::move(cell), width);
    }
  }
  return report;
}

struct TableLayout {
  std::vector<double> ds{1.0, 2.0};
  std::vector<std::size_t> ns{50, 100, 200};
};

/// All (d, n) cells for one model and design; evaluation points, reps,
/// seed and estimator sequences come from `tmpl`.
inline CoverageReport run_table(const RegressionModel& model, const DesignDensity& design,
                                const SimConfig& tmpl, unsigned threads = 1,
                                const TableLayout& layout = {}) {
  CoverageReport report;
  for (double d : layout.ds) {
    for (std::size_t n : layout.ns) {
      SimConfig cfg = tmpl;
      cfg.model = model;
      cfg.design = design;
      cfg.d = d;
      cfg.n = n;
      auto cell = run_cell(cfg, threads);
      for (auto& c : cell.cells) report.cells.push_back(std::move(c));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// CLT diagnostics

struct StandardizedSample {
  std::string estimator;
  double limit_variance = 0.0;
  std::vector<double> values;
  double mean = 0.0;
  double variance = 0.0;
  double ks_distance = 0.0;
};

struct CltDiagnostic {
  double x = 0.0;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::vector<StandardizedSample> samples;

  const StandardizedSample* find(std::string_view estimator) const {
    for (const auto& s : samples)
      if (s.estimator == estimator) return &s;
    return nullptr;
  }
};

/// sup_t |F_emp(t) - Phi(t)|.
inline double ks_distance_to_normal(std::vector<double> values) {
  if (values.empty()) return NAN;
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double p = normal_cdf(values[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - p, p - static_cast<double>(i) / n});
  }
  return d;
}

inline void summarize(StandardizedSample& s) {
  const double n = static_cast<double>(s.values.size());
  double mean = 0.0;
  for (double v : s.values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : s.values) ss += (v - mean) * (v - mean);
  s.mean = mean;
  s.variance = s.values.size() > 1 ? ss / (n - 1.0) : 0.0;
  s.ks_distance = ks_distance_to_normal(s.values);
}

/// Standardised errors sqrt(n h_n)(est(x) - r(x)) / sqrt(V) over replications,
/// V being the limit variance of the estimator (averaged: the weighted-average
/// CLT variance; nw: Var[Y|X=x] / f(x) int K^2). When V = 0 (noiseless data)
/// the raw scaled errors are recorded.
inline CltDiagnostic clt_diagnostic(const SimConfig& cfg, double x, unsigned threads = 1) {
  cfg.validate();
  const auto oracle = make_oracle(cfg.model, cfg.design, cfg.d);
  const double rx = cfg.model(x);
  const double h_n = cfg.estimator_cfg.bandwidth().eval(cfg.n);
  const double scale = std::sqrt(static_cast<double>(cfg.n) * h_n);
  const bool want_nw = cfg.estimators != EstimatorChoice::averaged;
  const bool want_avg = cfg.estimators != EstimatorChoice::nw;

  double v_avg = 0.0, v_nw = 0.0;
  if (want_avg) {
    v_avg = clt_params_averaged(oracle, x, cfg.estimator_cfg, cfg.kernel, Regime::balanced(0.0))
                .variance;
  }
  if (want_nw) v_nw = nadaraya_watson_clt_params(oracle, x, cfg.kernel).variance;

  std::vector<double> avg(cfg.reps, NAN), nw(cfg.reps, NAN);
  SimConfig one = cfg;
  one.points = {x};
  parallel_for(cfg.reps, threads, [&](std::size_t i) {
    const auto samples = draw_samples(one, i);
    if (want_avg) {
      RecursiveRegressor reg(cfg.estimator_cfg, cfg.kernel, {x});
      for (const auto& s : samples) reg.update(s);
      const double err = scale * (reg.r_bar()[0] - rx);
      avg[i] = v_avg > 0.0 ? err / std::sqrt(v_avg) : err;
    }
    if (want_nw) {
      const double err = scale * (nadaraya_watson(samples, x, h_n, cfg.kernel) - rx);
      nw[i] = v_nw > 0.0 ? err / std::sqrt(v_nw) : err;
    }
  });

  CltDiagnostic diag{x, cfg.n, cfg.reps, {}};
  if (want_avg) {
    diag.samples.push_back({"averaged", v_avg, std::move(avg)});
    summarize(diag.samples.back());
  }
  if (want_nw) {
    diag.samples.push_back({"nw", v_nw, std::move(nw)});
    summarize(diag.samples.back());
  }
  return diag;
}

/// Monte Carlo mean of h_n^-2 (rbar_n(x) - r(x)), the quantity whose limit is
/// the bias-dominant constant of the averaged estimator.
inline double averaged_scaled_bias(const SimConfig& cfg, double x, unsigned threads = 1) {
  cfg.validate();
  const double rx = cfg.model(x);
  const double h_n = cfg.estimator_cfg.bandwidth().eval(cfg.n);
  std::vector<double> vals(cfg.reps);
  SimConfig one = cfg;
  one.points = {x};
  parallel_for(cfg.reps, threads, [&](std::size_t i) {
    const auto samples = draw_samples(one, i);
    RecursiveRegressor reg(cfg.estimator_cfg, cfg.kernel, {x});
    for (const auto& s : samples) reg.update(s);
    vals[i] = (reg.r_bar()[0] - rx) / (h_n * h_n);
  });
  double sum = 0.0;
  for (double v : vals) sum += v;
  return sum / static_cast<double>(vals.size());
}

}  // namespace recreg::sim
