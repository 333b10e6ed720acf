#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "recreg/error.hpp"

namespace recreg {

/// Positive sequence v_n = scale * n^(-power) * (ln n)^log_power.
///
/// This closed form covers every stepsize, bandwidth and weight sequence the
/// estimators use, and it makes membership in the Galambos-Seneta class
/// GS(-power) decidable from the parameters alone: n [1 - v_{n-1}/v_n] tends
/// to -power for any log_power. The value at n = 1 is defined to be `scale`,
/// since (ln 1)^log_power is either 0 or undefined.
class SequenceSpec {
 public:
  SequenceSpec() = default;

  SequenceSpec(double scale, double power, double log_power = 0.0)
      : scale_(scale), power_(power), log_power_(log_power) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw InvalidArgument("sequence scale must be finite and positive");
    }
    if (!std::isfinite(power) || !std::isfinite(log_power)) {
      throw InvalidArgument("sequence exponents must be finite");
    }
  }

  static SequenceSpec constant(double value) { return {value, 0.0, 0.0}; }

  double scale() const noexcept { return scale_; }
  double power() const noexcept { return power_; }
  double log_power() const noexcept { return log_power_; }

  double operator()(std::uint64_t n) const { return eval(n); }

  double eval(std::uint64_t n) const {
    if (n == 0) throw InvalidArgument("sequences are indexed from n = 1");
    if (n == 1) return scale_;
    const double dn = static_cast<double>(n);
    double v = scale_ * std::pow(dn, -power_);
    if (log_power_ != 0.0) v *= std::pow(std::log(dn), log_power_);
    return v;
  }

  /// n_max [1 - v_{n_max - 1} / v_{n_max}], which tends to -power.
  double gs_exponent_estimate(std::uint64_t n_max) const {
    if (n_max < 100) throw InvalidArgument("gs_exponent_estimate needs n_max >= 100");
    const double n = static_cast<double>(n_max);
    // log(v_{n-1}/v_n), evaluated without cancellation.
    const double log_ratio =
        -power_ * std::log1p(-1.0 / n) +
        log_power_ * std::log(std::log(n - 1.0) / std::log(n));
    return -n * std::expm1(log_ratio);
  }

  std::string describe() const {
    std::ostringstream os;
    os << scale_ << "*n^(" << -power_ << ")";
    if (log_power_ != 0.0) os << "*(ln n)^(" << log_power_ << ")";
    return os.str();
  }

  friend bool operator==(const SequenceSpec&, const SequenceSpec&) = default;

 private:
  double scale_ = 1.0;
  double power_ = 0.0;
  double log_power_ = 0.0;
};

/// sup_{n >= 1} num_n / den_n * factor for two closed-form sequences.
///
/// The ratio is C t^(-p) (ln t)^b on t >= 2, whose only interior critical
/// point is t = exp(b/p); the supremum is therefore attained at n = 1, n = 2
/// or one of the integers around that point, or it is infinite.
inline double sequence_ratio_sup(const SequenceSpec& num, const SequenceSpec& den,
                                 double factor = 1.0) {
  const double p = num.power() - den.power();
  const double b = num.log_power() - den.log_power();
  auto ratio = [&](std::uint64_t n) { return factor * num.eval(n) / den.eval(n); };

  if (p < 0.0 || (p == 0.0 && b > 0.0)) return INFINITY;

  double best = std::max(ratio(1), ratio(2));
  if (p > 0.0 && b > 0.0) {
    const double t_star = std::exp(b / p);
    if (t_star < 1e15) {
      const auto lo = static_cast<std::uint64_t>(std::max(2.0, std::floor(t_star)));
      best = std::max({best, ratio(lo), ratio(lo + 1)});
    } else {
      return INFINITY;  // the maximiser is beyond any realistic sample size
    }
  }
  return best;
}

/// Exponents alpha, a, q of the stepsize, bandwidth and weight sequences.
struct Exponents {
  double alpha = 0.0;  // gamma_n in GS(-alpha)
  double a = 0.0;      // h_n in GS(-a)
  double q = 0.0;      // q_n in GS(-q)
  double stepsize_log_power = 0.0;

  friend bool operator==(const Exponents&, const Exponents&) = default;
};

/// Sequences that parameterise the recursive estimators.
class EstimatorConfig {
 public:
  EstimatorConfig(SequenceSpec stepsize, SequenceSpec bandwidth, SequenceSpec weights,
                  SequenceSpec density_stepsize)
      : stepsize_(stepsize),
        bandwidth_(bandwidth),
        weights_(weights),
        density_stepsize_(density_stepsize) {
    if (stepsize_.power() > 1.0) {
      throw InvalidArgument("stepsize must not decay faster than 1/n (sum of gamma_n must diverge)");
    }
  }

  /// gamma_n = n^-0.9, h_n = q_n = n^-1/5 (ln n)^-1, beta_n = 0.8/n.
  static EstimatorConfig coverage_study() {
    const SequenceSpec h{1.0, 0.2, -1.0};
    return {SequenceSpec{1.0, 0.9, 0.0}, h, h, SequenceSpec{0.8, 1.0, 0.0}};
  }

  const SequenceSpec& stepsize() const noexcept { return stepsize_; }
  const SequenceSpec& bandwidth() const noexcept { return bandwidth_; }
  const SequenceSpec& weights() const noexcept { return weights_; }
  const SequenceSpec& density_stepsize() const noexcept { return density_stepsize_; }

  double alpha() const noexcept { return stepsize_.power(); }
  double a() const noexcept { return bandwidth_.power(); }
  double q() const noexcept { return weights_.power(); }

  Exponents exponents() const noexcept {
    return {alpha(), a(), q(), stepsize_.log_power()};
  }

  friend bool operator==(const EstimatorConfig&, const EstimatorConfig&) = default;

 private:
  SequenceSpec stepsize_;
  SequenceSpec bandwidth_;
  SequenceSpec weights_;
  SequenceSpec density_stepsize_;
};

enum class EstimatorMode { generalized, averaged };

struct AssumptionCheck {
  std::string name;
  bool passed = false;
  std::string message;
};

struct ValidationReport {
  std::vector<AssumptionCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const AssumptionCheck& c) { return c.passed; });
  }

  const AssumptionCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

inline std::string interval_text(double lo, double hi, bool closed_hi = false) {
  std::ostringstream os;
  os << "(" << lo << ", " << hi << (closed_hi ? "]" : ")");
  return os.str();
}

inline void add_check(ValidationReport& rep, std::string name, bool ok, std::string what) {
  rep.checks.push_back({std::move(name), ok, (ok ? "ok: " : "FAILED: ") + std::move(what)});
}

}  // namespace detail

/// Symbolic checks of the exponent conditions for the chosen estimator.
///
/// generalized: alpha in (3/4, 1], a in ((1-alpha)/4, alpha/3), and the limit
/// of (n gamma_n)^-1 exists (always, for closed-form sequences with alpha <= 1).
/// averaged additionally: a in (1-alpha, (4 alpha - 3)/2),
/// q < min{1 - 2a, (1 + a)/2}, and n gamma_n / ln(sum gamma_k) -> infinity.
inline ValidationReport validate_assumptions(const Exponents& e, EstimatorMode mode) {
  ValidationReport rep;
  const double alpha = e.alpha, a = e.a, q = e.q;

  {
    const bool ok = alpha > 0.75 && alpha <= 1.0;
    std::ostringstream os;
    os << "stepsize exponent alpha=" << alpha << " in " << detail::interval_text(0.75, 1.0, true);
    detail::add_check(rep, "stepsize_exponent", ok, os.str());
  }
  {
    const double lo = (1.0 - alpha) / 4.0, hi = alpha / 3.0;
    const bool ok = a > lo && a < hi;
    std::ostringstream os;
    os << "bandwidth exponent a=" << a << " in " << detail::interval_text(lo, hi);
    detail::add_check(rep, "bandwidth_exponent", ok, os.str());
  }
  detail::add_check(rep, "stepsize_limit", alpha <= 1.0,
                    "limit of (n gamma_n)^-1 exists for closed-form stepsizes with alpha <= 1");

  if (mode == EstimatorMode::averaged) {
    {
      const double lo = 1.0 - alpha, hi = (4.0 * alpha - 3.0) / 2.0;
      const bool ok = a > lo && a < hi;
      std::ostringstream os;
      os << "averaging bandwidth exponent a=" << a << " in " << detail::interval_text(lo, hi);
      detail::add_check(rep, "averaging_bandwidth", ok, os.str());
    }
    {
      const double bound = std::min(1.0 - 2.0 * a, (1.0 + a) / 2.0);
      const bool ok = q < bound;
      std::ostringstream os;
      os << "weight exponent q=" << q << " < min{1-2a, (1+a)/2} = " << bound;
      detail::add_check(rep, "averaging_weights", ok, os.str());
    }
    {
      const bool ok = alpha < 1.0 || (alpha == 1.0 && e.stepsize_log_power > 0.0);
      detail::add_check(rep, "averaging_stepsize_growth", ok,
                        "n gamma_n / ln(sum gamma_k) diverges (needs alpha < 1, or alpha = 1 "
                        "with a positive log power)");
    }
  }
  return rep;
}

/// Relative tolerance used when cross-checking exponents numerically.
inline double gs_tolerance(std::uint64_t n) {
  return std::max(1e-3, 5.0 / std::log(static_cast<double>(n)));
}

/// Symbolic checks plus a numeric GS-exponent cross-check of each sequence.
inline ValidationReport validate_assumptions(const EstimatorConfig& cfg, EstimatorMode mode) {
  ValidationReport rep = validate_assumptions(cfg.exponents(), mode);
  constexpr std::uint64_t n_check = 1'000'000;
  auto cross = [&](const char* name, const SequenceSpec& s, double exponent) {
    const double est = s.gs_exponent_estimate(n_check);
    const bool ok = std::abs(est + exponent) <= gs_tolerance(n_check);
    std::ostringstream os;
    os << s.describe() << ": numeric GS exponent " << est << " vs " << -exponent;
    detail::add_check(rep, name, ok, os.str());
  };
  cross("stepsize_gs_crosscheck", cfg.stepsize(), cfg.alpha());
  cross("bandwidth_gs_crosscheck", cfg.bandwidth(), cfg.a());
  if (mode == EstimatorMode::averaged) cross("weights_gs_crosscheck", cfg.weights(), cfg.q());
  return rep;
}

}  // namespace recreg
