#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "recreg/error.hpp"
#include "recreg/kernel.hpp"
#include "recreg/sequence.hpp"

namespace recreg {

/// Standard normal distribution function.
inline double normal_cdf(double u) { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

/// Second derivative by central differences with one Richardson step.
/// The base step 1e-4 gives ~1e-7 accuracy on smooth functions of order one.
inline double second_derivative(const std::function<double(double)>& g, double x,
                                double step = 1e-4) {
  auto central = [&](double h) { return (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h); };
  return (4.0 * central(step / 2.0) - central(step)) / 3.0;
}

inline double first_derivative(const std::function<double(double)>& g, double x,
                               double step = 1e-4) {
  auto central = [&](double h) { return (g(x + h) - g(x - h)) / (2.0 * h); };
  return (4.0 * central(step / 2.0) - central(step)) / 3.0;
}

/// True regression function, design density and conditional variance of a
/// data-generating model.
struct ModelOracle {
  std::function<double(double)> r;
  std::function<double(double)> f;
  std::function<double(double)> cond_var;
};

inline constexpr double kMinDensity = 1e-12;

/// lim (n gamma_n)^-1 for a closed-form stepsize.
inline double xi(const SequenceSpec& stepsize) {
  const double p = stepsize.power();
  if (p > 1.0) throw DivergentXi("stepsize decays faster than 1/n");
  if (p < 1.0) return 0.0;
  if (stepsize.log_power() > 0.0) return 0.0;
  if (stepsize.log_power() == 0.0) return 1.0 / stepsize.scale();
  throw DivergentXi("n gamma_n tends to zero (power 1 with negative log power)");
}

/// Bias constant m2(x) = [(rf)''(x) - r(x) f''(x)] / (2 f(x)) * int z^2 K.
inline double m2(const ModelOracle& oracle, double x, const Kernel& kernel) {
  const double fx = oracle.f(x);
  if (!(fx >= kMinDensity)) throw ZeroDensity("design density vanishes at the evaluation point");
  const std::function<double(double)> rf = [&](double t) { return oracle.r(t) * oracle.f(t); };
  const double joint = second_derivative(rf, x);
  const double marginal = second_derivative(oracle.f, x);
  return (joint - oracle.r(x) * marginal) / (2.0 * fx) * kernel.moment(2);
}

/// Normalisation applied to the estimation error in the limit statement.
enum class Rate {
  sqrt_inv_stepsize_bandwidth,  // sqrt(gamma_n^-1 h_n)
  sqrt_n_bandwidth,             // sqrt(n h_n)
  inv_bandwidth_squared,        // h_n^-2 (limit in probability)
};

inline std::string_view rate_name(Rate rate) {
  switch (rate) {
    case Rate::sqrt_inv_stepsize_bandwidth: return "sqrt(gamma_n^-1 h_n)";
    case Rate::sqrt_n_bandwidth: return "sqrt(n h_n)";
    case Rate::inv_bandwidth_squared: return "h_n^-2";
  }
  return "?";
}

struct CltParams {
  double bias = 0.0;
  double variance = 0.0;
  Rate rate = Rate::sqrt_n_bandwidth;
};

/// Which limit statement is requested. `c` is the limit of the
/// bias/variance balance ratio: gamma_n^-1 h_n^5 for the generalised
/// estimator, n h_n^5 for the averaged one. The two are different
/// normalisations.
struct Regime {
  enum class Kind { balanced, bias_dominant };
  Kind kind = Kind::balanced;
  double c = 0.0;

  static Regime balanced(double c) {
    if (!(c >= 0.0)) throw InvalidArgument("regime constant c must be >= 0");
    return {Kind::balanced, c};
  }
  static Regime bias_dominant() { return {Kind::bias_dominant, 0.0}; }
};

/// Limit of sqrt(gamma_n^-1 h_n)(r_n(x) - r(x)), or of h_n^-2 (r_n(x) - r(x))
/// in the bias-dominant regime.
inline CltParams clt_params_generalized(const ModelOracle& oracle, double x,
                                        const EstimatorConfig& cfg, const Kernel& kernel,
                                        Regime regime) {
  const double fx = oracle.f(x);
  if (!(fx >= kMinDensity)) throw ZeroDensity("design density vanishes at the evaluation point");
  const double xi_val = xi(cfg.stepsize());
  const double a = cfg.a();
  const double lim_n_gamma =
      xi_val == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / xi_val;

  const double threshold =
      regime.kind == Regime::Kind::balanced ? (1.0 - a) / (2.0 * fx) : 2.0 * a / fx;
  if (!(lim_n_gamma > threshold)) {
    std::ostringstream os;
    os << "lim n gamma_n = " << lim_n_gamma << " does not exceed " << threshold;
    throw ConditionViolated(os.str());
  }
  const double bias_den = fx - 2.0 * a * xi_val;
  if (bias_den <= 0.0) throw PoleAtDenominator("f(x) - 2 a xi <= 0");

  const double m = m2(oracle, x, kernel);
  if (regime.kind == Regime::Kind::bias_dominant) {
    return {fx * m / bias_den, 0.0, Rate::inv_bandwidth_squared};
  }
  const double var_den = 2.0 * fx - (1.0 - a) * xi_val;
  return {std::sqrt(regime.c) * fx * m / bias_den,
          oracle.cond_var(x) * fx * kernel.square_integral() / var_den,
          Rate::sqrt_inv_stepsize_bandwidth};
}

/// The weight exponent that minimises the averaged estimator's variance.
inline double optimal_q(double a) {
  if (!(a >= 0.0 && a < 1.0)) throw InvalidArgument("bandwidth exponent a must lie in [0, 1)");
  return a;
}

/// (1-q)^2 / (1+a-2q): variance of the averaged estimator relative to
/// Nadaraya-Watson's.
inline double variance_factor(double q, double a) {
  const double den = 1.0 + a - 2.0 * q;
  if (!(den > 0.0)) throw PoleAtDenominator("1 + a - 2q <= 0");
  return (1.0 - q) * (1.0 - q) / den;
}

/// Limit parameters of sqrt(n h_n)(rbar_n(x) - r(x)) from the exponents and
/// pointwise model quantities, without checking estimator assumptions.
inline CltParams averaged_clt_params(double q, double a, double m2_value, double cond_var,
                                     double density, double square_integral, Regime regime) {
  if (!(density >= kMinDensity)) throw ZeroDensity("design density vanishes at the evaluation point");
  const double bias_den = 1.0 - q - 2.0 * a;
  if (bias_den == 0.0) throw PoleAtDenominator("1 - q - 2a = 0");
  const double bias_factor = (1.0 - q) / bias_den;
  if (regime.kind == Regime::Kind::bias_dominant) {
    return {bias_factor * m2_value, 0.0, Rate::inv_bandwidth_squared};
  }
  return {std::sqrt(regime.c) * bias_factor * m2_value,
          variance_factor(q, a) * cond_var / density * square_integral, Rate::sqrt_n_bandwidth};
}

inline CltParams clt_params_averaged(const ModelOracle& oracle, double x,
                                     const EstimatorConfig& cfg, const Kernel& kernel,
                                     Regime regime) {
  if (const auto rep = validate_assumptions(cfg.exponents(), EstimatorMode::averaged);
      !rep.passed()) {
    std::string msg = "averaged estimator assumptions fail:";
    for (const auto& c : rep.checks)
      if (!c.passed) msg += " " + c.name;
    throw ConditionViolated(msg);
  }
  const double fx = oracle.f(x);
  if (!(fx >= kMinDensity)) throw ZeroDensity("design density vanishes at the evaluation point");
  return averaged_clt_params(cfg.q(), cfg.a(), m2(oracle, x, kernel), oracle.cond_var(x), fx,
                             kernel.square_integral(), regime);
}

/// Undersmoothed Nadaraya-Watson limit: N(0, Var[Y|X=x] / f(x) * int K^2).
inline CltParams nadaraya_watson_clt_params(const ModelOracle& oracle, double x,
                                            const Kernel& kernel) {
  const double fx = oracle.f(x);
  if (!(fx >= kMinDensity)) throw ZeroDensity("design density vanishes at the evaluation point");
  return {0.0, oracle.cond_var(x) / fx * kernel.square_integral(), Rate::sqrt_n_bandwidth};
}

/// Asymptotic level 2 Phi(z sqrt(width_variance / true_variance)) - 1 of an
/// interval whose half-width uses `width_variance` while the estimator's
/// limiting variance is `true_variance`.
inline double theoretical_level(double width_variance, double true_variance, double z = 1.96) {
  if (!(width_variance > 0.0) || !(true_variance > 0.0) || !(z > 0.0)) {
    throw InvalidArgument("theoretical_level needs positive variances and z");
  }
  return std::erf(z * std::sqrt(width_variance / true_variance) / std::numbers::sqrt2);
}

}  // namespace recreg
