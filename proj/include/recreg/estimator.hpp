#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "recreg/error.hpp"
#include "recreg/kernel.hpp"
#include "recreg/sequence.hpp"

namespace recreg {

struct Sample {
  double x = 0.0;
  double y = 0.0;
};

/// How fitted values at the sample abscissas are formed for residuals.
enum class Residuals {
  in_sample,      // every sample contributes to the fit at its own X_i
  leave_one_out,  // sample i carries no kernel weight at X_i
};

/// Checks gamma_n h_n^-1 sup K <= 1 for every n >= 1, which keeps each
/// recursive update a convex combination of the old value and Y_n.
inline AssumptionCheck check_contraction(const EstimatorConfig& cfg, const Kernel& kernel) {
  const double sup =
      sequence_ratio_sup(cfg.stepsize(), cfg.bandwidth(), kernel.sup_norm());
  std::ostringstream os;
  os << "sup_n gamma_n h_n^-1 sup K = " << sup << " <= 1";
  const bool ok = sup <= 1.0;
  return {"contraction", ok, (ok ? "ok: " : "FAILED: ") + os.str()};
}

/// Generalised Revesz recursion and its weighted average, maintained on a
/// fixed set of evaluation points.
///
/// Each sample (X_n, Y_n) updates every point x with Z_n(x) = h_n^-1 K((x - X_n)/h_n):
///
///   r_n(x)    = (1 - gamma_n Z_n(x)) r_{n-1}(x) + gamma_n Y_n Z_n(x)
///   rbar_n(x) = sum_k q_k r_k(x) / sum_k q_k
///
/// The average is kept as a running mean, rbar += (q_n / sum q)(r_n - rbar).
/// The start r_0 defaults to 0 everywhere, which makes r_n linear in the
/// responses.
class RecursiveRegressor {
 public:
  RecursiveRegressor(EstimatorConfig cfg, Kernel kernel, std::vector<double> points,
                     double r0 = 0.0)
      : cfg_(std::move(cfg)),
        kernel_(kernel),
        points_(std::move(points)),
        r_(points_.size(), r0),
        r_bar_(points_.size(), 0.0),
        gain_(points_.size(), 0.0) {
    if (auto c = check_contraction(cfg_, kernel_); !c.passed) throw ContractionViolation(c.message);
  }

  static constexpr std::size_t no_exclusion = static_cast<std::size_t>(-1);

  void update(const Sample& s, std::size_t excluded_point = no_exclusion) {
    update(s.x, s.y, excluded_point);
  }

  /// Consumes one sample. If `excluded_point` is a valid index, the sample
  /// gives zero kernel weight to that point (used for leave-one-out fits).
  void update(double x_obs, double y_obs, std::size_t excluded_point = no_exclusion) {
    const std::uint64_t n = n_ + 1;
    const double gamma = cfg_.stepsize().eval(n);
    const double h = cfg_.bandwidth().eval(n);
    const double q = cfg_.weights().eval(n);

    for (std::size_t i = 0; i < points_.size(); ++i) {
      const double z = i == excluded_point ? 0.0 : kernel_.eval((points_[i] - x_obs) / h) / h;
      gain_[i] = z;
      if (gamma * z > 1.0) {
        std::ostringstream os;
        os << "gamma_n Z_n(x) = " << gamma * z << " > 1 at n=" << n << ", x=" << points_[i];
        throw ContractionViolation(os.str());
      }
    }

    weight_sum_ += q;
    const double w = q / weight_sum_;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const double z = gain_[i];
      r_[i] = (1.0 - gamma * z) * r_[i] + gamma * (y_obs * z);
      r_bar_[i] += w * (r_[i] - r_bar_[i]);
    }
    n_ = n;
  }

  std::span<const double> points() const noexcept { return points_; }
  std::span<const double> r() const noexcept { return r_; }
  std::span<const double> r_bar() const noexcept { return r_bar_; }
  double weight_sum() const noexcept { return weight_sum_; }
  std::uint64_t n() const noexcept { return n_; }
  const EstimatorConfig& config() const noexcept { return cfg_; }
  const Kernel& kernel() const noexcept { return kernel_; }

 private:
  EstimatorConfig cfg_;
  Kernel kernel_;
  std::vector<double> points_;
  std::vector<double> r_;
  std::vector<double> r_bar_;
  std::vector<double> gain_;
  double weight_sum_ = 0.0;
  std::uint64_t n_ = 0;
};

/// Recursive density estimator
///   f_n(x) = (1 - beta_n) f_{n-1}(x) + beta_n h_n^-1 K((x - X_n)/h_n),  f_0 = 0.
class RecursiveDensity {
 public:
  RecursiveDensity(SequenceSpec density_stepsize, SequenceSpec bandwidth, Kernel kernel,
                   std::vector<double> points)
      : beta_(density_stepsize),
        bandwidth_(bandwidth),
        kernel_(kernel),
        points_(std::move(points)),
        f_hat_(points_.size(), 0.0) {}

  RecursiveDensity(const EstimatorConfig& cfg, Kernel kernel, std::vector<double> points)
      : RecursiveDensity(cfg.density_stepsize(), cfg.bandwidth(), kernel, std::move(points)) {}

  void update(double x_obs) {
    const std::uint64_t n = n_ + 1;
    const double beta = beta_.eval(n);
    if (beta > 1.0) {
      std::ostringstream os;
      os << "density stepsize beta_" << n << " = " << beta << " > 1";
      throw InvalidStepsize(os.str());
    }
    const double h = bandwidth_.eval(n);
    for (std::size_t i = 0; i < points_.size(); ++i) {
      f_hat_[i] = (1.0 - beta) * f_hat_[i] + beta * kernel_.eval((points_[i] - x_obs) / h) / h;
    }
    n_ = n;
  }

  std::span<const double> points() const noexcept { return points_; }
  std::span<const double> f_hat() const noexcept { return f_hat_; }
  std::uint64_t n() const noexcept { return n_; }

 private:
  SequenceSpec beta_;
  SequenceSpec bandwidth_;
  Kernel kernel_;
  std::vector<double> points_;
  std::vector<double> f_hat_;
  std::uint64_t n_ = 0;
};

/// Replays the full recursion at a single point and returns rbar_n(x).
/// Uses the same arithmetic as carrying x in RecursiveRegressor's points.
/// When `excluded_step` is set, that sample (0-based) contributes no kernel
/// weight at x.
inline double evaluate_averaged_at(std::span<const Sample> history, double x,
                                   const EstimatorConfig& cfg, const Kernel& kernel,
                                   std::optional<std::size_t> excluded_step = std::nullopt) {
  RecursiveRegressor reg(cfg, kernel, {x});
  for (std::size_t k = 0; k < history.size(); ++k) {
    reg.update(history[k], excluded_step == k ? 0 : RecursiveRegressor::no_exclusion);
  }
  return reg.r_bar()[0];
}

/// Nadaraya-Watson ratio sum Y_k K((x-X_k)/h) / sum K((x-X_k)/h).
inline double nadaraya_watson(std::span<const Sample> samples, double x, double h,
                              const Kernel& kernel) {
  if (samples.empty()) throw InvalidArgument("nadaraya_watson needs at least one sample");
  double num = 0.0, den = 0.0;
  for (const auto& s : samples) {
    const double k = kernel.eval((x - s.x) / h);
    num += s.y * k;
    den += k;
  }
  if (den == 0.0) throw DegenerateDenominator("Nadaraya-Watson kernel weights sum to zero");
  return num / den;
}

/// Nadaraya-Watson fitted values at every sample abscissa X_i.
/// Exploits K((X_i - X_j)/h) = K((X_j - X_i)/h) to halve kernel evaluations.
/// Under leave-one-out, a sample with no kernel mass from the others (an
/// isolated tail point) gets its in-sample fit, which is Y_i.
inline std::vector<double> nadaraya_watson_fitted(std::span<const Sample> samples, double h,
                                                  const Kernel& kernel,
                                                  Residuals mode = Residuals::in_sample) {
  const std::size_t n = samples.size();
  std::vector<double> num(n, 0.0), den(n, 0.0);
  const double k0 = mode == Residuals::in_sample ? kernel.eval(0.0) : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num[i] += samples[i].y * k0;
    den[i] += k0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = kernel.eval((samples[i].x - samples[j].x) / h);
      num[i] += samples[j].y * k;
      den[i] += k;
      num[j] += samples[i].y * k;
      den[j] += k;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (den[i] == 0.0) {
      if (mode == Residuals::in_sample)
        throw DegenerateDenominator("Nadaraya-Watson kernel weights sum to zero");
      num[i] = samples[i].y;
      continue;
    }
    num[i] /= den[i];
  }
  return num;
}

/// Rosenblatt density estimate (n h)^-1 sum K((x - X_k)/h).
inline double rosenblatt_density(std::span<const double> xs, double x, double h,
                                 const Kernel& kernel) {
  if (xs.empty()) throw InvalidArgument("rosenblatt_density needs at least one sample");
  if (!(h > 0.0)) throw InvalidArgument("bandwidth must be positive");
  double sum = 0.0;
  for (double xi : xs) sum += kernel.eval((x - xi) / h);
  return sum / (static_cast<double>(xs.size()) * h);
}

inline double rosenblatt_density(std::span<const Sample> samples, double x, double h,
                                 const Kernel& kernel) {
  if (samples.empty()) throw InvalidArgument("rosenblatt_density needs at least one sample");
  if (!(h > 0.0)) throw InvalidArgument("bandwidth must be positive");
  double sum = 0.0;
  for (const auto& s : samples) sum += kernel.eval((x - s.x) / h);
  return sum / (static_cast<double>(samples.size()) * h);
}

}  // namespace recreg
