#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "recreg/error.hpp"
#include "recreg/estimator.hpp"
#include "recreg/kernel.hpp"
#include "recreg/sequence.hpp"

namespace recreg {

struct Interval {
  double center = 0.0;
  double half_width = 0.0;

  double lower() const noexcept { return center - half_width; }
  double upper() const noexcept { return center + half_width; }
  bool contains(double v) const noexcept { return lower() <= v && v <= upper(); }
};

inline constexpr double kNormalQuantile975 = 1.96;

/// z sqrt(S int K^2 / (n^2 h density)) with S the residual sum of squares.
inline double interval_half_width(double residual_ss, std::size_t n, double h, double density,
                                  double square_integral, double z = kNormalQuantile975) {
  const double dn = static_cast<double>(n);
  return z * std::sqrt(residual_ss * square_integral / (dn * dn * h * density));
}

/// Plug-in interval around `center` given fitted values at every X_i.
inline Interval interval_from_fit(double center, std::span<const Sample> samples,
                                  std::span<const double> fitted, double h, double density,
                                  double square_integral, double z = kNormalQuantile975) {
  if (fitted.size() != samples.size()) throw InvalidArgument("one fitted value per sample");
  double ss = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double e = samples[i].y - fitted[i];
    ss += e * e;
  }
  return {center, interval_half_width(ss, samples.size(), h, density, square_integral, z)};
}

/// Interval around the Nadaraya-Watson estimate with Rosenblatt's density in
/// the width. Every kernel weight uses the same terminal bandwidth h.
inline Interval nw_interval(std::span<const Sample> samples, double x, double h,
                            const Kernel& kernel, double z = kNormalQuantile975,
                            Residuals residuals = Residuals::in_sample) {
  if (samples.empty()) throw InvalidArgument("nw_interval needs at least one sample");
  const double density = rosenblatt_density(samples, x, h, kernel);
  if (density == 0.0) throw DegenerateDenominator("Rosenblatt density is zero at x");
  const double center = nadaraya_watson(samples, x, h, kernel);
  const auto fitted = nadaraya_watson_fitted(samples, h, kernel, residuals);
  return interval_from_fit(center, samples, fitted, h, density, kernel.square_integral(), z);
}

enum class ResidualMode {
  exact,  // replay the recursion at every X_i
  grid,   // replay on a uniform grid and interpolate linearly
};

struct AveragedIntervalOptions {
  ResidualMode evaluation = ResidualMode::exact;
  Residuals residuals = Residuals::in_sample;
  std::size_t grid_size = 512;
  double z = kNormalQuantile975;
};

namespace detail {

inline std::size_t index_of(std::span<const double> points, double x, const char* what) {
  const auto it = std::find(points.begin(), points.end(), x);
  if (it == points.end()) throw InvalidArgument(std::string("x is not an evaluation point of the ") + what);
  return static_cast<std::size_t>(it - points.begin());
}

inline std::vector<double> averaged_fit_on_grid(std::span<const Sample> history,
                                                const EstimatorConfig& cfg,
                                                const Kernel& kernel, std::size_t grid_size) {
  if (grid_size < 2) throw InvalidArgument("grid needs at least two nodes");
  auto [lo_it, hi_it] = std::minmax_element(
      history.begin(), history.end(), [](const Sample& a, const Sample& b) { return a.x < b.x; });
  const double lo = lo_it->x, hi = hi_it->x;
  const double step = (hi - lo) / static_cast<double>(grid_size - 1);
  std::vector<double> grid(grid_size);
  for (std::size_t g = 0; g < grid_size; ++g) grid[g] = lo + step * static_cast<double>(g);

  RecursiveRegressor reg(cfg, kernel, grid);
  for (const auto& s : history) reg.update(s);
  const auto values = reg.r_bar();

  std::vector<double> fitted(history.size());
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (step == 0.0) {
      fitted[i] = values[0];
      continue;
    }
    const double t = (history[i].x - lo) / step;
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(t), grid_size - 2);
    const double w = t - static_cast<double>(k);
    fitted[i] = (1.0 - w) * values[k] + w * values[k + 1];
  }
  return fitted;
}

}  // namespace detail

/// Interval around the averaged recursive estimate with the recursive density
/// estimate in the width. `state` and `density` must have consumed exactly
/// `history`, and x must be one of their evaluation points. The width uses the
/// terminal bandwidth h_n.
inline Interval averaged_interval(std::span<const Sample> history, double x,
                                  const EstimatorConfig& cfg, const Kernel& kernel,
                                  const RecursiveRegressor& state,
                                  const RecursiveDensity& density,
                                  const AveragedIntervalOptions& opts = {}) {
  const std::size_t n = history.size();
  if (n == 0) throw InvalidArgument("averaged_interval needs a nonempty history");
  if (state.n() != n || density.n() != n) {
    throw InvalidArgument("state and density must be advanced through the same history");
  }
  const double center = state.r_bar()[detail::index_of(state.points(), x, "regressor")];
  const double f_hat = density.f_hat()[detail::index_of(density.points(), x, "density")];
  if (!(f_hat > 1e-12)) throw DegenerateDenominator("recursive density estimate is ~0 at x");

  const bool loo = opts.residuals == Residuals::leave_one_out;
  std::vector<double> fitted;
  if (opts.evaluation == ResidualMode::grid) {
    if (loo) throw InvalidArgument("grid residuals cannot leave samples out");
    fitted = detail::averaged_fit_on_grid(history, cfg, kernel, opts.grid_size);
  } else {
    fitted.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      fitted.push_back(evaluate_averaged_at(history, history[i].x, cfg, kernel,
                                            loo ? std::optional<std::size_t>(i) : std::nullopt));
    }
  }
  return interval_from_fit(center, history, fitted, cfg.bandwidth().eval(n), f_hat,
                           kernel.square_integral(), opts.z);
}

}  // namespace recreg
