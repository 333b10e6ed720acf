#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "recreg/error.hpp"

namespace recreg {

enum class KernelFamily { gaussian, epanechnikov };

/// Nonnegative symmetric kernel with its moment functionals stored in
/// closed form.
class Kernel {
 public:
  struct Moments {
    double integral;
    double first_moment;
    double second_moment;
    double square_integral;
    double sup_norm;
    double lipschitz_constant;
  };

  explicit Kernel(KernelFamily family = KernelFamily::gaussian) : family_(family) {
    using std::numbers::pi;
    switch (family) {
      case KernelFamily::gaussian:
        // sup |K'| = sup |z| phi(z) = phi(1)
        moments_ = {1.0, 0.0, 1.0, 0.5 / std::sqrt(pi), 1.0 / std::sqrt(2.0 * pi),
                    std::exp(-0.5) / std::sqrt(2.0 * pi)};
        break;
      case KernelFamily::epanechnikov:
        moments_ = {1.0, 0.0, 0.2, 0.6, 0.75, 1.5};
        break;
    }
  }

  static Kernel gaussian() { return Kernel{KernelFamily::gaussian}; }
  static Kernel epanechnikov() { return Kernel{KernelFamily::epanechnikov}; }

  static Kernel from_name(std::string_view name) {
    if (name == "gaussian") return gaussian();
    if (name == "epanechnikov") return epanechnikov();
    throw InvalidArgument("unknown kernel '" + std::string(name) + "'");
  }

  KernelFamily family() const noexcept { return family_; }

  std::string_view name() const noexcept {
    return family_ == KernelFamily::gaussian ? "gaussian" : "epanechnikov";
  }

  double operator()(double z) const noexcept { return eval(z); }

  double eval(double z) const noexcept {
    if (family_ == KernelFamily::gaussian) {
      return std::exp(-0.5 * z * z) * std::numbers::inv_sqrtpi / std::numbers::sqrt2;
    }
    const double u = 1.0 - z * z;
    return u > 0.0 ? 0.75 * u : 0.0;
  }

  /// Integral of z^order K(z); order in {0, 1, 2}.
  double moment(int order) const {
    switch (order) {
      case 0: return moments_.integral;
      case 1: return moments_.first_moment;
      case 2: return moments_.second_moment;
      default: throw InvalidArgument("kernel moments are stored for orders 0, 1, 2 only");
    }
  }

  double square_integral() const noexcept { return moments_.square_integral; }
  double sup_norm() const noexcept { return moments_.sup_norm; }
  double lipschitz_constant() const noexcept { return moments_.lipschitz_constant; }
  const Moments& moments() const noexcept { return moments_; }

  /// Half-width of the support, or infinity.
  double support_radius() const noexcept {
    return family_ == KernelFamily::gaussian ? INFINITY : 1.0;
  }

  friend bool operator==(const Kernel& a, const Kernel& b) noexcept {
    return a.family_ == b.family_;
  }

 private:
  KernelFamily family_;
  Moments moments_{};
};

}  // namespace recreg
