#pragma once

#include <cmath>
#include <numbers>

namespace lfdr {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))

/// A univariate normal distribution on the z-scale.
struct GaussianComponent {
  double mean = 0.0;
  double sd = 1.0;

  /// Throws Error(InvalidArgument) unless mean is finite and sd > 0.
  void validate() const;

  friend bool operator==(const GaussianComponent&, const GaussianComponent&) = default;
};

inline constexpr GaussianComponent kStandardNormal{0.0, 1.0};

double std_normal_cdf(double x) noexcept;
/// Upper tail 1 - Phi(x), accurate far into the tail.
double std_normal_sf(double x) noexcept;
/// Inverse of std_normal_cdf on (0, 1). Wichura's AS241 followed by one
/// Newton step against erfc. Returns +-inf at the endpoints.
double std_normal_quantile(double p) noexcept;

double gaussian_log_pdf(double z, const GaussianComponent& c) noexcept;
double gaussian_pdf(double z, const GaussianComponent& c) noexcept;
double gaussian_cdf(double z, const GaussianComponent& c) noexcept;

/// 2 * (1 - Phi(|z - mean| / sd)), computed through the upper tail.
double two_sided_pvalue(double z, const GaussianComponent& null) noexcept;

}  // namespace lfdr
