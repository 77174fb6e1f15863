#include "lfdrlab/normal.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <string>

#include "lfdrlab/error.hpp"

namespace lfdr {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::FullRegion: return "FullRegion";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::InvalidPValue: return "InvalidPValue";
    case ErrorCode::InvalidLfdr: return "InvalidLfdr";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NotEnoughData: return "NotEnoughData";
    case ErrorCode::DegenerateCF: return "DegenerateCF";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::DegenerateMarginal: return "DegenerateMarginal";
    case ErrorCode::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

void GaussianComponent::validate() const {
  if (!std::isfinite(mean)) {
    throw Error(ErrorCode::InvalidArgument, "gaussian component mean must be finite");
  }
  if (!(sd > 0.0) || !std::isfinite(sd)) {
    throw Error(ErrorCode::InvalidArgument,
                "gaussian component sd must be positive, got " + std::to_string(sd));
  }
}

double std_normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_sf(double x) noexcept {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

namespace {

template <std::size_t N>
double horner(const std::array<double, N>& c, double x) {
  double acc = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) acc = acc * x + c[i];
  return acc;
}

constexpr std::array<double, 8> kA = {
    3.3871328727963666080e0, 1.3314166789178437745e+2, 1.9715909503065514427e+3,
    1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
    3.3430575583588128105e+4, 2.5090809287301226727e+3};
constexpr std::array<double, 8> kB = {
    1.0, 4.2313330701600911252e+1, 6.8718700749205790830e+2, 5.3941960214247511077e+3,
    2.1213794301586595867e+4, 3.9307895800092710610e+4, 2.8729085735721942674e+4,
    5.2264952788528545610e+3};
constexpr std::array<double, 8> kC = {
    1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
    3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4};
constexpr std::array<double, 8> kD = {
    1.0, 2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
    1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
    1.05075007164441684324e-9};
constexpr std::array<double, 8> kE = {
    6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
    2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr std::array<double, 8> kF = {
    1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
    7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7,
    2.04426310338993978564e-15};

double as241(double p) {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * horner(kA, r) / horner(kB, r);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = horner(kC, r) / horner(kD, r);
  } else {
    r -= 5.0;
    value = horner(kE, r) / horner(kF, r);
  }
  return q < 0.0 ? -value : value;
}

}  // namespace

double std_normal_quantile(double p) noexcept {
  if (std::isnan(p)) return std::numeric_limits<double>::quiet_NaN();
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  double x = as241(p);
  // Newton polish; residual taken on the smaller tail to keep relative accuracy.
  const double dens = std::exp(-0.5 * x * x - kLogSqrt2Pi);
  if (dens > 0.0) {
    const double resid = (x < 0.0) ? std_normal_cdf(x) - p : (1.0 - p) - std_normal_sf(x);
    x -= resid / dens;
  }
  return x;
}

double gaussian_log_pdf(double z, const GaussianComponent& c) noexcept {
  const double u = (z - c.mean) / c.sd;
  return -0.5 * u * u - std::log(c.sd) - kLogSqrt2Pi;
}

double gaussian_pdf(double z, const GaussianComponent& c) noexcept {
  return std::exp(gaussian_log_pdf(z, c));
}

double gaussian_cdf(double z, const GaussianComponent& c) noexcept {
  return std_normal_cdf((z - c.mean) / c.sd);
}

double two_sided_pvalue(double z, const GaussianComponent& null) noexcept {
  const double u = std::fabs(z - null.mean) / null.sd;
  return std::min(1.0, 2.0 * std_normal_sf(u));
}

}  // namespace lfdr
