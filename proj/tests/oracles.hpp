#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerical paths.

#include <cmath>
#include <functional>
#include <vector>

namespace lfdr::testing {

// erf via the positive-term series
//   erf(x) = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (1*3*...*(2n+1))
// evaluated in long double. No cancellation, so it is accurate to ~1e-18 for
// |x| <= 6.
inline long double erf_series(long double x) {
  const long double ax = std::fabs(x);
  long double term = ax;
  long double sum = ax;
  for (int n = 1; n < 2000; ++n) {
    term *= 2.0L * ax * ax / (2.0L * n + 1.0L);
    sum += term;
    if (term < 1e-22L * sum) break;
  }
  const long double v = 2.0L / std::sqrt(3.14159265358979323846264338327950288L) *
                        std::exp(-ax * ax) * sum;
  return x < 0 ? -v : v;
}

inline long double normal_cdf_ref(long double x) {
  return 0.5L * (1.0L + erf_series(x / std::sqrt(2.0L)));
}

inline long double normal_pdf_ref(long double x, long double mean = 0, long double sd = 1) {
  const long double u = (x - mean) / sd;
  return std::exp(-0.5L * u * u) / (sd * std::sqrt(2.0L * 3.14159265358979323846264338327950288L));
}

// Inverse CDF by bisection on the reference CDF.
inline double normal_quantile_ref(double p) {
  long double lo = -40.0L, hi = 40.0L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    if (normal_cdf_ref(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return static_cast<double>(0.5L * (lo + hi));
}

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + h * i) * ((i % 2) ? 4.0 : 2.0);
  return acc * h / 3.0;
}

struct RefComponent {
  double weight, mean, sd;
};

// Mass of each component over a union of intervals via CDF differences:
// the closed-form route for Gaussian-mixture region integrals.
inline double component_mass(const RefComponent& c, const std::vector<std::pair<double, double>>& ivs) {
  long double acc = 0;
  for (auto [lo, hi] : ivs) {
    const long double a = std::isinf(lo) ? -40.0L : (lo - c.mean) / c.sd;
    const long double b = std::isinf(hi) ? 40.0L : (hi - c.mean) / c.sd;
    // Subtract on the tail side closer to the interval for precision.
    if (a > 0) {
      acc += (1.0L - normal_cdf_ref(a)) - (1.0L - normal_cdf_ref(b));
    } else {
      acc += normal_cdf_ref(b) - normal_cdf_ref(a);
    }
  }
  return static_cast<double>(c.weight * acc);
}

}  // namespace lfdr::testing
