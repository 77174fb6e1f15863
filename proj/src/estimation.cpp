#include "lfdrlab/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "lfdrlab/error.hpp"

namespace lfdr {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(std::span<const double> z) {
  for (double v : z) {
    if (!std::isfinite(v)) throw Error(ErrorCode::MalformedInput, "non-finite z-value");
  }
}

double wrap_phase(double d) {
  while (d > kPi) d -= 2.0 * kPi;
  while (d < -kPi) d += 2.0 * kPi;
  return d;
}

// Empirical CF tabulated at the kernel nodes of one averaging scale.
struct ScaledCf {
  std::vector<double> s;
  std::vector<std::complex<double>> psi;
};

class EcfSolver {
 public:
  EcfSolver(std::span<const double> z, double t_star, const EcfOptions& opt)
      : nodes_(opt.kernel_nodes) {
    xi_.resize(nodes_);
    omega_.resize(nodes_);
    taper_.resize(nodes_);
    for (std::size_t j = 0; j < nodes_; ++j) {
      const double x = (static_cast<double>(j) + 0.5) / static_cast<double>(nodes_);
      xi_[j] = x;
      omega_[j] = 2.0 * (1.0 - x) / static_cast<double>(nodes_);
      const double sp = std::sin(kPi * x);
      taper_[j] = sp * sp;
    }
    outer_ = tabulate(z, t_star);
    inner_ = tabulate(z, opt.inner_scale * t_star);
  }

  double average(const ScaledCf& cf, double u, double sigma) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes_; ++j) {
      const double s = cf.s[j];
      const std::complex<double> rot = std::polar(1.0, -u * s) * cf.psi[j];
      acc += omega_[j] * std::exp(0.5 * sigma * sigma * s * s) * rot.real();
    }
    return acc;
  }

  double p0(double u, double sigma) const { return average(outer_, u, sigma); }

  double scale_drift(double u, double sigma) const {
    return average(outer_, u, sigma) - average(inner_, u, sigma);
  }

  double phase_balance(double u, double sigma) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes_; ++j) {
      const double s = outer_.s[j];
      const std::complex<double> rot = std::polar(1.0, -u * s) * outer_.psi[j];
      acc += taper_[j] * std::exp(0.5 * sigma * sigma * s * s) * rot.imag();
    }
    return acc;
  }

 private:
  ScaledCf tabulate(std::span<const double> z, double t) const {
    ScaledCf out;
    out.s.resize(nodes_);
    out.psi.resize(nodes_);
    for (std::size_t j = 0; j < nodes_; ++j) {
      out.s[j] = t * xi_[j];
      out.psi[j] = empirical_cf(z, out.s[j]);
    }
    return out;
  }

  std::size_t nodes_;
  std::vector<double> xi_, omega_, taper_;
  ScaledCf outer_, inner_;
};

// Bisection on a bracket [a, b] with f(a), f(b) of opposite sign.
template <class F>
double bisect(F&& f, double a, double b, double fa) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (!(mid > std::min(a, b) && mid < std::max(a, b))) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
    if (std::fabs(b - a) <= 1e-14 * std::max(1.0, std::fabs(mid))) break;
  }
  return 0.5 * (a + b);
}

// Root of the decreasing crossing of phase_balance nearest to u.
std::optional<double> solve_location(const EcfSolver& solver, double u, double sigma,
                                     double t_star) {
  constexpr int kScan = 200;
  const double half_width = kPi / t_star;
  auto f = [&](double x) { return solver.phase_balance(x, sigma); };
  std::optional<double> best;
  double prev_x = u - half_width;
  double prev_f = f(prev_x);
  for (int i = 1; i <= kScan; ++i) {
    const double x = u - half_width + 2.0 * half_width * i / kScan;
    const double fx = f(x);
    if (prev_f > 0.0 && fx <= 0.0) {
      const double root = (fx == 0.0) ? x : bisect(f, prev_x, x, prev_f);
      if (!best || std::fabs(root - u) < std::fabs(*best - u)) best = root;
    }
    prev_x = x;
    prev_f = fx;
  }
  return best;
}

// Lowest upward crossing of scale_drift on a log grid around sigma.
std::optional<double> solve_scale(const EcfSolver& solver, double u, double sigma) {
  constexpr int kScan = 400;
  const double lo = std::log(sigma / 4.0);
  const double hi = std::log(sigma * 4.0);
  auto f = [&](double s) { return solver.scale_drift(u, s); };
  double prev_s = std::exp(lo);
  double prev_f = f(prev_s);
  for (int i = 1; i <= kScan; ++i) {
    const double s = std::exp(lo + (hi - lo) * i / kScan);
    const double fs = f(s);
    if (prev_f < 0.0 && fs >= 0.0) return (fs == 0.0) ? s : bisect(f, prev_s, s, prev_f);
    prev_s = s;
    prev_f = fs;
  }
  return std::nullopt;
}

}  // namespace

std::complex<double> empirical_cf(std::span<const double> z, double t) {
  if (z.empty()) throw Error(ErrorCode::EmptyInput, "empirical CF of an empty sample");
  double re = 0.0;
  double im = 0.0;
  for (double v : z) {
    re += std::cos(t * v);
    im += std::sin(t * v);
  }
  const double m = static_cast<double>(z.size());
  return {re / m, im / m};
}

NullEstimate estimate_null_ecf(std::span<const double> z, const EcfOptions& opt) {
  if (z.size() < opt.min_size) {
    std::ostringstream msg;
    msg << "null estimation needs at least " << opt.min_size << " z-values, got " << z.size();
    throw Error(ErrorCode::NotEnoughData, msg.str());
  }
  require_finite(z);
  const double m = static_cast<double>(z.size());
  const double level = std::max(opt.level_floor, std::pow(m, -opt.level_exponent));

  // Crossing scan with cumulative phase tracking from t = 0.
  double phase = 0.0;
  double prev_arg = 0.0;
  double t_star = 0.0;
  std::complex<double> psi_star;
  for (std::size_t k = 1; k <= opt.frequency_count; ++k) {
    const double t = opt.frequency_step * static_cast<double>(k);
    const auto psi = empirical_cf(z, t);
    const double arg = std::arg(psi);
    phase += wrap_phase(arg - prev_arg);
    prev_arg = arg;
    if (std::abs(psi) <= level) {
      t_star = t;
      psi_star = psi;
      break;
    }
  }
  if (t_star == 0.0) {
    throw Error(ErrorCode::DegenerateCF,
                "|psi_m(t)| never falls to the crossing level; data are near-constant");
  }

  // Single-frequency starting values.
  const double h = 0.5 * opt.frequency_step;
  const double slope =
      (std::log(std::abs(empirical_cf(z, t_star + h))) -
       std::log(std::abs(empirical_cf(z, t_star - h)))) / (2.0 * h);
  // The 1e-4 variance floor is stated for the default 0.01 frequency step.
  const double var_floor = 1e-4 * std::pow(0.01 / opt.frequency_step, 2);
  double sigma = std::sqrt(std::max(var_floor, -slope / t_star));
  double u = phase / t_star;

  const EcfSolver solver(z, t_star, opt);
  for (int it = 0; it < opt.max_iterations; ++it) {
    const auto u_next = solve_location(solver, u, sigma, t_star);
    if (!u_next) throw Error(ErrorCode::DegenerateCF, "no root for the null location");
    const auto s_next = solve_scale(solver, *u_next, sigma);
    if (!s_next) throw Error(ErrorCode::DegenerateCF, "no root for the null scale");
    const bool done = std::fabs(*u_next - u) <= 1e-12 * (sigma + std::fabs(u)) &&
                      std::fabs(*s_next - sigma) <= 1e-12 * sigma;
    u = *u_next;
    sigma = *s_next;
    if (done) break;
  }

  const double p0 = solver.p0(u, sigma);
  if (!(p0 > 0.0) || !std::isfinite(p0)) {
    throw Error(ErrorCode::DegenerateCF, "averaged null proportion is not positive");
  }

  NullEstimate est;
  est.p0_hat = std::min(1.0, p0);
  est.u0_hat = u;
  est.sigma0_hat = sigma;
  est.t_star = t_star;
  est.cf_magnitude_at_t_star = std::abs(psi_star);
  return est;
}

double silverman_bandwidth(std::span<const double> z) {
  const std::size_t n = z.size();
  if (n < 2) throw Error(ErrorCode::NotEnoughData, "bandwidth needs at least two points");
  const double mean = std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : z) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw Error(ErrorCode::DegenerateData, "sample standard deviation is 0");

  std::vector<double> sorted(z.begin(), z.end());
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(n - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    return i + 1 < n ? sorted[i] + frac * (sorted[i + 1] - sorted[i]) : sorted[i];
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 1.06 * spread * std::pow(static_cast<double>(n), -0.2);
}

MarginalDensityEstimate::MarginalDensityEstimate(std::vector<double> sample, double bandwidth)
    : sample_(std::move(sample)), bandwidth_(bandwidth) {
  if (sample_.size() < 2) throw Error(ErrorCode::NotEnoughData, "KDE needs at least two points");
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
    throw Error(ErrorCode::InvalidArgument, "bandwidth must be positive");
  }
  std::sort(sample_.begin(), sample_.end());
  const double lo = sample_.front() - 4.0 * bandwidth_;
  const double hi = sample_.back() + 4.0 * bandwidth_;
  const double step = (hi - lo) / static_cast<double>(kGridSize - 1);
  grid_.resize(kGridSize);
  values_.resize(kGridSize);
  for (std::size_t i = 0; i < kGridSize; ++i) {
    grid_[i] = (i + 1 == kGridSize) ? hi : lo + step * static_cast<double>(i);
    values_[i] = kernel_sum(grid_[i]);
  }
  double area = 0.0;
  for (std::size_t i = 1; i < kGridSize; ++i) {
    area += 0.5 * (values_[i] + values_[i - 1]) * (grid_[i] - grid_[i - 1]);
  }
  if (!(area > 0.0)) throw Error(ErrorCode::DegenerateData, "KDE has zero mass on its grid");
  scale_ = 1.0 / area;
  for (double& v : values_) v *= scale_;
}

double MarginalDensityEstimate::kernel_sum(double x) const {
  // Kernel terms beyond 10 bandwidths are below 1e-21 relative and skipped.
  const double reach = 10.0 * bandwidth_;
  const auto first = std::lower_bound(sample_.begin(), sample_.end(), x - reach);
  const auto last = std::upper_bound(first, sample_.end(), x + reach);
  double acc = 0.0;
  for (auto it = first; it != last; ++it) {
    const double u = (x - *it) / bandwidth_;
    acc += std::exp(-0.5 * u * u);
  }
  return acc / (static_cast<double>(sample_.size()) * bandwidth_) * std::exp(-kLogSqrt2Pi);
}

double MarginalDensityEstimate::operator()(double z) const {
  if (z < grid_.front() || z > grid_.back()) return scale_ * kernel_sum(z);
  const double step = (grid_.back() - grid_.front()) / static_cast<double>(kGridSize - 1);
  auto i = static_cast<std::size_t>((z - grid_.front()) / step);
  i = std::min(i, kGridSize - 2);
  const double w = std::clamp((z - grid_[i]) / (grid_[i + 1] - grid_[i]), 0.0, 1.0);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

MarginalDensityEstimate estimate_marginal_kde(std::span<const double> z,
                                              std::optional<double> bandwidth) {
  if (z.size() < 2) throw Error(ErrorCode::NotEnoughData, "KDE needs at least two points");
  require_finite(z);
  const auto [mn, mx] = std::minmax_element(z.begin(), z.end());
  if (*mn == *mx) throw Error(ErrorCode::DegenerateData, "sample standard deviation is 0");
  const double h = bandwidth ? *bandwidth : silverman_bandwidth(z);
  return MarginalDensityEstimate(std::vector<double>(z.begin(), z.end()), h);
}

double estimate_p0_tail(std::span<const double> pvalues, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must lie in (0, 1)");
  }
  if (pvalues.empty()) throw Error(ErrorCode::EmptyInput, "no p-values supplied");
  const auto above = std::count_if(pvalues.begin(), pvalues.end(),
                                   [lambda](double p) { return p > lambda; });
  const double raw = static_cast<double>(above) /
                     ((1.0 - lambda) * static_cast<double>(pvalues.size()));
  return std::min(1.0, raw);
}

std::vector<double> estimated_lfdr_values(std::span<const double> z, double p0_hat,
                                          const GaussianComponent& null,
                                          const std::function<double(double)>& marginal) {
  null.validate();
  if (!(p0_hat >= 0.0 && p0_hat <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "p0_hat must lie in [0, 1]");
  }
  std::vector<double> out;
  out.reserve(z.size());
  for (double v : z) {
    const double f = marginal(v);
    if (!(f >= 1e-300)) {
      std::ostringstream msg;
      msg << "marginal density estimate " << f << " at z = " << v
          << " is degenerate; check bandwidth and grid";
      throw Error(ErrorCode::DegenerateMarginal, msg.str());
    }
    out.push_back(std::min(1.0, p0_hat * gaussian_pdf(v, null) / f));
  }
  return out;
}

std::vector<double> estimated_lfdr_values(std::span<const double> z, const NullEstimate& null_est,
                                          const MarginalDensityEstimate& marginal) {
  return estimated_lfdr_values(z, null_est.p0_hat, null_est.null(),
                               [&marginal](double x) { return marginal(x); });
}

}  // namespace lfdr
