#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lfdrlab/normal.hpp"

namespace lfdr {

/// (1/m) sum_j exp(i t z_j). Throws Error(EmptyInput) on an empty sample.
std::complex<double> empirical_cf(std::span<const double> z, double t);

struct NullEstimate {
  double p0_hat = 1.0;
  double u0_hat = 0.0;
  double sigma0_hat = 1.0;
  double t_star = 0.0;                  // crossing frequency
  double cf_magnitude_at_t_star = 1.0;  // |psi_m(t_star)|

  GaussianComponent null() const noexcept { return {u0_hat, sigma0_hat}; }
};

/// Tuning for the frequency-domain null estimator. The defaults are the
/// documented configuration; frequency_step is exposed so that affine
/// transforms of the data can be matched with rescaled frequency grids.
struct EcfOptions {
  double frequency_step = 0.01;
  std::size_t frequency_count = 3000;
  double level_exponent = 0.4;  // crossing level max(level_floor, m^-level_exponent)
  double level_floor = 0.03;
  double inner_scale = 0.7;  // second averaging scale, as a fraction of t_star
  std::size_t kernel_nodes = 64;
  std::size_t min_size = 100;
  int max_iterations = 50;
};

/// Estimates (p0, u0, sigma0) of a Gaussian null from the empirical
/// characteristic function psi_m.
///
/// 1. t_star is the first grid frequency with |psi_m(t)| <= level.
/// 2. With omega(xi) = 2 (1 - xi) on [0, 1], the null-normalised average
///      P(s; u, sigma) = int omega(xi) exp(sigma^2 (s xi)^2 / 2)
///                           Re[exp(-i u s xi) psi_m(s xi)] dxi
///    equals p0 plus terms sum_j eps_j omega^(delta_j s) that vanish as the
///    frequency s grows. sigma0 is the value at which P agrees at s = t_star
///    and s = inner_scale * t_star (P drifts with s whenever sigma is wrong).
/// 3. u0 zeroes the one-sided sine average
///      int sin^2(pi xi) exp(sigma^2 (t xi)^2 / 2) Im[exp(-i u t xi) psi_m(t xi)] dxi.
/// 4. p0 = min(1, P(t_star; u0, sigma0)).
/// Steps 2 and 3 alternate until both settle. The starting point is the
/// single-frequency estimate at t_star (log-modulus slope for sigma0,
/// unwrapped phase over t for u0).
///
/// Errors: NotEnoughData when m < min_size; DegenerateCF when |psi_m| never
/// drops to the crossing level or the averaged equations have no root.
NullEstimate estimate_null_ecf(std::span<const double> z, const EcfOptions& options = {});

/// Gaussian-kernel estimate of the marginal density, tabulated on a
/// 1024-point grid over [min z - 4h, max z + 4h] and normalised by the
/// trapezoid rule. Off-grid points fall back to the kernel sum.
class MarginalDensityEstimate {
 public:
  static constexpr std::size_t kGridSize = 1024;

  MarginalDensityEstimate(std::vector<double> sample, double bandwidth);

  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double bandwidth() const noexcept { return bandwidth_; }

  double operator()(double z) const;

 private:
  double kernel_sum(double x) const;

  std::vector<double> sample_;  // sorted
  double bandwidth_;
  double scale_ = 1.0;  // trapezoid normalisation applied to kernel sums
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// 1.06 min(sd, IQR / 1.34) m^(-1/5); falls back to sd when the IQR is 0.
double silverman_bandwidth(std::span<const double> z);

/// Throws NotEnoughData for m < 2 and DegenerateData for zero spread.
MarginalDensityEstimate estimate_marginal_kde(std::span<const double> z,
                                              std::optional<double> bandwidth = std::nullopt);

/// min(1, #{p > lambda} / ((1 - lambda) m)).
double estimate_p0_tail(std::span<const double> pvalues, double lambda = 0.5);

/// min(1, p0 f0(z_i) / f(z_i)). Throws DegenerateMarginal when the marginal
/// falls below 1e-300 at any z_i.
std::vector<double> estimated_lfdr_values(std::span<const double> z, double p0_hat,
                                          const GaussianComponent& null,
                                          const std::function<double(double)>& marginal);
std::vector<double> estimated_lfdr_values(std::span<const double> z, const NullEstimate& null_est,
                                          const MarginalDensityEstimate& marginal);

}  // namespace lfdr
