#pragma once

#include <span>
#include <vector>

#include "lfdrlab/normal.hpp"

namespace lfdr {

struct WeightedComponent {
  double weight = 0.0;
  GaussianComponent component;
};

/// Two-group Gaussian mixture: a null component with weight p0 and an
/// ordered list of weighted nonnull components.
///
///   f(z) = p0 * f0(z) + sum_j w_j * phi_j(z),    p0 + sum_j w_j = 1
///
/// Densities are combined in log space so that far-tail terms (phi(6) and
/// smaller) keep full relative precision.
class TwoGroupModel {
 public:
  /// Throws Error(InvalidModel) when the weights are out of range or do not
  /// sum to one within `weight_tolerance`.
  TwoGroupModel(double p0, GaussianComponent null, std::vector<WeightedComponent> nonnull,
                double weight_tolerance = 1e-12);

  /// p0 = 1 model with the given null.
  static TwoGroupModel pure_null(GaussianComponent null = kStandardNormal);

  double p0() const noexcept { return p0_; }
  const GaussianComponent& null() const noexcept { return null_; }
  const std::vector<WeightedComponent>& nonnull() const noexcept { return nonnull_; }

  double min_mean() const noexcept;
  double max_mean() const noexcept;
  double max_sd() const noexcept;

  double log_null_density(double z) const noexcept;     // log(p0 f0(z))
  double log_nonnull_density(double z) const noexcept;  // log(sum_j w_j phi_j(z)); -inf if none
  double log_marginal_density(double z) const noexcept;

 private:
  double p0_;
  GaussianComponent null_;
  std::vector<WeightedComponent> nonnull_;
};

struct ModelPoint {
  double z = 0.0;
  double f = 0.0;
  double f0_scaled = 0.0;  // p0 * f0(z)
  double lfdr = 1.0;
  double pvalue = 1.0;
};

double marginal_density(const TwoGroupModel& m, double z) noexcept;
/// p0 f0(z) / f(z), clamped to [0, 1].
double lfdr(const TwoGroupModel& m, double z) noexcept;
ModelPoint evaluate(const TwoGroupModel& m, double z) noexcept;

std::vector<double> lfdr_values(const TwoGroupModel& m, std::span<const double> z);

}  // namespace lfdr
