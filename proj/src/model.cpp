#include "lfdrlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lfdrlab/error.hpp"

namespace lfdr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) noexcept {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

TwoGroupModel::TwoGroupModel(double p0, GaussianComponent null,
                             std::vector<WeightedComponent> nonnull, double weight_tolerance)
    : p0_(p0), null_(null), nonnull_(std::move(nonnull)) {
  if (!(p0_ > 0.0 && p0_ <= 1.0)) {
    throw Error(ErrorCode::InvalidModel, "p0 must lie in (0, 1]");
  }
  try {
    null_.validate();
    for (const auto& c : nonnull_) c.component.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidModel, e.what());
  }
  double total = p0_;
  for (const auto& c : nonnull_) {
    if (!(c.weight >= 0.0) || c.weight > 1.0) {
      throw Error(ErrorCode::InvalidModel, "nonnull weights must lie in [0, 1]");
    }
    total += c.weight;
  }
  if (std::fabs(total - 1.0) > weight_tolerance) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "weights sum to " << total << ", expected 1";
    throw Error(ErrorCode::InvalidModel, msg.str());
  }
  if (nonnull_.empty() && p0_ != 1.0) {
    throw Error(ErrorCode::InvalidModel, "a model without nonnull components needs p0 = 1");
  }
}

TwoGroupModel TwoGroupModel::pure_null(GaussianComponent null) {
  return TwoGroupModel(1.0, null, {});
}

double TwoGroupModel::min_mean() const noexcept {
  double lo = null_.mean;
  for (const auto& c : nonnull_) lo = std::min(lo, c.component.mean);
  return lo;
}

double TwoGroupModel::max_mean() const noexcept {
  double hi = null_.mean;
  for (const auto& c : nonnull_) hi = std::max(hi, c.component.mean);
  return hi;
}

double TwoGroupModel::max_sd() const noexcept {
  double s = null_.sd;
  for (const auto& c : nonnull_) s = std::max(s, c.component.sd);
  return s;
}

double TwoGroupModel::log_null_density(double z) const noexcept {
  return std::log(p0_) + gaussian_log_pdf(z, null_);
}

double TwoGroupModel::log_nonnull_density(double z) const noexcept {
  double acc = kNegInf;
  for (const auto& c : nonnull_) {
    if (c.weight > 0.0) acc = log_add(acc, std::log(c.weight) + gaussian_log_pdf(z, c.component));
  }
  return acc;
}

double TwoGroupModel::log_marginal_density(double z) const noexcept {
  return log_add(log_null_density(z), log_nonnull_density(z));
}

double marginal_density(const TwoGroupModel& m, double z) noexcept {
  return std::exp(m.log_marginal_density(z));
}

double lfdr(const TwoGroupModel& m, double z) noexcept {
  const double value = std::exp(m.log_null_density(z) - m.log_marginal_density(z));
  return std::clamp(value, 0.0, 1.0);
}

ModelPoint evaluate(const TwoGroupModel& m, double z) noexcept {
  ModelPoint pt;
  pt.z = z;
  pt.f = marginal_density(m, z);
  pt.f0_scaled = std::exp(m.log_null_density(z));
  pt.lfdr = lfdr(m, z);
  pt.pvalue = two_sided_pvalue(z, m.null());
  return pt;
}

std::vector<double> lfdr_values(const TwoGroupModel& m, std::span<const double> z) {
  std::vector<double> out;
  out.reserve(z.size());
  for (double v : z) out.push_back(lfdr(m, v));
  return out;
}

}  // namespace lfdr
