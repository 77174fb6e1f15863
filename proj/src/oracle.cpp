#include "lfdrlab/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "lfdrlab/error.hpp"
#include "lfdrlab/parallel.hpp"
#include "lfdrlab/quadrature.hpp"

namespace lfdr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadRelTol = 1e-10;
constexpr double kTopThreshold = 1.0 - 1e-12;
constexpr std::size_t kPValueGridSize = 10000;
constexpr double kPValueGridMin = 1e-12;
constexpr double kLfdrGridStep = 0.01;
constexpr double kBoundaryTol = 1e-9;
constexpr double kThresholdTol = 1e-9;

void check_unit_open(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) {
    std::ostringstream msg;
    msg << what << " must lie in (0, 1), got " << v;
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

// Integrals of p0 f0 and of the nonnull part over the region, clipped to the
// model's integration domain.
std::array<double, 2> region_mass(const TwoGroupModel& m, const RejectionRegion& r) {
  const Interval dom = integration_domain(m);
  std::array<double, 2> mass{0.0, 0.0};
  auto integrand = [&m](double z) {
    return std::array<double, 2>{std::exp(m.log_null_density(z)),
                                 std::exp(m.log_nonnull_density(z))};
  };
  for (const auto& iv : r.intervals()) {
    const double lo = std::max(iv.lo, dom.lo);
    const double hi = std::min(iv.hi, dom.hi);
    if (!(hi > lo)) continue;
    const auto q = integrate<2>(integrand, lo, hi, kQuadRelTol);
    mass[0] += q.value[0];
    mass[1] += q.value[1];
  }
  return mass;
}

// Lfdr tabulated on the scan grid; region boundaries are bracketed from it
// and refined against the exact Lfdr.
class LfdrProfile {
 public:
  explicit LfdrProfile(const TwoGroupModel& m) : model_(m) {
    const Interval dom = integration_domain(m);
    const auto steps = static_cast<std::size_t>(std::ceil((dom.hi - dom.lo) / kLfdrGridStep));
    const double h = (dom.hi - dom.lo) / static_cast<double>(steps);
    z_.resize(steps + 1);
    values_.resize(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
      z_[i] = (i == steps) ? dom.hi : dom.lo + h * static_cast<double>(i);
      values_[i] = lfdr(m, z_[i]);
    }
  }

  RejectionRegion region(double lambda) const {
    std::vector<Interval> out;
    auto inside = [&](double z) { return lfdr(model_, z) <= lambda; };
    bool in = values_.front() <= lambda;
    double start = -kInf;
    for (std::size_t i = 1; i < z_.size(); ++i) {
      const bool next = values_[i] <= lambda;
      if (next == in) continue;
      // Bisect for the switch point; `a` keeps the state of z_[i-1].
      double a = z_[i - 1];
      double b = z_[i];
      while (b - a > kBoundaryTol) {
        const double mid = 0.5 * (a + b);
        if (inside(mid) == in) {
          a = mid;
        } else {
          b = mid;
        }
      }
      if (in) {
        out.push_back({start, a});
      } else {
        start = b;
      }
      in = next;
    }
    if (in) out.push_back({start, kInf});
    return RejectionRegion(std::move(out));
  }

 private:
  const TwoGroupModel& model_;
  std::vector<double> z_;
  std::vector<double> values_;
};

double mfdr_or_zero(const TwoGroupModel& m, const RejectionRegion& r) {
  return r.empty() ? 0.0 : mfdr_of_region(m, r);
}

}  // namespace

RejectionRegion::RejectionRegion(std::vector<Interval> intervals)
    : intervals_(std::move(intervals)) {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& iv = intervals_[i];
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || !(iv.lo < iv.hi)) {
      throw Error(ErrorCode::InvalidArgument, "region interval needs lo < hi");
    }
    if (i > 0 && !(intervals_[i - 1].hi < iv.lo)) {
      throw Error(ErrorCode::InvalidArgument, "region intervals must be sorted and disjoint");
    }
  }
}

RejectionRegion RejectionRegion::whole_line() { return RejectionRegion({{-kInf, kInf}}); }

bool RejectionRegion::contains(double z) const noexcept {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [z](const Interval& iv) { return iv.lo <= z && z <= iv.hi; });
}

RejectionRegion RejectionRegion::complement() const {
  std::vector<Interval> out;
  double cursor = -kInf;
  for (const auto& iv : intervals_) {
    if (iv.lo > cursor) out.push_back({cursor, iv.lo});
    cursor = iv.hi;
  }
  if (cursor < kInf) out.push_back({cursor, kInf});
  return RejectionRegion(std::move(out));
}

bool RejectionRegion::symmetric_about(double center, double tol) const noexcept {
  const std::size_t n = intervals_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = intervals_[i];
    const auto& b = intervals_[n - 1 - i];
    auto close = [tol](double x, double y) {
      if (std::isinf(x) || std::isinf(y)) return x == y;
      return std::fabs(x - y) <= tol;
    };
    if (!close(a.lo - center, -(b.hi - center)) || !close(a.hi - center, -(b.lo - center))) {
      return false;
    }
  }
  return true;
}

Interval integration_domain(const TwoGroupModel& m) noexcept {
  const double pad = 12.0 * m.max_sd();
  return {m.min_mean() - pad, m.max_mean() + pad};
}

RejectionRegion region_from_pvalue_threshold(const GaussianComponent& null, double t) {
  null.validate();
  check_unit_open(t, "p-value threshold");
  // Upper quantile taken as -Phi^{-1}(t/2) to keep precision for tiny t.
  const double c = -std_normal_quantile(0.5 * t) * null.sd;
  if (!(c > 0.0)) return RejectionRegion::whole_line();
  return RejectionRegion({{-kInf, null.mean - c}, {null.mean + c, kInf}});
}

RejectionRegion region_from_lfdr_threshold(const TwoGroupModel& m, double lambda) {
  check_unit_open(lambda, "Lfdr threshold");
  return LfdrProfile(m).region(lambda);
}

double mfdr_of_region(const TwoGroupModel& m, const RejectionRegion& r) {
  if (r.empty()) throw Error(ErrorCode::EmptyRegion, "mFDR is undefined for an empty region");
  const auto mass = region_mass(m, r);
  const double total = mass[0] + mass[1];
  if (!(total > 0.0)) {
    throw Error(ErrorCode::EmptyRegion, "region carries no probability mass");
  }
  return mass[0] / total;
}

double mfnr_of_region(const TwoGroupModel& m, const RejectionRegion& r) {
  const RejectionRegion accept = r.complement();
  if (accept.empty()) {
    throw Error(ErrorCode::FullRegion, "mFNR is undefined when everything is rejected");
  }
  const auto mass = region_mass(m, accept);
  const double total = mass[0] + mass[1];
  if (!(total > 0.0)) {
    throw Error(ErrorCode::FullRegion, "acceptance region carries no probability mass");
  }
  return mass[1] / total;
}

const char* to_string(RuleKind kind) noexcept {
  return kind == RuleKind::PValue ? "pvalue" : "lfdr";
}

OracleRule oracle_pvalue_rule(const TwoGroupModel& m, double alpha) {
  check_unit_open(alpha, "alpha");
  auto mfdr_at = [&m](double t) {
    return mfdr_or_zero(m, region_from_pvalue_threshold(m.null(), t));
  };

  const double log_lo = std::log(kPValueGridMin);
  const double log_hi = std::log(kTopThreshold);
  auto grid = [&](std::size_t k) {
    if (k + 1 == kPValueGridSize) return kTopThreshold;
    return std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(k) /
                                 static_cast<double>(kPValueGridSize - 1));
  };

  std::size_t k = kPValueGridSize;
  while (k-- > 0) {
    if (mfdr_at(grid(k)) <= alpha) break;
    if (k == 0) {
      std::ostringstream msg;
      msg << "no p-value cutoff in [" << kPValueGridMin << ", 1) reaches mFDR <= " << alpha;
      throw Error(ErrorCode::Infeasible, msg.str());
    }
  }

  double t = grid(k);
  if (k + 1 < kPValueGridSize) {
    double lo = t;
    double hi = grid(k + 1);
    while (hi - lo > kThresholdTol * hi) {
      const double mid = 0.5 * (lo + hi);
      if (mfdr_at(mid) <= alpha) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    t = lo;
  }

  OracleRule rule;
  rule.kind = RuleKind::PValue;
  rule.threshold = t;
  rule.region = region_from_pvalue_threshold(m.null(), t);
  rule.mfdr = mfdr_or_zero(m, rule.region);
  rule.mfnr = mfnr_of_region(m, rule.region);
  return rule;
}

OracleRule oracle_lfdr_rule(const TwoGroupModel& m, double alpha) {
  check_unit_open(alpha, "alpha");
  const LfdrProfile profile(m);

  double lambda = kTopThreshold;
  RejectionRegion region = profile.region(lambda);
  if (!region.empty() && mfdr_of_region(m, region) > alpha) {
    // mFDR(lambda) is nondecreasing; an empty region counts as feasible.
    double lo = 0.0;
    double hi = kTopThreshold;
    while (hi - lo > kThresholdTol) {
      const double mid = 0.5 * (lo + hi);
      const RejectionRegion r = profile.region(mid);
      if (r.empty() || mfdr_of_region(m, r) <= alpha) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    lambda = lo;
    region = profile.region(lambda);
    if (region.empty()) {
      std::ostringstream msg;
      msg << "every nonempty Lfdr region exceeds mFDR " << alpha;
      throw Error(ErrorCode::Infeasible, msg.str());
    }
  }

  OracleRule rule;
  rule.kind = RuleKind::Lfdr;
  rule.threshold = lambda;
  rule.region = std::move(region);
  rule.mfdr = mfdr_or_zero(m, rule.region);
  rule.mfnr = mfnr_of_region(m, rule.region);
  return rule;
}

std::vector<SweepRow> oracle_sweep(const std::function<SweepPoint(double)>& family,
                                   std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "sweep grid is empty");
  std::vector<SweepRow> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.sweep = grid[i];
    try {
      const SweepPoint point = family(grid[i]);
      try {
        row.mfnr_pvalue = oracle_pvalue_rule(point.model, point.alpha).mfnr;
      } catch (const Error& e) {
        row.error = std::string("pvalue: ") + e.what();
      }
      try {
        row.mfnr_lfdr = oracle_lfdr_rule(point.model, point.alpha).mfnr;
      } catch (const Error& e) {
        if (!row.error.empty()) row.error += "; ";
        row.error += std::string("lfdr: ") + e.what();
      }
    } catch (const Error& e) {
      row.error = e.what();
    }
  });
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.sweep < b.sweep; });
  return rows;
}

}  // namespace lfdr
