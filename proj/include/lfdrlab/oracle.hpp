#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lfdrlab/model.hpp"

namespace lfdr {

struct Interval {
  double lo;  // may be -inf
  double hi;  // may be +inf
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of closed z-intervals, sorted and pairwise disjoint.
class RejectionRegion {
 public:
  RejectionRegion() = default;
  /// Throws Error(InvalidArgument) unless lo < hi for each interval and the
  /// intervals are sorted and disjoint.
  explicit RejectionRegion(std::vector<Interval> intervals);

  static RejectionRegion whole_line();

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  bool empty() const noexcept { return intervals_.empty(); }
  bool contains(double z) const noexcept;
  /// Closure of the set complement.
  RejectionRegion complement() const;
  bool symmetric_about(double center, double tol) const noexcept;

 private:
  std::vector<Interval> intervals_;
};

/// [min mean - 12 max sd, max mean + 12 max sd]; mass outside is ignored.
Interval integration_domain(const TwoGroupModel& m) noexcept;

RejectionRegion region_from_pvalue_threshold(const GaussianComponent& null, double t);
RejectionRegion region_from_lfdr_threshold(const TwoGroupModel& m, double lambda);

/// E(N10)/E(R) for the region: integral of p0 f0 over integral of f.
/// Throws Error(EmptyRegion) when the region carries no probability mass.
double mfdr_of_region(const TwoGroupModel& m, const RejectionRegion& r);
/// E(N01)/E(S) over the complement. Throws Error(FullRegion) when the
/// complement carries no probability mass.
double mfnr_of_region(const TwoGroupModel& m, const RejectionRegion& r);

enum class RuleKind { PValue, Lfdr };

const char* to_string(RuleKind kind) noexcept;

struct OracleRule {
  RuleKind kind = RuleKind::PValue;
  double threshold = 0.0;  // p-value cutoff or Lfdr cutoff
  RejectionRegion region;
  double mfdr = 0.0;  // 0 when the region is empty (nothing rejected)
  double mfnr = 0.0;
};

/// Largest p-value cutoff whose symmetric region has mFDR <= alpha. The
/// search scans a 10^4-point log-spaced grid on [1e-12, 1) from the top and
/// refines the first feasible bracket by bisection; mFDR(t) is not assumed
/// monotone. Throws Error(Infeasible) when no grid cutoff is feasible.
OracleRule oracle_pvalue_rule(const TwoGroupModel& m, double alpha);

/// Largest Lfdr cutoff (bisection to 1e-9) whose region has mFDR <= alpha.
/// A model whose Lfdr never drops below 1 yields an empty region. Throws
/// Error(Infeasible) when every nonempty region exceeds alpha.
OracleRule oracle_lfdr_rule(const TwoGroupModel& m, double alpha);

struct SweepPoint {
  TwoGroupModel model;
  double alpha;
};

struct SweepRow {
  double sweep = 0.0;
  std::optional<double> mfnr_pvalue;
  std::optional<double> mfnr_lfdr;
  std::string error;  // non-empty when either rule failed at this point

  bool ok() const noexcept { return mfnr_pvalue && mfnr_lfdr; }
};

/// Evaluates both oracle rules at every grid value. Rows are sorted by
/// sweep value; failures are recorded on the row rather than dropped.
std::vector<SweepRow> oracle_sweep(const std::function<SweepPoint(double)>& family,
                                   std::span<const double> grid);

}  // namespace lfdr
