#include "lfdrlab/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "lfdrlab/error.hpp"

namespace lfdr {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
}

// Indices ordered by (value, original index).
std::vector<std::size_t> stable_order(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  return order;
}

DecisionTable make_table(std::size_t m, double alpha, Procedure proc) {
  DecisionTable t;
  t.alpha = alpha;
  t.procedure = proc;
  t.rows.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    t.rows[i].index = i;
    t.rows[i].z = std::numeric_limits<double>::quiet_NaN();
  }
  return t;
}

void reject_prefix(DecisionTable& t, const std::vector<std::size_t>& order, std::size_t k) {
  for (std::size_t i = 0; i < k; ++i) t.rows[order[i]].reject = true;
  t.k = k;
}

DecisionTable stepup(std::span<const double> pvalues, double level, double alpha,
                     Procedure proc) {
  if (pvalues.empty()) throw Error(ErrorCode::EmptyInput, "no p-values supplied");
  for (double p : pvalues) {
    if (!(p > 0.0 && p <= 1.0)) {
      std::ostringstream msg;
      msg << "p-value " << p << " outside (0, 1]";
      throw Error(ErrorCode::InvalidPValue, msg.str());
    }
  }
  const std::size_t m = pvalues.size();
  DecisionTable t = make_table(m, alpha, proc);
  for (std::size_t i = 0; i < m; ++i) t.rows[i].pvalue = pvalues[i];

  const auto order = stable_order(pvalues);
  std::size_t k = 0;
  for (std::size_t i = m; i > 0; --i) {
    if (pvalues[order[i - 1]] <= static_cast<double>(i) * level / static_cast<double>(m)) {
      k = i;
      break;
    }
  }
  reject_prefix(t, order, k);
  return t;
}

}  // namespace

const char* to_string(Procedure p) noexcept {
  switch (p) {
    case Procedure::BH: return "bh";
    case Procedure::AdaptiveBH: return "adaptive_bh";
    case Procedure::LfdrStepUp: return "lfdr";
  }
  return "unknown";
}

std::vector<bool> DecisionTable::rejections() const {
  std::vector<bool> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = rows[i].reject;
  return out;
}

DecisionTable bh_stepup(std::span<const double> pvalues, double alpha) {
  check_alpha(alpha);
  return stepup(pvalues, alpha, alpha, Procedure::BH);
}

DecisionTable adaptive_bh(std::span<const double> pvalues, double alpha, double p0_hat) {
  check_alpha(alpha);
  if (!(p0_hat > 0.0 && p0_hat <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "p0_hat must lie in (0, 1]");
  }
  const double level = std::min(alpha / p0_hat, 1.0 - 1e-12);
  return stepup(pvalues, level, alpha, Procedure::AdaptiveBH);
}

DecisionTable lfdr_stepup(std::span<const double> lfdr_values, double alpha) {
  check_alpha(alpha);
  if (lfdr_values.empty()) throw Error(ErrorCode::EmptyInput, "no Lfdr values supplied");
  for (double v : lfdr_values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      std::ostringstream msg;
      msg << "Lfdr value " << v << " outside [0, 1]";
      throw Error(ErrorCode::InvalidLfdr, msg.str());
    }
  }
  const std::size_t m = lfdr_values.size();
  DecisionTable t = make_table(m, alpha, Procedure::LfdrStepUp);
  for (std::size_t i = 0; i < m; ++i) {
    t.rows[i].pvalue = 1.0;
    t.rows[i].lfdr_hat = lfdr_values[i];
  }

  const auto order = stable_order(lfdr_values);
  std::size_t k = 0;
  double running = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    running += lfdr_values[order[i]];
    if (running / static_cast<double>(i + 1) <= alpha) k = i + 1;
  }
  reject_prefix(t, order, k);
  return t;
}

ConfusionCounts confusion(const std::vector<bool>& reject, const std::vector<bool>& nonnull) {
  if (reject.size() != nonnull.size()) {
    throw Error(ErrorCode::LengthMismatch, "decision and truth vectors differ in length");
  }
  ConfusionCounts c;
  c.m = reject.size();
  for (std::size_t i = 0; i < c.m; ++i) {
    if (nonnull[i]) {
      (reject[i] ? c.n11 : c.n01) += 1;
    } else {
      (reject[i] ? c.n10 : c.n00) += 1;
    }
  }
  c.r = c.n10 + c.n11;
  c.s = c.n00 + c.n01;
  return c;
}

ConfusionCounts confusion(const DecisionTable& decisions, const std::vector<bool>& nonnull) {
  if (decisions.rows.size() != nonnull.size()) {
    throw Error(ErrorCode::LengthMismatch, "decision and truth vectors differ in length");
  }
  ConfusionCounts c;
  c.m = decisions.rows.size();
  for (std::size_t i = 0; i < c.m; ++i) {
    const bool rej = decisions.rows[i].reject;
    if (nonnull[i]) {
      (rej ? c.n11 : c.n01) += 1;
    } else {
      (rej ? c.n10 : c.n00) += 1;
    }
  }
  c.r = c.n10 + c.n11;
  c.s = c.n00 + c.n01;
  return c;
}

ErrorProportions fdp_fnp(const ConfusionCounts& c) noexcept {
  ErrorProportions out;
  if (c.r > 0) out.fdp = static_cast<double>(c.n10) / static_cast<double>(c.r);
  if (c.s > 0) out.fnp = static_cast<double>(c.n01) / static_cast<double>(c.s);
  return out;
}

}  // namespace lfdr
