#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace lfdr {

enum class Procedure { BH, AdaptiveBH, LfdrStepUp };

const char* to_string(Procedure p) noexcept;

struct Decision {
  std::size_t index = 0;
  double z = 0.0;  // NaN when the procedure was run on bare p-values or Lfdr values
  double pvalue = 1.0;
  std::optional<double> lfdr_hat;
  bool reject = false;
};

/// Per-hypothesis decisions in input order.
struct DecisionTable {
  std::vector<Decision> rows;
  double alpha = 0.0;
  Procedure procedure = Procedure::BH;
  std::size_t k = 0;  // number of rejections

  std::vector<bool> rejections() const;
};

/// Benjamini-Hochberg step-up: k = max{i : p(i) <= i alpha / m}.
DecisionTable bh_stepup(std::span<const double> pvalues, double alpha);

/// BH at level min(alpha / p0_hat, 1 - 1e-12).
DecisionTable adaptive_bh(std::span<const double> pvalues, double alpha, double p0_hat);

/// Adaptive Lfdr step-up: with Lfdr values sorted ascending,
/// k = max{i : (1/i) sum_{j<=i} Lfdr(j) <= alpha}; the k smallest are rejected.
DecisionTable lfdr_stepup(std::span<const double> lfdr_values, double alpha);

/// Outcome counts. Cell naming: first digit is truth (0 null,
/// 1 nonnull), second digit is the call (0 accepted, 1 rejected) as in
/// N10 = false discoveries.
struct ConfusionCounts {
  std::size_t n00 = 0;  // null, accepted
  std::size_t n01 = 0;  // nonnull, accepted (false nondiscovery)
  std::size_t n10 = 0;  // null, rejected (false discovery)
  std::size_t n11 = 0;  // nonnull, rejected
  std::size_t r = 0;
  std::size_t s = 0;
  std::size_t m = 0;
};

/// Throws Error(LengthMismatch) when the truth flags do not line up.
ConfusionCounts confusion(const DecisionTable& decisions, const std::vector<bool>& nonnull);
ConfusionCounts confusion(const std::vector<bool>& reject, const std::vector<bool>& nonnull);

struct ErrorProportions {
  double fdp = 0.0;
  double fnp = 0.0;
};

/// fdp = N10 / R (0 when R = 0); fnp = N01 / S (0 when S = 0).
ErrorProportions fdp_fnp(const ConfusionCounts& c) noexcept;

}  // namespace lfdr
