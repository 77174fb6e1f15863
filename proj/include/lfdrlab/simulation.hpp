#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lfdrlab/model.hpp"

namespace lfdr {

struct Sample {
  std::vector<double> z;
  std::vector<bool> nonnull;
};

/// Independent draws: each hypothesis picks a component with probabilities
/// (p0, w_1, ...) and then draws its z from that component. Per hypothesis
/// the stream consumes one uniform (label) followed by one normal.
Sample sample_model(const TwoGroupModel& model, std::size_t m, std::uint64_t seed);

/// Equicorrelated draws z_i = mean_i + sd_i (sqrt(1 - rho) e_i + sqrt(rho) W)
/// with one shared W per call. Labels and e_i follow sample_model's stream
/// order and W is drawn last, so rho = 0 reproduces sample_model exactly.
Sample sample_correlated(const TwoGroupModel& model, std::size_t m, double rho,
                         std::uint64_t seed);

enum class SimProcedure { BH, AdaptiveBH, LfdrOraclePlugin, LfdrEstimated };

const char* to_string(SimProcedure p) noexcept;
/// Accepts bh, adaptive_bh, lfdr_oracle_plugin, lfdr_estimated.
SimProcedure parse_sim_procedure(const std::string& name);

struct SimConfig {
  TwoGroupModel model = TwoGroupModel::pure_null();
  std::size_t m = 1000;
  std::size_t reps = 100;
  double alpha = 0.1;
  std::uint64_t seed = 1;
  double rho = 0.0;
  std::vector<SimProcedure> procedures = {SimProcedure::BH};

  /// Throws Error(InvalidArgument) on m = 0, reps = 0, rho outside [0, 1),
  /// alpha outside (0, 1) or an empty procedure list.
  void validate() const;
};

struct ProcedureSummary {
  SimProcedure procedure = SimProcedure::BH;
  double mfdr = 0.0;  // mean fdp
  double mfdr_se = 0.0;
  double mfnr = 0.0;  // mean fnp
  double mfnr_se = 0.0;
  double mean_rejections = 0.0;
  double mean_false_discoveries = 0.0;  // mean N10
};

struct SimResult {
  std::vector<ProcedureSummary> procedures;  // config order
  std::vector<double> null_z_means;          // per replication, NaN if no nulls
};

/// Runs `reps` independent replications (possibly concurrently). Replication
/// r uses replication_seed(seed, r); aggregation runs in replication order so
/// the result is identical for any thread count. The first failing
/// replication (lowest index) aborts the run with its error.
SimResult run_replicated(const SimConfig& config);

/// Shortest round-trip decimal form of a double.
std::string format_full(double v);

/// Header: procedure,mfdr,mfdr_se,mfnr,mfnr_se,mean_rejections
void write_replication_csv(std::ostream& out, const SimResult& result);

}  // namespace lfdr
