#include "lfdrlab/simulation.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "lfdrlab/error.hpp"
#include "lfdrlab/estimation.hpp"
#include "lfdrlab/normal.hpp"
#include "lfdrlab/parallel.hpp"
#include "lfdrlab/procedures.hpp"
#include "lfdrlab/rng.hpp"

namespace lfdr {

namespace {

struct Draw {
  std::vector<double> z;  // before the shared factor
  std::vector<bool> nonnull;
  std::vector<std::size_t> component;  // 0 = null, j = nonnull j-1
};

Draw draw_independent(const TwoGroupModel& model, std::size_t m, Rng& rng) {
  const auto& comps = model.nonnull();
  Draw d;
  d.z.resize(m);
  d.nonnull.resize(m);
  d.component.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = rng.uniform();
    std::size_t which = 0;
    double cum = model.p0();
    if (u >= cum) {
      which = comps.size();  // falls through to the last one on rounding
      for (std::size_t j = 0; j < comps.size(); ++j) {
        cum += comps[j].weight;
        if (u < cum) {
          which = j + 1;
          break;
        }
      }
    }
    d.component[i] = which;
    d.nonnull[i] = which != 0;
    d.z[i] = rng.normal();
  }
  return d;
}

const GaussianComponent& component_of(const TwoGroupModel& model, std::size_t which) {
  return which == 0 ? model.null() : model.nonnull()[which - 1].component;
}

struct ReplicationOutcome {
  std::vector<ErrorProportions> rates;
  std::vector<std::size_t> rejections;
  std::vector<std::size_t> false_discoveries;
  double null_z_mean = std::numeric_limits<double>::quiet_NaN();
};

DecisionTable apply(SimProcedure proc, const TwoGroupModel& model, const Sample& s,
                    const std::vector<double>& pvalues, double alpha) {
  switch (proc) {
    case SimProcedure::BH:
      return bh_stepup(pvalues, alpha);
    case SimProcedure::AdaptiveBH: {
      const double p0 = std::max(estimate_p0_tail(pvalues), std::numeric_limits<double>::min());
      return adaptive_bh(pvalues, alpha, p0);
    }
    case SimProcedure::LfdrOraclePlugin:
      return lfdr_stepup(lfdr_values(model, s.z), alpha);
    case SimProcedure::LfdrEstimated: {
      const NullEstimate null_est = estimate_null_ecf(s.z);
      const MarginalDensityEstimate marginal = estimate_marginal_kde(s.z);
      return lfdr_stepup(estimated_lfdr_values(s.z, null_est, marginal), alpha);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown procedure");
}

}  // namespace

Sample sample_model(const TwoGroupModel& model, std::size_t m, std::uint64_t seed) {
  return sample_correlated(model, m, 0.0, seed);
}

Sample sample_correlated(const TwoGroupModel& model, std::size_t m, double rho,
                         std::uint64_t seed) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "rho must lie in [0, 1)");
  }
  Rng rng(seed);
  Draw d = draw_independent(model, m, rng);
  const double shared = rng.normal();
  const double a = std::sqrt(1.0 - rho);
  const double b = std::sqrt(rho);
  Sample s;
  s.z.resize(m);
  s.nonnull = std::move(d.nonnull);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = component_of(model, d.component[i]);
    s.z[i] = c.mean + c.sd * (a * d.z[i] + b * shared);
  }
  return s;
}

const char* to_string(SimProcedure p) noexcept {
  switch (p) {
    case SimProcedure::BH: return "bh";
    case SimProcedure::AdaptiveBH: return "adaptive_bh";
    case SimProcedure::LfdrOraclePlugin: return "lfdr_oracle_plugin";
    case SimProcedure::LfdrEstimated: return "lfdr_estimated";
  }
  return "unknown";
}

SimProcedure parse_sim_procedure(const std::string& name) {
  for (auto p : {SimProcedure::BH, SimProcedure::AdaptiveBH, SimProcedure::LfdrOraclePlugin,
                 SimProcedure::LfdrEstimated}) {
    if (name == to_string(p)) return p;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown procedure '" + name + "'");
}

void SimConfig::validate() const {
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "m must be at least 1");
  if (reps == 0) throw Error(ErrorCode::InvalidArgument, "reps must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(ErrorCode::InvalidArgument, "rho must lie in [0, 1)");
  if (procedures.empty()) throw Error(ErrorCode::InvalidArgument, "no procedures requested");
}

SimResult run_replicated(const SimConfig& config) {
  config.validate();
  const std::size_t np = config.procedures.size();
  std::vector<ReplicationOutcome> outcomes(config.reps);

  parallel_for(config.reps, [&](std::size_t r) {
    const Sample s = sample_correlated(config.model, config.m, config.rho,
                                       replication_seed(config.seed, r));
    std::vector<double> pvalues(s.z.size());
    for (std::size_t i = 0; i < s.z.size(); ++i) {
      pvalues[i] = two_sided_pvalue(s.z[i], config.model.null());
    }
    ReplicationOutcome& out = outcomes[r];
    for (SimProcedure proc : config.procedures) {
      const DecisionTable table = apply(proc, config.model, s, pvalues, config.alpha);
      const ConfusionCounts c = confusion(table, s.nonnull);
      out.rates.push_back(fdp_fnp(c));
      out.rejections.push_back(c.r);
      out.false_discoveries.push_back(c.n10);
    }
    double sum = 0.0;
    std::size_t nulls = 0;
    for (std::size_t i = 0; i < s.z.size(); ++i) {
      if (!s.nonnull[i]) {
        sum += s.z[i];
        ++nulls;
      }
    }
    if (nulls > 0) out.null_z_mean = sum / static_cast<double>(nulls);
  });

  SimResult result;
  const double n = static_cast<double>(config.reps);
  for (std::size_t p = 0; p < np; ++p) {
    ProcedureSummary sum;
    sum.procedure = config.procedures[p];
    double fdp = 0.0, fdp2 = 0.0, fnp = 0.0, fnp2 = 0.0, rej = 0.0, fd = 0.0;
    for (const auto& o : outcomes) {
      fdp += o.rates[p].fdp;
      fdp2 += o.rates[p].fdp * o.rates[p].fdp;
      fnp += o.rates[p].fnp;
      fnp2 += o.rates[p].fnp * o.rates[p].fnp;
      rej += static_cast<double>(o.rejections[p]);
      fd += static_cast<double>(o.false_discoveries[p]);
    }
    sum.mfdr = fdp / n;
    sum.mfnr = fnp / n;
    sum.mean_rejections = rej / n;
    sum.mean_false_discoveries = fd / n;
    if (config.reps > 1) {
      const double var_fdp = std::max(0.0, (fdp2 - n * sum.mfdr * sum.mfdr) / (n - 1.0));
      const double var_fnp = std::max(0.0, (fnp2 - n * sum.mfnr * sum.mfnr) / (n - 1.0));
      sum.mfdr_se = std::sqrt(var_fdp / n);
      sum.mfnr_se = std::sqrt(var_fnp / n);
    }
    result.procedures.push_back(sum);
  }
  result.null_z_means.reserve(config.reps);
  for (const auto& o : outcomes) result.null_z_means.push_back(o.null_z_mean);
  return result;
}

std::string format_full(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_replication_csv(std::ostream& out, const SimResult& result) {
  out << "procedure,mfdr,mfdr_se,mfnr,mfnr_se,mean_rejections\n";
  for (const auto& p : result.procedures) {
    out << to_string(p.procedure) << ',' << format_full(p.mfdr) << ',' << format_full(p.mfdr_se)
        << ',' << format_full(p.mfnr) << ',' << format_full(p.mfnr_se) << ','
        << format_full(p.mean_rejections) << '\n';
  }
}

}  // namespace lfdr
