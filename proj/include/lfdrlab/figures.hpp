#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "lfdrlab/model.hpp"
#include "lfdrlab/oracle.hpp"

namespace lfdr {

enum class Figure1Panel { A, B, C, D };

char to_char(Figure1Panel p) noexcept;
/// Accepts 'a'..'d' (either case); throws Error(InvalidArgument) otherwise.
Figure1Panel parse_panel(char c);

/// Three-component model p0 = 0.8 with N(0,1) null and nonnulls
/// (p1, N(mu1, 1)), (p2, N(mu2, 1)).
TwoGroupModel mixture_model(double p1, double mu1, double p2, double mu2);

/// Panel settings:
///   a: alpha 0.10, mu = (-3, 3), p1 in 0.01..0.19 (step 0.01), p2 = 0.2 - p1
///   b: as (a) with mu2 = 6
///   c: alpha 0.10, p1 = 0.18, p2 = 0.02, mu1 = -3, mu2 in 1.0..6.0 (step 0.25)
///   d: mu = (-3, 1), p1 = 0.02, p2 = 0.18, alpha in 0.02..0.30 (step 0.02)
std::vector<double> figure1_grid(Figure1Panel panel);
SweepPoint figure1_point(Figure1Panel panel, double sweep_value);
std::vector<SweepRow> figure1_data(Figure1Panel panel);

/// Header: panel,sweep,mfnr_pvalue,mfnr_lfdr. Failed rows carry empty cells.
void write_figure1_csv(std::ostream& out, Figure1Panel panel, const std::vector<SweepRow>& rows);

/// mu1 = -3 carries p1, mu2 = 4 carries 0.2 - p1.
TwoGroupModel figure2_model(double p1);

struct ProbeReport {
  double z = 0.0;
  double pvalue = 1.0;
  double lfdr = 1.0;
  bool pvalue_oracle_rejects = false;
  bool lfdr_oracle_rejects = false;
};

struct Figure2Data {
  double alpha = 0.1;
  double p1 = 0.15;
  std::vector<SweepRow> curve;  // p1 in 0.01..0.19
  OracleRule pvalue_rule;
  OracleRule lfdr_rule;
  std::vector<ProbeReport> probes;  // z = -2 and z = 3
};

Figure2Data figure2_data();

/// Files: curve (p1,mfnr_pvalue,mfnr_lfdr), regions
/// (rule,threshold,lo,hi,mfdr,mfnr) and probes
/// (z,pvalue,lfdr,reject_pvalue_oracle,reject_lfdr_oracle).
void write_figure2_curve_csv(std::ostream& out, const Figure2Data& data);
void write_figure2_regions_csv(std::ostream& out, const Figure2Data& data);
void write_figure2_probes_csv(std::ostream& out, const Figure2Data& data);

/// p0 = 0.9 with a single concentrated nonnull N(1.5, 0.1^2).
TwoGroupModel concentrated_model();

struct ConcentratedReport {
  std::size_t m = 0;
  std::size_t top_n = 0;
  double capture_smallest_pvalues = 0.0;  // nonnull fraction among top_n smallest p
  double capture_smallest_lfdr = 0.0;     // nonnull fraction among top_n smallest Lfdr
  double lfdr_at_center = 1.0;            // exact Lfdr at z = 1.5
  double lfdr_at_tail = 1.0;              // exact Lfdr at z = 4
};

ConcentratedReport concentrated_alternative_demo(const TwoGroupModel& model = concentrated_model(),
                                                 std::size_t m = 10000, std::size_t top_n = 100,
                                                 std::uint64_t seed = 20080101);

/// Header: selection,top_n,nonnull_fraction
void write_concentrated_csv(std::ostream& out, const ConcentratedReport& report);

}  // namespace lfdr
