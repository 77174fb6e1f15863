#include "lfdrlab/figures.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <ostream>

#include "lfdrlab/error.hpp"
#include "lfdrlab/simulation.hpp"

namespace lfdr {

namespace {

constexpr double kFigureAlpha = 0.10;
constexpr double kNonnullTotal = 0.2;

// n evenly spaced values lo, lo + step, ...; snapped to 6 decimals so that
// grid values print as the decimals they stand for.
std::vector<double> steps(double lo, double step, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::round((lo + step * static_cast<double>(i)) * 1e6) / 1e6;
  }
  return out;
}

std::vector<double> p1_grid() { return steps(0.01, 0.01, 19); }

std::size_t top_nonnull(const std::vector<double>& score, const std::vector<bool>& nonnull,
                        std::size_t top_n) {
  std::vector<std::size_t> order(score.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
  std::size_t hits = 0;
  for (std::size_t i = 0; i < std::min(top_n, order.size()); ++i) hits += nonnull[order[i]];
  return hits;
}

}  // namespace

char to_char(Figure1Panel p) noexcept { return static_cast<char>('a' + static_cast<int>(p)); }

Figure1Panel parse_panel(char c) {
  switch (std::tolower(static_cast<unsigned char>(c))) {
    case 'a': return Figure1Panel::A;
    case 'b': return Figure1Panel::B;
    case 'c': return Figure1Panel::C;
    case 'd': return Figure1Panel::D;
  }
  throw Error(ErrorCode::InvalidArgument, std::string("unknown figure 1 panel '") + c + "'");
}

TwoGroupModel mixture_model(double p1, double mu1, double p2, double mu2) {
  return TwoGroupModel(1.0 - kNonnullTotal, kStandardNormal,
                       {{p1, {mu1, 1.0}}, {p2, {mu2, 1.0}}}, 1e-9);
}

std::vector<double> figure1_grid(Figure1Panel panel) {
  switch (panel) {
    case Figure1Panel::A:
    case Figure1Panel::B: return p1_grid();
    case Figure1Panel::C: return steps(1.0, 0.25, 21);
    case Figure1Panel::D: return steps(0.02, 0.02, 15);
  }
  return {};
}

SweepPoint figure1_point(Figure1Panel panel, double v) {
  switch (panel) {
    case Figure1Panel::A: return {mixture_model(v, -3.0, kNonnullTotal - v, 3.0), kFigureAlpha};
    case Figure1Panel::B: return {mixture_model(v, -3.0, kNonnullTotal - v, 6.0), kFigureAlpha};
    case Figure1Panel::C: return {mixture_model(0.18, -3.0, 0.02, v), kFigureAlpha};
    case Figure1Panel::D: return {mixture_model(0.02, -3.0, 0.18, 1.0), v};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown figure 1 panel");
}

std::vector<SweepRow> figure1_data(Figure1Panel panel) {
  const auto grid = figure1_grid(panel);
  return oracle_sweep([panel](double v) { return figure1_point(panel, v); }, grid);
}

void write_figure1_csv(std::ostream& out, Figure1Panel panel, const std::vector<SweepRow>& rows) {
  out << "panel,sweep,mfnr_pvalue,mfnr_lfdr\n";
  for (const auto& r : rows) {
    out << to_char(panel) << ',' << format_full(r.sweep) << ','
        << (r.mfnr_pvalue ? format_full(*r.mfnr_pvalue) : "") << ','
        << (r.mfnr_lfdr ? format_full(*r.mfnr_lfdr) : "") << '\n';
  }
}

TwoGroupModel figure2_model(double p1) {
  return mixture_model(p1, -3.0, kNonnullTotal - p1, 4.0);
}

Figure2Data figure2_data() {
  Figure2Data data;
  data.alpha = kFigureAlpha;
  data.p1 = 0.15;
  const auto grid = p1_grid();
  data.curve = oracle_sweep(
      [](double p1) { return SweepPoint{figure2_model(p1), kFigureAlpha}; }, grid);

  const TwoGroupModel model = figure2_model(data.p1);
  data.pvalue_rule = oracle_pvalue_rule(model, data.alpha);
  data.lfdr_rule = oracle_lfdr_rule(model, data.alpha);
  for (double z : {-2.0, 3.0}) {
    const ModelPoint pt = evaluate(model, z);
    data.probes.push_back({z, pt.pvalue, pt.lfdr, data.pvalue_rule.region.contains(z),
                           data.lfdr_rule.region.contains(z)});
  }
  return data;
}

void write_figure2_curve_csv(std::ostream& out, const Figure2Data& data) {
  out << "p1,mfnr_pvalue,mfnr_lfdr\n";
  for (const auto& r : data.curve) {
    out << format_full(r.sweep) << ',' << (r.mfnr_pvalue ? format_full(*r.mfnr_pvalue) : "")
        << ',' << (r.mfnr_lfdr ? format_full(*r.mfnr_lfdr) : "") << '\n';
  }
}

void write_figure2_regions_csv(std::ostream& out, const Figure2Data& data) {
  out << "rule,threshold,lo,hi,mfdr,mfnr\n";
  for (const OracleRule* rule : {&data.pvalue_rule, &data.lfdr_rule}) {
    for (const auto& iv : rule->region.intervals()) {
      out << to_string(rule->kind) << ',' << format_full(rule->threshold) << ','
          << format_full(iv.lo) << ',' << format_full(iv.hi) << ',' << format_full(rule->mfdr)
          << ',' << format_full(rule->mfnr) << '\n';
    }
  }
}

void write_figure2_probes_csv(std::ostream& out, const Figure2Data& data) {
  out << "z,pvalue,lfdr,reject_pvalue_oracle,reject_lfdr_oracle\n";
  for (const auto& p : data.probes) {
    out << format_full(p.z) << ',' << format_full(p.pvalue) << ',' << format_full(p.lfdr) << ','
        << (p.pvalue_oracle_rejects ? "true" : "false") << ','
        << (p.lfdr_oracle_rejects ? "true" : "false") << '\n';
  }
}

TwoGroupModel concentrated_model() {
  return TwoGroupModel(0.9, kStandardNormal, {{0.1, {1.5, 0.1}}});
}

ConcentratedReport concentrated_alternative_demo(const TwoGroupModel& model, std::size_t m,
                                                 std::size_t top_n, std::uint64_t seed) {
  if (top_n == 0 || top_n > m) {
    throw Error(ErrorCode::InvalidArgument, "top_n must lie in [1, m]");
  }
  const Sample s = sample_model(model, m, seed);
  std::vector<double> pvalues(m);
  for (std::size_t i = 0; i < m; ++i) pvalues[i] = two_sided_pvalue(s.z[i], model.null());
  const std::vector<double> lfdrs = lfdr_values(model, s.z);

  ConcentratedReport rep;
  rep.m = m;
  rep.top_n = top_n;
  const double n = static_cast<double>(top_n);
  rep.capture_smallest_pvalues = static_cast<double>(top_nonnull(pvalues, s.nonnull, top_n)) / n;
  rep.capture_smallest_lfdr = static_cast<double>(top_nonnull(lfdrs, s.nonnull, top_n)) / n;
  rep.lfdr_at_center = lfdr(model, 1.5);
  rep.lfdr_at_tail = lfdr(model, 4.0);
  return rep;
}

void write_concentrated_csv(std::ostream& out, const ConcentratedReport& report) {
  out << "selection,top_n,nonnull_fraction\n";
  out << "smallest_pvalue," << report.top_n << ',' << format_full(report.capture_smallest_pvalues)
      << '\n';
  out << "smallest_lfdr," << report.top_n << ',' << format_full(report.capture_smallest_lfdr)
      << '\n';
}

}  // namespace lfdr
