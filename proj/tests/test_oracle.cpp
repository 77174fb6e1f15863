#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lfdrlab/error.hpp"
#include "lfdrlab/oracle.hpp"
#include "lfdrlab/rng.hpp"
#include "oracles.hpp"

using namespace lfdr;
using doctest::Approx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TwoGroupModel mixture(double p1, double mu1, double p2, double mu2) {
  return TwoGroupModel(0.8, kStandardNormal, {{p1, {mu1, 1.0}}, {p2, {mu2, 1.0}}}, 1e-12);
}

// Closed-form mFDR through CDF differences (independent of the quadrature).
double mfdr_closed_form(const TwoGroupModel& m, const RejectionRegion& r) {
  std::vector<std::pair<double, double>> ivs;
  for (const auto& iv : r.intervals()) ivs.emplace_back(iv.lo, iv.hi);
  const double null = testing::component_mass({m.p0(), m.null().mean, m.null().sd}, ivs);
  double rest = 0;
  for (const auto& c : m.nonnull()) {
    rest += testing::component_mass({c.weight, c.component.mean, c.component.sd}, ivs);
  }
  return null / (null + rest);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an lfdr::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("region validation and set operations") {
  CHECK_THROWS_AS(RejectionRegion({{1.0, 1.0}}), Error);
  CHECK_THROWS_AS(RejectionRegion({{0.0, 2.0}, {1.0, 3.0}}), Error);
  const RejectionRegion r({{-kInf, -2.0}, {2.0, kInf}});
  CHECK(r.contains(-2.0));
  CHECK(r.contains(5.0));
  CHECK_FALSE(r.contains(0.0));
  const auto c = r.complement();
  REQUIRE(c.intervals().size() == 1);
  CHECK(c.intervals()[0] == Interval{-2.0, 2.0});
  CHECK(RejectionRegion().complement().intervals().size() == 1);
  CHECK(RejectionRegion::whole_line().complement().empty());
  CHECK(r.symmetric_about(0.0, 1e-12));
  CHECK_FALSE(RejectionRegion({{-kInf, -2.0}, {3.0, kInf}}).symmetric_about(0.0, 1e-6));
}

TEST_CASE("p-value regions") {
  const auto r = region_from_pvalue_threshold(kStandardNormal, 0.0455002638963584);
  REQUIRE(r.intervals().size() == 2);
  CHECK(r.intervals()[0].hi == Approx(-2.0).epsilon(1e-12));
  CHECK(r.intervals()[1].lo == Approx(2.0).epsilon(1e-12));

  const auto r05 = region_from_pvalue_threshold(kStandardNormal, 0.05);
  CHECK(r05.intervals()[1].lo == Approx(testing::normal_quantile_ref(0.975)).epsilon(1e-12));

  const auto wide = region_from_pvalue_threshold({1.0, 2.0}, 1.0 - 1e-12);
  CHECK(wide.intervals()[1].lo - 1.0 < 1e-10);
  CHECK(wide.symmetric_about(1.0, 1e-12));

  CHECK(code_of([] { region_from_pvalue_threshold(kStandardNormal, 0.0); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { region_from_pvalue_threshold(kStandardNormal, 1.0); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("Lfdr regions") {
  CHECK(region_from_lfdr_threshold(TwoGroupModel::pure_null(), 0.9).empty());

  const auto sym = mixture(0.1, -3, 0.1, 3);
  for (double lam : {0.05, 0.2, 0.4, 0.7}) {
    CHECK(region_from_lfdr_threshold(sym, lam).symmetric_about(0.0, 1e-8));
  }

  // Boundaries located independently by brentq on a 1e-3 grid.
  const auto fig2 = mixture(0.15, -3, 0.05, 4);
  const auto r = region_from_lfdr_threshold(fig2, 0.5025981828238979);
  REQUIRE(r.intervals().size() == 2);
  CHECK(r.intervals()[0].lo == -kInf);
  CHECK(r.intervals()[0].hi == Approx(-2.0545278676726944).epsilon(1e-8));
  CHECK(r.intervals()[1].lo == Approx(2.69054881004226).epsilon(1e-8));
  CHECK(r.intervals()[1].hi == kInf);
  for (const auto& iv : r.intervals()) {
    if (std::isfinite(iv.hi)) CHECK(lfdr::lfdr(fig2, iv.hi) == Approx(0.5025981828238979).epsilon(1e-7));
    if (std::isfinite(iv.lo)) CHECK(lfdr::lfdr(fig2, iv.lo) == Approx(0.5025981828238979).epsilon(1e-7));
  }
}

TEST_CASE("mFDR of regions") {
  const auto fig2 = mixture(0.15, -3, 0.05, 4);
  CHECK(mfdr_of_region(fig2, RejectionRegion::whole_line()) == Approx(0.8).epsilon(1e-12));

  const RejectionRegion tails({{-kInf, -2.0}, {2.0, kInf}});
  CHECK(mfdr_of_region(fig2, tails) == Approx(0.17213394254102363).epsilon(1e-9));
  CHECK(mfdr_of_region(fig2, tails) == Approx(mfdr_closed_form(fig2, tails)).epsilon(1e-9));

  // Shrinking the region to a point recovers the local rate.
  for (double z : {-2.0, 0.5, 3.0}) {
    const RejectionRegion tiny({{z - 5e-5, z + 5e-5}});
    CHECK(mfdr_of_region(fig2, tiny) == Approx(lfdr::lfdr(fig2, z)).epsilon(1e-3));
  }

  CHECK(code_of([&] { mfdr_of_region(fig2, RejectionRegion()); }) == ErrorCode::EmptyRegion);
  // Nonempty but outside the integration domain.
  CHECK(code_of([&] { mfdr_of_region(fig2, RejectionRegion({{100.0, 200.0}})); }) ==
        ErrorCode::EmptyRegion);
}

TEST_CASE("mFDR quadrature agrees with a Monte Carlo estimate") {
  const auto fig2 = mixture(0.15, -3, 0.05, 4);
  const RejectionRegion tails({{-kInf, -2.0}, {2.0, kInf}});
  Rng rng(99);
  std::size_t in = 0, nulls = 0;
  for (int i = 0; i < 1'000'000; ++i) {
    const double u = rng.uniform();
    const double e = rng.normal();
    const bool is_null = u < 0.8;
    const double z = is_null ? e : (u < 0.95 ? e - 3.0 : e + 4.0);
    if (tails.contains(z)) {
      ++in;
      nulls += is_null;
    }
  }
  const double p = static_cast<double>(nulls) / static_cast<double>(in);
  const double se = std::sqrt(p * (1 - p) / static_cast<double>(in));
  CHECK(std::fabs(mfdr_of_region(fig2, tails) - p) <= 3 * se);
}

TEST_CASE("mFNR of regions") {
  const auto fig2 = mixture(0.15, -3, 0.05, 4);
  CHECK(mfnr_of_region(fig2, RejectionRegion()) == Approx(0.2).epsilon(1e-12));
  CHECK(mfnr_of_region(TwoGroupModel::pure_null(), RejectionRegion({{-kInf, -1.0}})) == 0.0);
  CHECK(code_of([&] { mfnr_of_region(fig2, RejectionRegion::whole_line()); }) ==
        ErrorCode::FullRegion);

  const auto sym = mixture(0.1, -3, 0.1, 3);
  const auto r = region_from_pvalue_threshold(kStandardNormal, 0.020984721692665204);
  CHECK(mfnr_of_region(sym, r) == Approx(0.05877742747115447).epsilon(1e-8));
}

TEST_CASE("p-value oracle") {
  // mpmath root of the closed-form mFDR equation.
  const auto sym = mixture(0.1, -3, 0.1, 3);
  const auto rule = oracle_pvalue_rule(sym, 0.1);
  CHECK(rule.kind == RuleKind::PValue);
  CHECK(rule.threshold == Approx(0.020984721692665204).epsilon(1e-7));
  CHECK(rule.mfnr == Approx(0.05877742747115447).epsilon(1e-7));
  CHECK(rule.mfdr <= 0.1 + 1e-6);
  CHECK(rule.mfdr == Approx(0.1).epsilon(1e-6));
  CHECK(rule.region.symmetric_about(0.0, 1e-12));

  const auto fig2 = oracle_pvalue_rule(mixture(0.15, -3, 0.05, 4), 0.1);
  CHECK(fig2.threshold == Approx(0.022564255150255037).epsilon(1e-7));
  CHECK(fig2.mfnr == Approx(0.04580598668612259).epsilon(1e-7));

  // p0 <= alpha: everything can be rejected.
  const TwoGroupModel dense(0.05, kStandardNormal, {{0.95, {2.0, 1.0}}});
  const auto all = oracle_pvalue_rule(dense, 0.1);
  CHECK(all.threshold > 1.0 - 1e-9);
  CHECK(all.mfdr == Approx(0.05).epsilon(1e-6));

  double prev = 0.0;
  for (double a : {0.02, 0.05, 0.1, 0.15, 0.2, 0.3}) {
    const double t = oracle_pvalue_rule(mixture(0.18, -3, 0.02, 1), a).threshold;
    CHECK(t >= prev);
    prev = t;
  }

  CHECK(code_of([] { oracle_pvalue_rule(TwoGroupModel::pure_null(), 0.1); }) ==
        ErrorCode::Infeasible);
  CHECK(code_of([&] { oracle_pvalue_rule(sym, 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("Lfdr oracle") {
  const auto sym = mixture(0.1, -3, 0.1, 3);
  const auto rule = oracle_lfdr_rule(sym, 0.1);
  CHECK(rule.kind == RuleKind::Lfdr);
  CHECK(rule.threshold == Approx(0.4145136016850655).epsilon(1e-7));
  CHECK(rule.region.symmetric_about(0.0, 1e-8));
  CHECK(rule.mfnr == Approx(oracle_pvalue_rule(sym, 0.1).mfnr).epsilon(1e-6));

  const auto fig2 = mixture(0.15, -3, 0.05, 4);
  const auto r2 = oracle_lfdr_rule(fig2, 0.1);
  CHECK(r2.threshold == Approx(0.5025981828238979).epsilon(1e-7));
  CHECK(r2.mfnr == Approx(0.037684280875078344).epsilon(1e-7));
  CHECK(r2.mfdr <= 0.1 + 1e-6);
  CHECK(r2.region.contains(-2.0) != r2.region.contains(3.0));
  CHECK_FALSE(r2.region.symmetric_about(0.0, 1e-3));

  const auto c6 = oracle_lfdr_rule(mixture(0.18, -3, 0.02, 6), 0.1);
  CHECK(c6.mfnr == Approx(0.034552099215021656).epsilon(1e-7));

  const auto none = oracle_lfdr_rule(TwoGroupModel::pure_null(), 0.1);
  CHECK(none.region.empty());
  CHECK(none.mfdr == 0.0);
  CHECK(none.mfnr == 0.0);

  // A nonnull narrower than the null puts Lfdr >= 1/3 everywhere.
  const TwoGroupModel narrow(0.5, kStandardNormal, {{0.5, {0.0, 0.5}}});
  CHECK(code_of([&] { oracle_lfdr_rule(narrow, 0.1); }) == ErrorCode::Infeasible);
}

TEST_CASE("Lfdr oracle dominates the p-value oracle on random models") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> mu(-5.0, 5.0), w(0.0, 1.0), a(0.02, 0.3);
  for (int trial = 0; trial < 12; ++trial) {
    const double p1 = 0.2 * w(gen);
    double mu1 = mu(gen), mu2 = mu(gen);
    if (std::fabs(mu1) < 0.5) mu1 += 1.0;
    if (std::fabs(mu2) < 0.5) mu2 -= 1.0;
    const auto m = mixture(p1, mu1, 0.2 - p1, mu2);
    const double alpha = a(gen);
    const auto pv = oracle_pvalue_rule(m, alpha);
    const auto lf = oracle_lfdr_rule(m, alpha);
    CHECK(lf.mfnr <= pv.mfnr + 1e-6);
    CHECK(lf.mfdr <= alpha + 1e-6);
    CHECK(pv.mfdr <= alpha + 1e-6);
  }
}

TEST_CASE("oracle sweep keeps order and flags failures") {
  const std::vector<double> grid = {0.15, 0.05, 0.10};
  const auto rows = oracle_sweep(
      [](double p1) { return SweepPoint{mixture(p1, -3, 0.2 - p1, 3), 0.1}; }, grid);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].sweep == 0.05);
  CHECK(rows[2].sweep == 0.15);
  for (const auto& r : rows) CHECK(r.ok());

  const std::vector<double> one = {0.1};
  const auto bad = oracle_sweep(
      [](double) { return SweepPoint{TwoGroupModel::pure_null(), 0.1}; }, one);
  REQUIRE(bad.size() == 1);
  CHECK_FALSE(bad[0].ok());
  CHECK_FALSE(bad[0].error.empty());
  CHECK(bad[0].mfnr_lfdr.has_value());
  CHECK_THROWS_AS(oracle_sweep([](double) { return SweepPoint{TwoGroupModel::pure_null(), 0.1}; },
                               std::vector<double>{}),
                  Error);
}
