#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lfdrlab/error.hpp"
#include "lfdrlab/estimation.hpp"
#include "lfdrlab/figures.hpp"
#include "lfdrlab/simulation.hpp"

using namespace lfdr;
using doctest::Approx;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an lfdr::Error");
  return ErrorCode::InvalidArgument;
}

const TwoGroupModel& default_mixture() {
  static const TwoGroupModel m = mixture_model(0.1, -3.0, 0.1, 3.0);
  return m;
}

}  // namespace

TEST_CASE("empirical characteristic function") {
  const std::vector<double> z = {-1.3, 0.2, 0.7, 2.5, 4.0};
  const auto at0 = empirical_cf(z, 0.0);
  CHECK(at0.real() == 1.0);
  CHECK(at0.imag() == 0.0);

  const std::vector<double> zeros(7, 0.0);
  for (double t : {0.3, 2.0, 17.0}) CHECK(empirical_cf(zeros, t) == std::complex<double>(1.0, 0.0));

  const std::vector<double> one = {1.0};
  const auto pi = empirical_cf(one, std::numbers::pi);
  CHECK(std::fabs(pi.real() + 1.0) <= 1e-12);
  CHECK(std::fabs(pi.imag()) <= 1e-12);

  for (double t = -5.0; t <= 5.0; t += 0.37) {
    const auto a = empirical_cf(z, t);
    const auto b = empirical_cf(z, -t);
    CHECK(std::abs(a) <= 1.0);
    CHECK(a.real() == Approx(b.real()).epsilon(1e-15));
    CHECK(a.imag() == Approx(-b.imag()).epsilon(1e-15));
  }
  CHECK(code_of([] { empirical_cf(std::vector<double>{}, 1.0); }) == ErrorCode::EmptyInput);
}

TEST_CASE("ECF null estimate on a pure null sample") {
  const auto s = sample_model(TwoGroupModel::pure_null(), 100000, 314159);
  const auto e = estimate_null_ecf(s.z);
  CHECK(e.p0_hat >= 0.95);
  CHECK(e.p0_hat <= 1.0);
  CHECK(std::fabs(e.u0_hat) <= 0.03);
  CHECK(std::fabs(e.sigma0_hat - 1.0) <= 0.03);
  CHECK(e.t_star > 0.0);
  CHECK(e.cf_magnitude_at_t_star > 0.0);
  CHECK(e.cf_magnitude_at_t_star <= 1.0);
}

TEST_CASE("ECF null estimate on the default mixture") {
  const auto s = sample_model(default_mixture(), 100000, 271828);
  const auto e = estimate_null_ecf(s.z);
  CHECK(e.p0_hat >= 0.75);
  CHECK(e.p0_hat <= 0.85);
  CHECK(std::fabs(e.sigma0_hat - 1.0) <= 0.05);
  CHECK(std::fabs(e.u0_hat) <= 0.05);
}

TEST_CASE("ECF estimate is affine equivariant") {
  const auto s = sample_model(default_mixture(), 5000, 4242);
  const auto base = estimate_null_ecf(s.z);
  for (auto [a, b] : {std::pair{2.0, 1.0}, std::pair{-0.5, 3.0}, std::pair{1.0, -4.0}}) {
    std::vector<double> y(s.z.size());
    std::transform(s.z.begin(), s.z.end(), y.begin(), [&](double v) { return a * v + b; });
    EcfOptions opt;
    opt.frequency_step = 0.01 / std::fabs(a);
    const auto e = estimate_null_ecf(y, opt);
    CHECK(e.u0_hat == Approx(a * base.u0_hat + b).epsilon(1e-6));
    CHECK(e.sigma0_hat == Approx(std::fabs(a) * base.sigma0_hat).epsilon(1e-6));
    CHECK(e.p0_hat == Approx(base.p0_hat).epsilon(1e-6));
    CHECK(e.t_star == Approx(base.t_star / std::fabs(a)).epsilon(1e-12));
  }
}

TEST_CASE("ECF estimator errors") {
  const std::vector<double> small(99, 0.5);
  CHECK(code_of([&] { estimate_null_ecf(small); }) == ErrorCode::NotEnoughData);
  const std::vector<double> constant(500, 1.25);
  CHECK(code_of([&] { estimate_null_ecf(constant); }) == ErrorCode::DegenerateCF);
  std::vector<double> bad(200, 0.1);
  bad[17] = std::nan("");
  CHECK(code_of([&] { estimate_null_ecf(bad); }) == ErrorCode::MalformedInput);
}

TEST_CASE("kernel density estimate") {
  const auto s = sample_model(TwoGroupModel::pure_null(), 100000, 77);
  const auto kde = estimate_marginal_kde(s.z);
  CHECK(kde(0.0) >= 0.38);
  CHECK(kde(0.0) <= 0.42);
  CHECK(kde.bandwidth() == Approx(silverman_bandwidth(s.z)).epsilon(1e-15));

  const auto& g = kde.grid();
  const auto& v = kde.values();
  REQUIRE(g.size() == MarginalDensityEstimate::kGridSize);
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(g.front() == Approx(*std::min_element(s.z.begin(), s.z.end()) - 4 * kde.bandwidth()));
  CHECK(g.back() == Approx(*std::max_element(s.z.begin(), s.z.end()) + 4 * kde.bandwidth()));
  double area = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) area += 0.5 * (v[i] + v[i - 1]) * (g[i] - g[i - 1]);
  CHECK(area == Approx(1.0).epsilon(1e-12));
  CHECK(*std::min_element(v.begin(), v.end()) >= 0.0);

  // Off-grid evaluation falls back to the (small, positive) kernel sum.
  CHECK(kde(g.back() + 1.0) >= 0.0);
  CHECK(kde(g.back() + 1.0) < v.back());
  CHECK(kde(g[100]) == Approx(v[100]).epsilon(1e-14));

  const auto fixed = estimate_marginal_kde(s.z, 0.5);
  CHECK(fixed.bandwidth() == 0.5);
}

TEST_CASE("kernel density estimate of symmetric data is symmetric") {
  const auto s = sample_model(TwoGroupModel::pure_null(), 2000, 5);
  const double c = 1.5;
  std::vector<double> z;
  for (double x : s.z) {
    z.push_back(c + x);
    z.push_back(c - x);
  }
  const auto kde = estimate_marginal_kde(z);
  const auto& v = kde.values();
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n / 2; ++i) CHECK(std::fabs(v[i] - v[n - 1 - i]) <= 1e-10);
  CHECK(std::fabs(kde(c + 0.77) - kde(c - 0.77)) <= 1e-10);
}

TEST_CASE("silverman bandwidth and KDE errors") {
  const std::vector<double> z = {1.0, 2.0, 3.0, 4.0, 100.0};
  // sd = 43.5 but IQR / 1.34 = 1.4925, so the robust spread is used.
  CHECK(silverman_bandwidth(z) == Approx(1.06 * (2.0 / 1.34) * std::pow(5.0, -0.2)).epsilon(1e-14));
  const std::vector<double> mostly = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0};
  // Zero IQR falls back to the standard deviation.
  CHECK(silverman_bandwidth(mostly) == Approx(1.06 * std::sqrt(1.0 / 7.0) * std::pow(7.0, -0.2)));

  CHECK(code_of([] { estimate_marginal_kde(std::vector<double>{1.0}); }) ==
        ErrorCode::NotEnoughData);
  CHECK(code_of([] { estimate_marginal_kde(std::vector<double>{2.0, 2.0, 2.0}); }) ==
        ErrorCode::DegenerateData);
  CHECK(code_of([] { estimate_marginal_kde(std::vector<double>{1.0, 2.0}, -1.0); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("tail-based null proportion") {
  CHECK(estimate_p0_tail(std::vector<double>{0.6, 0.7, 0.8, 0.9}) == 1.0);
  CHECK(estimate_p0_tail(std::vector<double>{0.1, 0.2, 0.5}) == 0.0);
  CHECK(estimate_p0_tail(std::vector<double>{0.1, 0.6, 0.7, 0.9}) == 1.0);
  CHECK(estimate_p0_tail(std::vector<double>{0.1, 0.2, 0.3, 0.9}) == 0.5);
  CHECK(estimate_p0_tail(std::vector<double>{0.1, 0.2, 0.3, 0.9}, 0.75) == 1.0);
  std::vector<double> uniform;
  for (int i = 1; i <= 1000; ++i) uniform.push_back((i - 0.5) / 1000.0);
  CHECK(estimate_p0_tail(uniform) == 1.0);
  CHECK(estimate_p0_tail(uniform, 0.8) == Approx(1.0).epsilon(1e-12));
  CHECK(code_of([&] { estimate_p0_tail(uniform, 1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("estimated Lfdr values") {
  const auto& model = default_mixture();
  const std::vector<double> z = {-4.0, -2.0, -0.5, 0.0, 1.0, 3.0, 5.0};
  const auto exact =
      estimated_lfdr_values(z, model.p0(), model.null(),
                            [&](double x) { return marginal_density(model, x); });
  for (std::size_t i = 0; i < z.size(); ++i) {
    CHECK(exact[i] == Approx(lfdr::lfdr(model, z[i])).epsilon(1e-12));
  }

  const auto capped = estimated_lfdr_values(z, 1.0, kStandardNormal, [](double x) {
    return 0.5 * gaussian_pdf(x, kStandardNormal);
  });
  for (double v : capped) CHECK(v == 1.0);

  const auto scaled = estimated_lfdr_values(z, 1e-12, kStandardNormal,
                                            [&](double x) { return marginal_density(model, x); });
  for (double v : scaled) CHECK(v < 1e-11);

  CHECK(code_of([&] {
          estimated_lfdr_values(z, 0.8, kStandardNormal, [](double) { return 0.0; });
        }) == ErrorCode::DegenerateMarginal);
}

TEST_CASE("estimated Lfdr pipeline tracks the exact Lfdr") {
  const auto& model = default_mixture();
  const auto s = sample_model(model, 100000, 8080);
  const auto null_est = estimate_null_ecf(s.z);
  const auto kde = estimate_marginal_kde(s.z);
  std::vector<double> grid;
  for (double x = -4.0; x <= 4.0 + 1e-9; x += 0.05) grid.push_back(x);
  const auto est = estimated_lfdr_values(grid, null_est, kde);
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) err += std::fabs(est[i] - lfdr::lfdr(model, grid[i]));
  err /= static_cast<double>(grid.size());
  CHECK(err <= 0.05);
}
