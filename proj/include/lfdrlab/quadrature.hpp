#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <tuple>
#include <utility>
#include <vector>

namespace lfdr {

template <std::size_t N>
struct QuadratureResult {
  std::array<double, N> value{};
  std::array<double, N> error{};
  int intervals = 0;
  bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK dqk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.58608723546769113029414483825873,  0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.02293532201052922496373200805897, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.16900472663926790282658342659855, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.27970539148927666790146777142378,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
struct Panel {
  double a, b;
  std::array<double, N> value, error;
  double worst;  // largest per-component error, used for ordering
  bool operator<(const Panel& o) const { return worst < o.worst; }
};

template <std::size_t N, class F>
Panel<N> gk15(F& f, double a, double b, const std::array<double, N>& scale) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, N> kron{}, gauss{};
  const std::array<double, N> fc = f(center);
  for (std::size_t k = 0; k < N; ++k) {
    kron[k] = fc[k] * kWgk[7];
    gauss[k] = fc[k] * kWg[3];
  }
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const std::array<double, N> lo = f(center - dx);
    const std::array<double, N> hi = f(center + dx);
    for (std::size_t k = 0; k < N; ++k) {
      kron[k] += kWgk[j] * (lo[k] + hi[k]);
      if (j % 2 == 1) gauss[k] += kWg[j / 2] * (lo[k] + hi[k]);
    }
  }
  Panel<N> p{a, b, {}, {}, 0.0};
  for (std::size_t k = 0; k < N; ++k) {
    p.value[k] = kron[k] * half;
    p.error[k] = std::fabs((kron[k] - gauss[k]) * half);
    p.worst = std::max(p.worst, p.error[k] / scale[k]);
  }
  return p;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 7/15 integration of a vector-valued
/// integrand `f: double -> std::array<double, N>` over [a, b].
///
/// The panel with the largest error estimate is bisected until every
/// component satisfies |err| <= max(abs_tol, rel_tol * |value|), or
/// `max_intervals` panels are in use. The reported error is the sum of
/// panel-level |Kronrod - Gauss| differences, which is conservative for
/// smooth integrands.
template <std::size_t N, class F>
QuadratureResult<N> integrate(F&& f, double a, double b, double rel_tol = 1e-10,
                              double abs_tol = 1e-300, int max_intervals = 4000) {
  QuadratureResult<N> out;
  if (!(b > a)) {
    out.converged = true;
    return out;
  }
  // Panels are ranked by error relative to the first-pass magnitude of each
  // component, so a small component is refined as eagerly as a large one.
  std::array<double, N> scale;
  scale.fill(1.0);
  const auto first = detail::gk15<N>(f, a, b, scale);
  for (std::size_t k = 0; k < N; ++k) {
    scale[k] = std::max(std::fabs(first.value[k]), abs_tol / rel_tol);
  }
  std::priority_queue<detail::Panel<N>> heap;
  heap.push(detail::gk15<N>(f, a, b, scale));
  out.intervals = 1;

  auto totals = [&heap]() {
    // Sum in a fixed order for reproducibility.
    std::vector<detail::Panel<N>> panels;
    auto copy = heap;
    while (!copy.empty()) {
      panels.push_back(copy.top());
      copy.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const auto& x, const auto& y) { return x.a < y.a; });
    std::array<double, N> v{}, e{};
    for (const auto& p : panels) {
      for (std::size_t k = 0; k < N; ++k) {
        v[k] += p.value[k];
        e[k] += p.error[k];
      }
    }
    return std::pair{v, e};
  };

  std::array<double, N> value = heap.top().value;
  std::array<double, N> error = heap.top().error;
  while (true) {
    bool ok = true;
    for (std::size_t k = 0; k < N; ++k) {
      if (error[k] > std::max(abs_tol, rel_tol * std::fabs(value[k]))) ok = false;
    }
    if (ok) {
      out.converged = true;
      break;
    }
    if (out.intervals >= max_intervals) break;
    const detail::Panel<N> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    auto left = detail::gk15<N>(f, worst.a, mid, scale);
    auto right = detail::gk15<N>(f, mid, worst.b, scale);
    for (std::size_t k = 0; k < N; ++k) {
      value[k] += left.value[k] + right.value[k] - worst.value[k];
      error[k] += left.error[k] + right.error[k] - worst.error[k];
    }
    heap.push(left);
    heap.push(right);
    ++out.intervals;
  }
  std::tie(out.value, out.error) = totals();
  return out;
}

}  // namespace lfdr
