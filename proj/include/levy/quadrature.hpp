#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "levy/types.hpp"

namespace levy::quad {

// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
template <typename Scalar = double>
struct GaussLegendreRule {
  VectorX<Scalar> nodes;
  VectorX<Scalar> weights;

  Eigen::Index size() const { return nodes.size(); }
};

template <typename Scalar = double>
GaussLegendreRule<Scalar> gauss_legendre(int n) {
  using std::abs;
  using std::cos;
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  GaussLegendreRule<Scalar> rule{VectorX<Scalar>(n), VectorX<Scalar>(n)};
  const Scalar pi = Scalar(kPi);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi's initial guess, then Newton on P_n.
    Scalar x = cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
    Scalar dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Scalar p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Scalar pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      const Scalar dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= 4 * eps) break;
    }
    // recompute derivative at the converged node
    Scalar p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const Scalar pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = (n == 1) ? Scalar(1) : n * (x * p1 - p0) / (x * x - 1);
    const Scalar w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0;
  return rule;
}

// Fixed rule mapped onto [a, b].
template <typename Scalar, typename F>
auto integrate(const GaussLegendreRule<Scalar>& rule, F&& f, std::type_identity_t<Scalar> a,
               std::type_identity_t<Scalar> b) {
  using R = std::decay_t<decltype(f(a))>;
  const Scalar c = (a + b) / 2, r = (b - a) / 2;
  R sum{};
  for (Eigen::Index i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(c + r * rule.nodes[i]);
  return sum * r;
}

// Composite fixed-order Gauss-Legendre over `panels` equal panels.
template <typename Scalar, typename F>
auto integrate_composite(const GaussLegendreRule<Scalar>& rule, F&& f,
                         std::type_identity_t<Scalar> a, std::type_identity_t<Scalar> b,
                         int panels) {
  using R = std::decay_t<decltype(f(a))>;
  R sum{};
  const Scalar h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) sum += integrate(rule, f, a + p * h, a + (p + 1) * h);
  return sum;
}

template <typename T>
struct QuadResult {
  T value{};
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

struct AdaptiveOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_intervals = 2000;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Segment {
  double a, b;
  T value;
  double error;
  double abs_value;  // integral of |f|, for the roundoff floor
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename F>
auto gauss_kronrod_15(F& f, double a, double b) {
  using R = std::decay_t<decltype(f(a))>;
  using std::abs;
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  std::array<R, 15> fx;
  fx[7] = f(c);
  for (int j = 0; j < 7; ++j) {
    const double dx = r * kKronrodNodes[j];
    fx[j] = f(c - dx);
    fx[14 - j] = f(c + dx);
  }
  R kronrod = kKronrodWeights[7] * fx[7];
  R gauss = kGaussWeights[3] * fx[7];
  double resabs = kKronrodWeights[7] * static_cast<double>(abs(fx[7]));
  for (int j = 0; j < 7; ++j) {
    kronrod += kKronrodWeights[j] * (fx[j] + fx[14 - j]);
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (fx[j] + fx[14 - j]);
    resabs += kKronrodWeights[j] * static_cast<double>(abs(fx[j]) + abs(fx[14 - j]));
  }
  const R mean = kronrod * 0.5;
  double resasc = kKronrodWeights[7] * static_cast<double>(abs(fx[7] - mean));
  for (int j = 0; j < 7; ++j)
    resasc += kKronrodWeights[j] * static_cast<double>(abs(fx[j] - mean) + abs(fx[14 - j] - mean));
  resabs *= std::abs(r);
  resasc *= std::abs(r);
  // QUADPACK's scaling of |K - G|, floored at the rounding level
  double err = static_cast<double>(abs((kronrod - gauss) * r));
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * resabs);
  return Segment<R>{a, b, kronrod * r, err, resabs};
}

template <typename F>
auto adaptive_finite(F& f, double a, double b, const AdaptiveOptions& opt) {
  using R = std::decay_t<decltype(f(a))>;
  using std::abs;
  std::priority_queue<Segment<R>> heap;
  auto first = gauss_kronrod_15(f, a, b);
  R total = first.value;
  double err = first.error;
  heap.push(first);
  int count = 1;
  while (err > std::max(opt.abs_tol, opt.rel_tol * static_cast<double>(abs(total))) &&
         count < opt.max_intervals) {
    const Segment<R> worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // no room left to bisect
    heap.pop();
    auto left = gauss_kronrod_15(f, worst.a, mid);
    auto right = gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // re-sum to shed accumulated cancellation in the running totals
  R sum{};
  double esum = 0.0, asum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    asum += heap.top().abs_value;
    heap.pop();
  }
  // an error at the rounding floor cannot be improved by further bisection
  const double floor = 100.0 * std::numeric_limits<double>::epsilon() * asum;
  const bool ok =
      esum <= std::max({opt.abs_tol, opt.rel_tol * static_cast<double>(abs(sum)), floor});
  return QuadResult<R>{sum, esum, count, ok};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) quadrature. Infinite endpoints are
// mapped onto a finite interval with x = a + t/(1-t).
template <typename F>
auto integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opt = {}) {
  using R = std::decay_t<decltype(f(a))>;
  if (a == b) return QuadResult<R>{R{}, 0.0, 0, true};
  if (a > b) {
    auto r = integrate_adaptive(f, b, a, opt);
    r.value = -r.value;
    return r;
  }
  const bool lo_inf = std::isinf(a), hi_inf = std::isinf(b);
  if (lo_inf && hi_inf) {
    AdaptiveOptions half = opt;
    half.abs_tol = 0.5 * opt.abs_tol;
    auto l = integrate_adaptive(f, -kInf, 0.0, half);
    auto r = integrate_adaptive(f, 0.0, kInf, half);
    return QuadResult<R>{l.value + r.value, l.error + r.error, l.intervals + r.intervals,
                         l.converged && r.converged};
  }
  if (hi_inf) {
    auto g = [&](double t) -> R {
      const double s = 1.0 - t;
      return f(a + t / s) / (s * s);
    };
    return detail::adaptive_finite(g, 0.0, 1.0, opt);
  }
  if (lo_inf) {
    auto g = [&](double t) -> R {
      const double s = 1.0 - t;
      return f(b - t / s) / (s * s);
    };
    return detail::adaptive_finite(g, 0.0, 1.0, opt);
  }
  return detail::adaptive_finite(f, a, b, opt);
}

// Composite Simpson weights for n (odd) equally spaced samples with spacing h.
inline Vector simpson_weights(Eigen::Index n, double h) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("simpson_weights: need an odd count >= 3");
  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = (i % 2 == 1) ? 4.0 : 2.0;
  w[0] = w[n - 1] = 1.0;
  return w * (h / 3.0);
}

}  // namespace levy::quad
