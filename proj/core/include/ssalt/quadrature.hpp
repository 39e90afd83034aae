#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace ssalt::quad {

/// 21-point Gauss-Kronrod rule on [-1, 1] with its embedded 10-point Gauss
/// rule. Only the non-negative half of the symmetric rule is stored.
struct GaussKronrod21 {
  std::array<double, 11> abscissa{};  // abscissa[0] = 0
  std::array<double, 11> kronrod_weight{};
  std::array<double, 11> gauss_weight{};  // zero where the node is Kronrod-only
};

const GaussKronrod21& gk21();

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  std::size_t max_intervals = 2000;
};

template <class V>
struct Result {
  V value{};
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

template <class V>
struct Segment {
  double a = 0.0;
  double b = 0.0;
  V value{};
  double error = 0.0;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class V, class F>
Segment<V> apply_rule(F& f, double a, double b) {
  const auto& rule = gk21();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  V fc = f(center);
  V kronrod = fc * rule.kronrod_weight[0];
  V gauss = fc * 0.0;
  for (std::size_t i = 1; i < rule.abscissa.size(); ++i) {
    const double dx = half * rule.abscissa[i];
    V pair = f(center + dx);
    pair += f(center - dx);
    kronrod += pair * rule.kronrod_weight[i];
    if (rule.gauss_weight[i] != 0.0) gauss += pair * rule.gauss_weight[i];
  }
  Segment<V> seg;
  seg.a = a;
  seg.b = b;
  seg.value = kronrod * half;
  V diff = (kronrod - gauss) * half;
  seg.error = magnitude(diff);
  return seg;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b]: the
/// segment with the largest error estimate is bisected until the summed
/// error drops below max(abs_tol, rel_tol * |I|). V is double or
/// Eigen::VectorXd (errors are measured in the max norm).
template <class V, class F>
Result<V> integrate(F&& f, double a, double b, const Options& opt = {}) {
  Result<V> out;
  if (a == b) {
    out.value = f(a) * 0.0;
    out.converged = true;
    return out;
  }
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::priority_queue<detail::Segment<V>> heap;
  auto first = detail::apply_rule<V>(f, a, b);
  V total = first.value;
  double total_error = first.error;
  heap.push(std::move(first));
  out.evaluations = 21;
  std::size_t intervals = 1;
  auto tolerance = [&] {
    return std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total));
  };
  while (total_error > tolerance() && intervals < opt.max_intervals) {
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(std::move(worst));
      break;
    }
    auto left = detail::apply_rule<V>(f, worst.a, mid);
    auto right = detail::apply_rule<V>(f, mid, worst.b);
    out.evaluations += 42;
    total -= worst.value;
    total += left.value;
    total += right.value;
    total_error += left.error + right.error - worst.error;
    heap.push(std::move(left));
    heap.push(std::move(right));
    ++intervals;
  }
  // Re-sum to shed the drift from incremental updates.
  total_error = 0.0;
  bool first_seg = true;
  while (!heap.empty()) {
    const auto& s = heap.top();
    if (first_seg) {
      total = s.value;
      first_seg = false;
    } else {
      total += s.value;
    }
    total_error += s.error;
    heap.pop();
  }
  out.value = total * sign;
  out.error = total_error;
  out.converged = total_error <= tolerance();
  return out;
}

/// Scalar convenience wrapper returning only the value.
template <class F>
double integral(F&& f, double a, double b, const Options& opt = {}) {
  return integrate<double>(std::forward<F>(f), a, b, opt).value;
}

}  // namespace ssalt::quad
