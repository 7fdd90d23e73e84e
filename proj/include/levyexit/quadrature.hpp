#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "levyexit/errors.hpp"
#include "levyexit/numeric.hpp"

namespace levyexit {

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-7;
  int max_depth = 40;
  int initial_panels = 4;
};

/// 16-point Gauss-Legendre nodes and weights on [-1, 1].
const std::array<double, 16>& gl16_nodes();
const std::array<double, 16>& gl16_weights();

namespace detail {
inline double qnorm(cplx v) { return std::abs(v); }
inline double qnorm(double v) { return std::abs(v); }
inline double qnorm(const Eigen::VectorXcd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

template <class F>
auto gl16(F& f, double a, double b) {
  const auto& x = gl16_nodes();
  const auto& w = gl16_weights();
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  using T = decltype(f(a));
  T s = f(c + h * x[0]) * (w[0] * h);
  for (int i = 1; i < 16; ++i) s += T(f(c + h * x[i]) * (w[i] * h));
  return s;
}
}  // namespace detail

/// Adaptive bisection with 16-point Gauss-Legendre panels over [a, b] (finite).
/// The integrand may return double, cplx or Eigen::VectorXcd.
template <class F>
auto integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  using T = decltype(f(a));
  if (!(b > a)) return T(f(a) * 0.0);
  struct Panel { double a, b; T val; int depth; };
  const int np = std::max(1, opt.initial_panels);
  std::vector<Panel> stack;
  T global = f(a) * 0.0;
  for (int i = 0; i < np; ++i) {
    const double pa = a + (b - a) * i / np, pb = (i + 1 == np) ? b : a + (b - a) * (i + 1) / np;
    Panel p{pa, pb, detail::gl16(f, pa, pb), 0};
    global += p.val;
    stack.push_back(std::move(p));
  }
  const double scale = detail::qnorm(global);
  const double tol = std::max(opt.abs_tol, opt.rel_tol * scale);
  T total = f(a) * 0.0;
  // depth-first, left to right: the summation order is fixed by the interval layout
  std::reverse(stack.begin(), stack.end());
  while (!stack.empty()) {
    Panel p = std::move(stack.back());
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    T left = detail::gl16(f, p.a, m);
    T right = detail::gl16(f, m, p.b);
    T both = left + right;
    const double err = detail::qnorm(T(both - p.val));
    if (err <= tol * (p.b - p.a) / (b - a) || err <= 1e-15 * detail::qnorm(both)) {
      total += both;
      continue;
    }
    if (p.depth >= opt.max_depth)
      fail(ErrorCode::QuadratureNotConverged, "adaptive quadrature did not reach tolerance");
    stack.push_back(Panel{m, p.b, std::move(right), p.depth + 1});
    stack.push_back(Panel{p.a, m, std::move(left), p.depth + 1});
  }
  return total;
}

/// int_a^inf f via y = a + t/(1-t).
template <class F>
auto integrate_to_inf(F&& f, double a, const QuadOptions& opt = {}) {
  auto g = [&](double t) {
    const double s = 1.0 - t;
    return f(a + t / s) * (1.0 / (s * s));
  };
  return integrate(g, 0.0, 1.0 - 1e-15, opt);
}

/// int_{-inf}^b f via y = b - t/(1-t).
template <class F>
auto integrate_from_neg_inf(F&& f, double b, const QuadOptions& opt = {}) {
  auto g = [&](double t) {
    const double s = 1.0 - t;
    return f(b - t / s) * (1.0 / (s * s));
  };
  return integrate(g, 0.0, 1.0 - 1e-15, opt);
}

}  // namespace levyexit
