#pragma once

#include <limits>
#include <vector>

#include "levyexit/numeric.hpp"

namespace levyexit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct PointMass {
  double location = 0.0;
  cplx mass = 0.0;
};

/// Density coef * (y - anchor)^power * e^{-rate (y - anchor)} on [lo, hi].
struct ExpTerm {
  cplx coef = 0.0;
  int power = 0;
  cplx rate = 0.0;
  double anchor = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  cplx density(double y) const;
};

/// int_a^b u^p e^{-r u} du; either limit may be infinite when the integral converges.
cplx integral_pow_exp(int p, cplx r, double a, double b);

/// Finite signed (complex) measure made of point masses and exponential-polynomial
/// densities on intervals. Closed under convolution, restriction, shifts and sums.
class ExpPolyMeasure {
 public:
  ExpPolyMeasure() = default;

  std::vector<PointMass> atoms;
  std::vector<ExpTerm> terms;

  static ExpPolyMeasure dirac(double at, cplx mass = 1.0);
  static ExpPolyMeasure exponential(cplx coef, cplx rate, double lo, double hi, double anchor = 0.0);

  ExpPolyMeasure& add_atom(double at, cplx mass);
  ExpPolyMeasure& add_term(const ExpTerm& t);

  cplx mass() const;
  /// mu((-inf, y])
  cplx cdf(double y) const;
  /// continuous part only
  cplx density(double y) const;
  /// int e^{-lambda y} mu(dy)
  cplx laplace(cplx lambda) const;
  /// total variation, |atoms| plus int |density| by quadrature
  double total_variation() const;

  ExpPolyMeasure restricted(double lo, double hi) const;
  ExpPolyMeasure shifted(double by) const;
  ExpPolyMeasure scaled(cplx s) const;
  ExpPolyMeasure operator+(const ExpPolyMeasure& o) const;
  ExpPolyMeasure operator-(const ExpPolyMeasure& o) const;

  /// Merges terms sharing (power, rate, anchor, support) and atoms at one location; drops zeros.
  ExpPolyMeasure compressed() const;

  double support_lo() const;
  double support_hi() const;
};

ExpPolyMeasure convolve(const ExpPolyMeasure& a, const ExpPolyMeasure& b);

}  // namespace levyexit
