#pragma once

#include <vector>

#include "levyexit/numeric.hpp"

namespace levyexit {

/// Complex polynomial, coefficients in ascending degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(CVec coeffs);

  static Polynomial constant(cplx c);
  /// lead * prod (z - r_k)
  static Polynomial from_roots(const CVec& roots, cplx lead = 1.0);

  const CVec& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  cplx leading() const { return c_.empty() ? cplx(0.0) : c_.back(); }
  bool is_zero() const { return c_.empty(); }

  cplx operator()(cplx z) const;
  Polynomial derivative() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(cplx s) const;

  /// Exact division by (z - r); the remainder is discarded.
  Polynomial deflate(cplx r) const;

  /// Roots from the eigenvalues of the companion matrix.
  CVec roots() const;

 private:
  void trim();
  CVec c_;
};

/// f(z) = num(z) / (lead * prod (z - r_k)) written as constant + sum res_k/(z - r_k).
/// Requires simple poles and deg num <= number of poles.
struct PartialFractions {
  cplx constant;
  CVec residues;
  CVec poles;
};

PartialFractions partial_fractions(const Polynomial& num, const CVec& poles, cplx lead = 1.0);

/// Throws MultipleRootDetected when two entries agree to within tol*(1+|r|).
void require_simple(const CVec& roots, double tol, const char* what);

}  // namespace levyexit
