#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace levyexit {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

/// e^z - 1 without cancellation for small |z|.
inline cplx expm1c(cplx z) {
  const double a = z.real(), b = z.imag();
  if (b == 0.0) return std::expm1(a);
  const double s = std::sin(0.5 * b);
  return {std::expm1(a) * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b)};
}

/// (e^z - 1)/z, continuous at 0.
inline cplx exprel(cplx z) {
  if (std::abs(z) < 1e-5) return 1.0 + 0.5 * z + z * z / 6.0;
  return expm1c(z) / z;
}

/// (1 - e^{-s x})/s for x >= 0 without cancellation or a pole at s = 0.
inline cplx window_factor(cplx s, double x) { return x * exprel(-s * x); }

inline bool is_real(cplx z, double tol = 1e-12) {
  return std::abs(z.imag()) <= tol * (1.0 + std::abs(z.real()));
}

}  // namespace levyexit
