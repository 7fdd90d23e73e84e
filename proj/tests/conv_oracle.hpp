#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "levyexit/exp_poly_measure.hpp"
#include "levyexit/quadrature.hpp"

namespace testmodels {

using levyexit::cplx;
using levyexit::ExpPolyMeasure;
using levyexit::ExpTerm;

/// Random measure with finite support inside [-2, 2]: up to three terms and one atom.
inline ExpPolyMeasure random_measure(std::mt19937& g) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  ExpPolyMeasure m;
  const int nt = 1 + static_cast<int>(3 * U(g)) % 3;
  for (int k = 0; k < nt; ++k) {
    double a = -2.0 + 4.0 * U(g), b = -2.0 + 4.0 * U(g);
    if (a > b) std::swap(a, b);
    if (b - a < 0.05) b = a + 0.05;
    ExpTerm t;
    t.coef = -1.0 + 3.0 * U(g);
    t.power = U(g) < 0.3 ? 1 : 0;
    t.rate = -2.0 + 5.0 * U(g);
    t.anchor = U(g) < 0.5 ? 0.0 : a;
    t.lo = a;
    t.hi = b;
    m.add_term(t);
  }
  if (U(g) < 0.5) m.add_atom(-1.5 + 3.0 * U(g), 0.2 + U(g));
  return m;
}

/// Density of a * b at z by quadrature of a.density(y) b.density(z - y) plus the atom cross terms.
inline cplx numeric_convolution_density(const ExpPolyMeasure& a, const ExpPolyMeasure& b, double z) {
  std::vector<double> cuts;
  for (const auto& t : a.terms) {
    cuts.push_back(t.lo);
    cuts.push_back(t.hi);
  }
  for (const auto& t : b.terms) {
    cuts.push_back(z - t.lo);
    cuts.push_back(z - t.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cplx s = 0.0;
  const levyexit::QuadOptions opt{1e-14, 1e-12, 30, 1};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] < 1e-14) continue;
    s += levyexit::integrate([&](double y) { return a.density(y) * b.density(z - y); }, cuts[i], cuts[i + 1], opt);
  }
  for (const auto& at : a.atoms) s += at.mass * b.density(z - at.location);
  for (const auto& bt : b.atoms) s += bt.mass * a.density(z - bt.location);
  return s;
}

}  // namespace testmodels
