#pragma once

#include <vector>

#include "levyexit/exp_poly_measure.hpp"
#include "levyexit/model_spec.hpp"
#include "levyexit/polynomial.hpp"

namespace levyexit {

/// phi = psi * psibar with psi(l) = prod(l + beta_i)/prod(l + gamma_j) and
/// psibar(l) = lead * prod(l - theta_k)/prod(eta_k - l).
struct WHFactorization {
  CVec betas;
  CVec gammas;
  CVec thetas;
  CVec etas;
  cplx lead = 1.0;  // leading coefficient of phi_polynomial
  cplx kill = 0.0;
  int m = 0;
  int n = 0;
  bool creeping = false;  // m == n + 1
};

/// 1/psibar(l) = atom + sum u_k/(theta_k - l); U(dy) = atom delta_0 + sum u_k e^{theta_k y} dy on y < 0.
struct UbarTerm {
  cplx u;
  cplx theta;
};

struct UbarRepresentation {
  cplx atom = 0.0;
  std::vector<UbarTerm> terms;
};

WHFactorization factorize(const LevyModelSpec& spec);
/// Same with a (possibly complex) kill rate replacing spec.kill_q; roots are split by the sign of Re.
WHFactorization factorize(const LevyModelSpec& spec, cplx kill);

cplx psi_eval(const WHFactorization& wh, cplx lambda);
cplx psibar_eval(const WHFactorization& wh, cplx lambda);
inline cplx psibar_eval(const LevyModelSpec&, const WHFactorization& wh, cplx lambda) {
  return psibar_eval(wh, lambda);
}

UbarRepresentation ubar_representation(const WHFactorization& wh);
inline UbarRepresentation ubar_representation(const LevyModelSpec&, const WHFactorization& wh) {
  return ubar_representation(wh);
}

/// int_{[-x,0]} e^{-l y} U(dy)
cplx ubar_window(const UbarRepresentation& rep, double x, cplx lambda);
/// int_{]-inf,-x[} e^{-l y} U(dy); needs Re l < min Re theta_k
cplx ubar_tail(const UbarRepresentation& rep, double x, cplx lambda);
/// density of U at -x
cplx ubar_density(const UbarRepresentation& rep, double x);

/// u_k psibar(l)/(theta_k - l), finite at l = theta_k.
cplx psibar_over_pole(const WHFactorization& wh, std::size_t k, cplx lambda);
/// psibar(l) * ubar_tail(x, l) assembled from psibar_over_pole.
cplx psibar_times_tail(const WHFactorization& wh, double x, cplx lambda);

/// psi(0)/psi(l) = a0 + sum a_i/(l + beta_i); poles stored as -beta_i.
PartialFractions maximum_coefficients(const WHFactorization& wh);
/// Law of the supremum at the killing time.
ExpPolyMeasure maximum_law(const WHFactorization& wh);
/// psibar(0) U: law of the infimum at the killing time.
ExpPolyMeasure minimum_law(const UbarRepresentation& rep, cplx psibar0);
/// Law of X_{T^x} - x on {T^x < zeta} (atom at 0 is creeping).
ExpPolyMeasure overshoot_law(const WHFactorization& wh, const PartialFractions& max_coeffs, double x);
/// E[e^{-l X_{T_x}}; T_x < zeta] for Re l <= 0, T_x the first passage below -x.
cplx downward_passage_transform(const WHFactorization& wh, double x, cplx lambda);

}  // namespace levyexit
