#include "levyexit/wiener_hopf.hpp"

#include <algorithm>
#include <sstream>

#include "levyexit/errors.hpp"

namespace levyexit {

namespace {

void sort_roots(CVec& v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

cplx newton_polish(const LevyModelSpec& spec, cplx kill, cplx z) {
  for (int it = 0; it < 3; ++it) {
    cplx f, d;
    try {
      f = phi_eval(spec, z, kill);
    } catch (const Error&) {
      break;
    }
    d = phi_derivative(spec, z);
    if (d == cplx(0.0)) break;
    const cplx step = f / d;
    if (!std::isfinite(std::abs(step)) || std::abs(step) > 1e-3 * (1.0 + std::abs(z))) break;
    z -= step;
  }
  return z;
}

}  // namespace

WHFactorization factorize(const LevyModelSpec& spec) { return factorize(spec, spec.kill_q); }

WHFactorization factorize(const LevyModelSpec& spec, cplx kill) {
  require_valid(spec);
  if (kill.real() < 0.0) fail(ErrorCode::NegativeParameter, "kill rate must have Re >= 0");
  WHFactorization wh;
  wh.kill = kill;
  for (const auto& j : spec.pos_jumps) wh.gammas.push_back(j.rate);
  for (const auto& j : spec.neg_jumps) wh.etas.push_back(j.rate);
  wh.n = static_cast<int>(wh.gammas.size());

  Polynomial N = phi_polynomial(spec, kill);
  wh.lead = N.leading();
  const bool real_model = kill.imag() == 0.0;

  int structural_zeros = 0;
  double slope = 0.0;
  if (kill == cplx(0.0)) {
    // phi(0) = 0: deflate the root at the origin, twice if phi'(0) vanishes as well
    slope = phi_prime_zero(spec);
    double scale = std::abs(spec.mu);
    for (const auto& j : spec.pos_jumps) scale += j.weight / (j.rate * j.rate);
    for (const auto& j : spec.neg_jumps) scale += j.weight / (j.rate * j.rate);
    N = N.deflate(0.0);
    structural_zeros = 1;
    if (std::abs(slope) <= 1e-12 * scale) {
      N = N.deflate(0.0);
      structural_zeros = 2;
      slope = 0.0;
    }
  }

  for (cplx r : N.roots()) {
    r = newton_polish(spec, kill, r);
    if (real_model && std::abs(r.imag()) < 1e-10 * std::abs(r)) r = r.real();
    if (std::abs(r.real()) < 1e-9 * (1.0 + std::abs(r))) {
      std::ostringstream os;
      os << "root " << r << " of phi lies on the imaginary axis";
      fail(ErrorCode::RootClassificationAmbiguous, os.str());
    }
    if (r.real() < 0.0)
      wh.betas.push_back(-r);
    else
      wh.thetas.push_back(r);
  }
  // the origin goes to psi when X drifts up (phi'(0) = E[X_1] >= 0), to psibar when it drifts down
  if (structural_zeros == 2) {
    wh.betas.push_back(0.0);
    wh.thetas.push_back(0.0);
  } else if (structural_zeros == 1) {
    (slope > 0.0 ? wh.betas : wh.thetas).push_back(0.0);
  }
  sort_roots(wh.betas);
  sort_roots(wh.thetas);
  wh.m = static_cast<int>(wh.betas.size());
  const int nneg = static_cast<int>(wh.etas.size());
  const int nth = static_cast<int>(wh.thetas.size());
  if (!(wh.m == wh.n || wh.m == wh.n + 1) || !(nth == nneg || nth == nneg + 1)) {
    std::ostringstream os;
    os << "root count mismatch: m=" << wh.m << " n=" << wh.n << " thetas=" << nth << " etas=" << nneg;
    fail(ErrorCode::RootClassificationAmbiguous, os.str());
  }
  wh.creeping = wh.m == wh.n + 1;
  require_simple(wh.betas, 1e-8, "factorize(betas)");
  require_simple(wh.thetas, 1e-8, "factorize(thetas)");
  return wh;
}

cplx psi_eval(const WHFactorization& wh, cplx lambda) {
  cplx v = 1.0;
  for (cplx b : wh.betas) v *= lambda + b;
  for (cplx g : wh.gammas) {
    const cplx d = lambda + g;
    if (std::abs(d) < 1e-12 * (1.0 + std::abs(lambda))) fail(ErrorCode::PoleEvaluation, "psi at a pole");
    v /= d;
  }
  return v;
}

cplx psibar_eval(const WHFactorization& wh, cplx lambda) {
  cplx v = wh.lead;
  for (cplx t : wh.thetas) v *= lambda - t;
  for (cplx e : wh.etas) {
    const cplx d = e - lambda;
    if (std::abs(d) < 1e-12 * (1.0 + std::abs(lambda))) fail(ErrorCode::PoleEvaluation, "psibar at a pole");
    v /= d;
  }
  return v;
}

UbarRepresentation ubar_representation(const WHFactorization& wh) {
  UbarRepresentation rep;
  const std::size_t nneg = wh.etas.size();
  if (wh.thetas.size() == nneg) rep.atom = ((nneg % 2) ? -1.0 : 1.0) / wh.lead;
  for (std::size_t k = 0; k < wh.thetas.size(); ++k) {
    const cplx th = wh.thetas[k];
    cplx num = 1.0, den = wh.lead;
    for (cplx e : wh.etas) num *= e - th;
    for (std::size_t l = 0; l < wh.thetas.size(); ++l)
      if (l != k) den *= th - wh.thetas[l];
    rep.terms.push_back({-num / den, th});
  }
  return rep;
}

cplx ubar_window(const UbarRepresentation& rep, double x, cplx lambda) {
  cplx v = rep.atom;
  for (const auto& t : rep.terms) v += t.u * window_factor(t.theta - lambda, x);
  return v;
}

cplx ubar_tail(const UbarRepresentation& rep, double x, cplx lambda) {
  cplx v = 0.0;
  for (const auto& t : rep.terms) {
    if (!(lambda.real() < t.theta.real()))
      fail(ErrorCode::DivergentTransform, "ubar_tail outside its convergence half-plane");
    v += t.u * std::exp(-(t.theta - lambda) * x) / (t.theta - lambda);
  }
  return v;
}

cplx ubar_density(const UbarRepresentation& rep, double x) {
  cplx v = 0.0;
  for (const auto& t : rep.terms) v += t.u * std::exp(-t.theta * x);
  return v;
}

cplx psibar_over_pole(const WHFactorization& wh, std::size_t k, cplx lambda) {
  const cplx th = wh.thetas[k];
  cplx v = 1.0;
  for (cplx e : wh.etas) v *= (e - th) / (e - lambda);
  for (std::size_t l = 0; l < wh.thetas.size(); ++l)
    if (l != k) v *= (lambda - wh.thetas[l]) / (th - wh.thetas[l]);
  return v;
}

cplx psibar_times_tail(const WHFactorization& wh, double x, cplx lambda) {
  cplx v = 0.0;
  for (std::size_t k = 0; k < wh.thetas.size(); ++k)
    v += std::exp(-(wh.thetas[k] - lambda) * x) * psibar_over_pole(wh, k, lambda);
  return v;
}

PartialFractions maximum_coefficients(const WHFactorization& wh) {
  cplx ratio = 1.0;
  CVec poles;
  for (cplx b : wh.betas) {
    if (b == cplx(0.0)) fail(ErrorCode::NotDefined, "supremum is infinite: X drifts to +inf without killing");
    ratio *= b;
    poles.push_back(-b);
  }
  CVec ng;
  for (cplx g : wh.gammas) {
    ratio /= g;
    ng.push_back(-g);
  }
  return partial_fractions(Polynomial::from_roots(ng, ratio), poles, 1.0);
}

ExpPolyMeasure maximum_law(const WHFactorization& wh) {
  const auto pf = maximum_coefficients(wh);
  ExpPolyMeasure law;
  if (pf.constant != cplx(0.0)) law.add_atom(0.0, pf.constant);
  for (std::size_t i = 0; i < pf.poles.size(); ++i)
    law.add_term(ExpTerm{pf.residues[i], 0, -pf.poles[i], 0.0, 0.0, kInf});
  return law;
}

ExpPolyMeasure minimum_law(const UbarRepresentation& rep, cplx psibar0) {
  ExpPolyMeasure law;
  if (rep.atom != cplx(0.0)) law.add_atom(0.0, psibar0 * rep.atom);
  for (const auto& t : rep.terms) law.add_term(ExpTerm{psibar0 * t.u, 0, -t.theta, 0.0, -kInf, 0.0});
  return law;
}

ExpPolyMeasure overshoot_law(const WHFactorization& wh, const PartialFractions& mc, double x) {
  // E[e^{-l (X_{T^x} - x)}; T^x < zeta] = psi(l)/psi(0) * sum a_i e^{-b_i x}/(l + b_i)
  cplx psi0 = 1.0;
  for (cplx b : wh.betas) psi0 *= b;
  for (cplx g : wh.gammas) psi0 /= g;
  Polynomial num;
  const std::size_t m = mc.poles.size();
  for (std::size_t i = 0; i < m; ++i) {
    CVec others;
    for (std::size_t l = 0; l < m; ++l)
      if (l != i) others.push_back(mc.poles[l]);
    num = num + Polynomial::from_roots(others, mc.residues[i] * std::exp(mc.poles[i] * x) / psi0);
  }
  CVec ng;
  for (cplx g : wh.gammas) ng.push_back(-g);
  const auto pf = partial_fractions(num, ng, 1.0);
  ExpPolyMeasure law;
  if (pf.constant != cplx(0.0)) law.add_atom(0.0, pf.constant);
  for (std::size_t j = 0; j < ng.size(); ++j) law.add_term(ExpTerm{pf.residues[j], 0, wh.gammas[j], 0.0, 0.0, kInf});
  return law;
}

cplx downward_passage_transform(const WHFactorization& wh, double x, cplx lambda) {
  if (lambda.real() > 0.0) fail(ErrorCode::DivergentTransform, "downward passage transform needs Re l <= 0");
  return psibar_times_tail(wh, x, lambda);
}

}  // namespace levyexit
