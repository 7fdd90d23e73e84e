#include "levyexit/exit_laws.hpp"

#include "levyexit/errors.hpp"

namespace levyexit {

namespace {

ExpPolyMeasure ubar_measure(const UbarRepresentation& rep, double lo) {
  ExpPolyMeasure u;
  if (rep.atom != cplx(0.0)) u.add_atom(0.0, rep.atom);
  for (const auto& t : rep.terms) u.add_term(ExpTerm{t.u, 0, -t.theta, 0.0, lo, 0.0});
  return u;
}

cplx kill_factor(const FactorizedModel& fm) { return fm.potential_mode() ? cplx(1.0) : fm.kill; }

cplx overshoot_head(const KernelBundle& b) { return b.creeping ? b.bbar[0] : cplx(0.0); }
cplx overshoot_coef(const KernelBundle& b, int j) { return -b.bbar[j + (b.creeping ? 1 : 0)]; }

}  // namespace

ExpPolyMeasure m_measure_by_convolution(const UbarRepresentation& rep, cplx beta, double x) {
  const auto f = ExpPolyMeasure::exponential(1.0, beta, -x, 0.0, -x);
  return convolve(f, ubar_measure(rep, -x)).restricted(-x, 0.0);
}

cplx triple_potential(const KernelBundle& b, cplx lambda1, cplx lambda2) {
  return func_Abar(b, lambda1) * func_A(b, lambda2);
}

TripleLaw triple_law(const KernelBundle& b) {
  TripleLaw t;
  t.x = b.x;
  t.potential_mode = b.model->potential_mode();
  t.A0 = func_A(b, 0.0);
  t.Abar0 = func_Abar(b, 0.0);
  t.range_prob = kill_factor(*b.model) * t.A0 * t.Abar0;

  ExpPolyMeasure inf = ubar_measure(b.rep(), -b.x);
  ExpPolyMeasure sup;
  if (!b.creeping) sup.add_atom(0.0, 1.0);
  for (int i = 0; i < b.m; ++i) {
    const auto mi = m_measure_by_convolution(b.rep(), b.wh().betas[i], b.x);
    inf = inf - mi.scaled(b.abar_hat[i]);
    sup = sup - mi.shifted(b.x).scaled(b.a_hat[i]);
  }
  t.inf_law = inf.scaled(1.0 / t.Abar0).compressed();
  t.sup_law = sup.scaled(1.0 / t.A0).compressed();
  return t;
}

VxLaw law_at_Vx(const KernelBundle& b) {
  const auto& g = b.wh().gammas;
  CVec ng;
  for (cplx v : g) ng.push_back(-v);
  const Polynomial G = Polynomial::from_roots(ng);
  Polynomial P = b.creeping ? G * Polynomial(CVec{b.cbar[0], 1.0}) : G;
  const std::size_t off = b.creeping ? 1 : 0;
  for (int j = 0; j < b.n; ++j) {
    CVec others;
    for (int l = 0; l < b.n; ++l)
      if (l != j) others.push_back(ng[l]);
    P = P - Polynomial::from_roots(others, b.cbar[j + off]);
  }
  const CVec roots = P.roots();
  require_simple(roots, 1e-8, "law_at_Vx(B roots)");
  const auto pf = partial_fractions(G, roots, 1.0);

  VxLaw law;
  const cplx cb0 = func_Cbar(b, 0.0);
  law.prob = cb0 / func_B(b, 0.0);
  if (pf.constant != cplx(0.0)) law.sup_law.add_atom(0.0, cb0 * pf.constant);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const cplx rate = -roots[i];
    if (!(rate.real() > 0.0)) fail(ErrorCode::NotDefined, "B(x, .) has a root in the right half-plane");
    law.rates.push_back(rate);
    law.sup_law.add_term(ExpTerm{cb0 * pf.residues[i], 0, rate, 0.0, 0.0, kInf});
  }
  auto keep = std::make_shared<KernelBundle>(b);
  const cplx b0 = func_B(b, 0.0);
  law.undershoot_transform = [keep, b0](cplx l) { return func_Cbar(*keep, l) / b0; };
  return law;
}

VupxLaw law_at_Vupx(const KernelBundle& b, double neumann_tol) {
  VupxLaw law;
  const cplx c0 = func_C(b, 0.0);
  const cplx bb0 = func_Bbar(b, 0.0);
  law.prob = c0 / bb0;
  const cplx head = overshoot_head(b);
  if (head != cplx(0.0)) law.overshoot_law.add_atom(0.0, head / bb0);
  for (int j = 0; j < b.n; ++j)
    law.overshoot_law.add_term(ExpTerm{overshoot_coef(b, j) / bb0, 0, b.wh().gammas[j], 0.0, 0.0, kInf});

  const auto& rep = b.rep();
  double bound = 0.0;
  bool decays = true;
  for (const auto& t : rep.terms) {
    cplx s = -head;
    for (int j = 0; j < b.n; ++j) s -= overshoot_coef(b, j) / (t.theta + b.wh().gammas[j]);
    const cplx alpha = t.u * std::exp(-t.theta * b.x) * s;
    law.mu.add_term(ExpTerm{alpha, 0, -t.theta, 0.0, -kInf, 0.0});
    if (!(t.theta.real() > 1e-12)) decays = false;
    if (decays) bound += std::abs(alpha) / t.theta.real();
  }
  if (!decays) return law;  // U has infinite mass; only prob and the overshoot are defined
  law.mu_total_variation = bound < 1.0 ? bound : law.mu.total_variation();
  const double tv = law.mu_total_variation;
  if (tv >= 1.0 - 1e-12)
    fail(ErrorCode::NeumannDivergence,
         "Neumann kernel has total variation " + std::to_string(tv) + " >= 1 at x=" + std::to_string(b.x));

  ExpPolyMeasure power = ubar_measure(rep, -kInf);
  ExpPolyMeasure sum = power;
  int k = 0;
  double tail = tv / (1.0 - tv);
  while (tail >= neumann_tol && k < 2000) {
    power = convolve(power, law.mu);
    sum = (sum + power).compressed();
    ++k;
    tail *= tv;
    const cplx m = power.mass();
    if (!std::isfinite(m.real()) || !std::isfinite(m.imag()))
      fail(ErrorCode::NeumannDivergence, "Neumann series lost precision after " + std::to_string(k) +
                                             " terms (kernel total variation " + std::to_string(tv) + ")");
  }
  law.neumann_terms = k;
  law.inf_law = sum.scaled(c0);
  law.inf_law_available = true;
  return law;
}

UxLaw law_at_Ux(const KernelBundle& b) {
  UxLaw law;
  const auto t = triple_law(b);
  const cplx c0 = func_C(b, 0.0);
  const cplx cb0 = func_Cbar(b, 0.0);
  law.prob_bottom = t.A0 * cb0;
  law.prob_top = t.Abar0 * c0;
  law.range_prob = t.range_prob;
  law.sup_at_bottom = t.sup_law;
  law.inf_at_top = t.inf_law;
  auto keep = std::make_shared<KernelBundle>(b);
  law.undershoot_at_bottom = [keep, cb0](cplx l) { return func_Cbar(*keep, l) / cb0; };
  const cplx head = overshoot_head(b);
  if (head != cplx(0.0)) law.overshoot_at_top.add_atom(0.0, head / c0);
  for (int j = 0; j < b.n; ++j)
    law.overshoot_at_top.add_term(ExpTerm{overshoot_coef(b, j) / c0, 0, b.wh().gammas[j], 0.0, 0.0, kInf});
  return law;
}

RangeDensity joint_range_density(const BundleCache& cache, double y, double z, double x) {
  if (y > 0.0 || y < -x || z < 0.0 || z > x) fail(ErrorCode::InvalidParams, "joint_range_density outside the range box");
  const auto b = cache.get(x);
  const cplx f = kill_factor(*cache.model());
  const cplx inf_atom = b->rep().atom;
  const cplx sup_atom = b->creeping ? cplx(0.0) : cplx(1.0);
  const cplx di = y < 0.0 ? Abar_density(*b, y) : cplx(0.0);
  const cplx ds = z > 0.0 ? A_density(*b, z) : cplx(0.0);
  RangeDensity r;
  r.continuous = f * di * ds;
  r.atom_y0 = f * inf_atom * ds;
  r.atom_z0 = f * di * sup_atom;
  r.atom_both = f * inf_atom * sup_atom;
  return r;
}

ExitSplit two_sided_exit(std::shared_ptr<BundleCache> cache, double a, double bb, const QuadOptions& opt) {
  if (!(a > 0.0) || !(bb > 0.0)) fail(ErrorCode::InvalidParams, "two_sided_exit needs a, b > 0");
  const auto& fm = *cache->model();
  const cplx f = kill_factor(fm);
  const int n = fm.wh.n;
  const bool creeping = fm.wh.creeping;
  const cplx d = fm.rep.atom;

  // entries: up, none, overshoot head, overshoot coefficients per gamma
  auto up_values = [&](const KernelBundle& kb, cplx weight) {
    Eigen::VectorXcd v(3 + n);
    v[0] = func_C(kb, 0.0) * weight;
    v[1] = f * func_A(kb, 0.0) * weight;
    v[2] = overshoot_head(kb) * weight;
    for (int j = 0; j < n; ++j) v[3 + j] = overshoot_coef(kb, j) * weight;
    return v;
  };
  auto up_integrand = [&](double y) {
    const auto kb = cache->get(bb - y);
    return up_values(*kb, Abar_density(*kb, y));
  };
  Eigen::VectorXcd up = integrate(up_integrand, -a, 0.0, opt);
  if (d != cplx(0.0)) up += up_values(*cache->get(bb), d);

  auto down_integrand = [&](double s) {
    const auto kb = cache->get(a + s);
    return func_Cbar(*kb, 0.0) * A_density(*kb, s);
  };
  cplx down = integrate(down_integrand, 0.0, bb, opt);
  if (!creeping) down += func_Cbar(*cache->get(a), 0.0);

  ExitSplit e;
  e.a = a;
  e.b = bb;
  e.prob_up = up[0];
  e.prob_none = up[1];
  e.prob_down = down;
  if (up[2] != cplx(0.0)) e.up_overshoot.add_atom(0.0, up[2]);
  for (int j = 0; j < n; ++j) e.up_overshoot.add_term(ExpTerm{up[3 + j], 0, fm.wh.gammas[j], 0.0, 0.0, kInf});

  e.up_inf_density = [cache, bb](double y) {
    const auto kb = cache->get(bb - y);
    return func_C(*kb, 0.0) * Abar_density(*kb, y);
  };
  e.up_inf_atom = d * func_C(*cache->get(bb), 0.0);
  e.down_sup_density = [cache, a](double s) {
    const auto kb = cache->get(a + s);
    return func_Cbar(*kb, 0.0) * A_density(*kb, s);
  };
  e.down_sup_atom = creeping ? cplx(0.0) : func_Cbar(*cache->get(a), 0.0);
  e.down_law_transform = [cache, a, bb, creeping, opt](cplx l) {
    auto g = [&](double s) {
      const auto kb = cache->get(a + s);
      return std::exp(-l * (s + a)) * func_Cbar(*kb, l) * A_density(*kb, s);
    };
    cplx v = integrate(g, 0.0, bb, opt);
    if (!creeping) v += std::exp(-l * a) * func_Cbar(*cache->get(a), l);
    return v;
  };
  return e;
}

ExitSplit two_sided_exit(const LevyModelSpec& spec, double a, double b, const QuadOptions& opt) {
  return two_sided_exit(std::make_shared<BundleCache>(factorize_model(spec)), a, b, opt);
}

}  // namespace levyexit
