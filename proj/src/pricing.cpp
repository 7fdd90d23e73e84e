#include "levyexit/pricing.hpp"

#include <algorithm>
#include <cmath>

#include "levyexit/errors.hpp"

namespace levyexit {

double BarrierContract::log_lower() const { return -std::log(lower / y0); }
double BarrierContract::log_upper() const { return std::log(upper / y0); }

void validate_contract(const BarrierContract& c) {
  auto pos = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!pos(c.y0) || !pos(c.strike) || !pos(c.lower) || !pos(c.upper))
    fail(ErrorCode::InvalidContract, "prices and barriers must be positive");
  if (!(c.lower < c.y0 && c.y0 < c.upper)) fail(ErrorCode::InvalidContract, "need lower < y0 < upper");
  if (!pos(c.maturity)) fail(ErrorCode::InvalidContract, "maturity must be positive");
  if (!(c.rebate_up >= 0.0) || !(c.rebate_down >= 0.0) || !(c.discount_rate >= 0.0))
    fail(ErrorCode::InvalidContract, "rebates and discount rate must be nonnegative");
}

void validate_params(const InversionParams& p) {
  if (p.method != "euler") fail(ErrorCode::InvalidParams, "unknown inversion method '" + p.method + "'");
  if (p.terms < 20) fail(ErrorCode::InvalidParams, "inversion needs terms >= 20");
  if (p.burnin < 1) fail(ErrorCode::InvalidParams, "inversion needs burnin >= 1");
  if (!(p.tuning > 0.0)) fail(ErrorCode::InvalidParams, "inversion tuning must be positive");
}

namespace {

/// int_{[z0, x]} (y0 e^{y+z} - K) A_x(dz)
cplx payoff_against_sup(const ExpPolyMeasure& am, double y, double z0, double x, const BarrierContract& c) {
  const auto part = am.restricted(z0, x);
  return c.y0 * std::exp(y) * part.laplace(-1.0) - c.strike * part.mass();
}

/// Adaptive integral with geometric breakpoints near both ends, where the kernels
/// concentrate on a length scale h when |q| is large.
cplx integrate_graded(const std::function<cplx(double)>& g, double lo, double hi, double h, const QuadOptions& opt) {
  std::vector<double> cuts{lo, hi};
  for (double w = h; w < 0.25 * (hi - lo); w *= 4.0) {
    cuts.push_back(lo + w);
    cuts.push_back(hi - w);
  }
  std::sort(cuts.begin(), cuts.end());
  cplx v = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) v += integrate(g, cuts[i], cuts[i + 1], opt);
  return v;
}

}  // namespace

cplx q_domain_ko_potential(const LevyModelSpec& spec, cplx q, const BarrierContract& c, const QuadOptions& opt) {
  validate_contract(c);
  if (!(q.real() > 0.0)) fail(ErrorCode::InvalidParams, "KO potential needs Re q > 0");
  const double at = c.log_lower(), bt = c.log_upper(), k = std::log(c.strike / c.y0);
  if (k >= bt) return 0.0;
  BundleCache cache(factorize_model(spec, q));

  auto g = [&](double y) -> cplx {
    const double x = bt - y;
    const auto kb = cache.get(x);
    const double z0 = std::max(0.0, k - y);
    return Abar_density(*kb, y) * payoff_against_sup(A_measure(*kb), y, z0, x, c);
  };
  // the potential decays like |q|^{-3/2}; keep the absolute tolerance below it
  QuadOptions local = opt;
  const double aq = std::max(1.0, std::abs(q));
  local.abs_tol = opt.abs_tol / (aq * std::sqrt(aq));
  const double h = 1.0 / std::sqrt(aq);
  cplx v = 0.0;
  if (k > -at && k < 0.0)
    v = integrate_graded(g, -at, k, h, local) + integrate_graded(g, k, 0.0, h, local);
  else
    v = integrate_graded(g, -at, 0.0, h, local);
  const cplx d = cache.model()->rep.atom;
  if (d != cplx(0.0)) {
    const auto kb = cache.get(bt);
    v += d * payoff_against_sup(A_measure(*kb), 0.0, std::max(0.0, k), bt, c);
  }
  return v;
}

double q_domain_ko_value(const LevyModelSpec& spec, const BarrierContract& c, const QuadOptions& opt) {
  if (!(spec.kill_q > 0.0)) fail(ErrorCode::InvalidParams, "q-domain value needs kill_q > 0");
  return (spec.kill_q * q_domain_ko_potential(spec, spec.kill_q, c, opt)).real();
}

RebateTerms q_domain_rebate(const LevyModelSpec& spec, const BarrierContract& c, const QuadOptions& opt) {
  validate_contract(c);
  if (!(spec.kill_q > 0.0)) fail(ErrorCode::InvalidParams, "q-domain rebate needs kill_q > 0");
  RebateTerms r;
  if (c.rebate_up == 0.0 && c.rebate_down == 0.0) return r;
  const auto e = two_sided_exit(spec, c.log_lower(), c.log_upper(), opt);
  r.up_term = c.rebate_up * e.prob_up.real();
  r.down_term = c.rebate_down * e.prob_down.real();
  return r;
}

std::vector<double> invert_laplace_many(const std::function<std::vector<cplx>(cplx)>& F, double t,
                                        const InversionParams& p) {
  validate_params(p);
  if (!(t > 0.0)) fail(ErrorCode::InvalidParams, "inversion time must be positive");
  const double A = p.tuning;
  const int total = p.burnin + p.terms;
  // partial sums s_n = sum_{k<=n} (-1)^k Re F((A + 2 pi i k)/(2t)), first term halved
  std::vector<std::vector<double>> partial;
  std::vector<double> run;
  for (int kk = 0; kk <= total; ++kk) {
    const cplx q((A / (2.0 * t)), M_PI * kk / t);
    const auto vals = F(q);
    if (run.empty()) run.assign(vals.size(), 0.0);
    const double sign = (kk % 2) ? -1.0 : 1.0;
    const double w = kk == 0 ? 0.5 : 1.0;
    for (std::size_t i = 0; i < vals.size(); ++i) run[i] += sign * w * vals[i].real();
    if (kk >= p.burnin) partial.push_back(run);
  }
  const double pref = std::exp(A / 2.0) / t;
  auto euler = [&](int M, std::size_t i) {
    double s = 0.0, c = std::ldexp(1.0, -M);
    for (int j = 0; j <= M; ++j) {
      s += c * partial[j][i];
      c *= static_cast<double>(M - j) / (j + 1);
    }
    return pref * s;
  };
  std::vector<double> out(run.size());
  for (std::size_t i = 0; i < run.size(); ++i) {
    out[i] = euler(p.terms, i);
    // the averaged sums should settle; a loose bound only flags genuine oscillation
    const double prev = [&] {
      double s = 0.0, c = std::ldexp(1.0, -(p.terms - 1));
      for (int j = 0; j <= p.terms - 1; ++j) {
        s += c * partial[j + 1][i];
        c *= static_cast<double>(p.terms - 1 - j) / (j + 1);
      }
      return pref * s;
    }();
    if (std::abs(out[i] - prev) > 1e-3 * (1.0 + std::abs(out[i])))
      fail(ErrorCode::OscillationDetected, "Euler partial sums do not contract");
  }
  return out;
}

double invert_laplace(const std::function<cplx(cplx)>& F, double t, const InversionParams& p) {
  return invert_laplace_many([&](cplx q) { return std::vector<cplx>{F(q)}; }, t, p)[0];
}

double invert_laplace_stehfest(const std::function<double(double)>& F, double t, int n) {
  if (n % 2 || n < 2) fail(ErrorCode::InvalidParams, "Stehfest needs an even number of terms");
  const int h = n / 2;
  auto fact = [](int k) {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
  };
  const double ln2 = std::log(2.0);
  double s = 0.0;
  for (int k = 1; k <= n; ++k) {
    double v = 0.0;
    for (int j = (k + 1) / 2; j <= std::min(k, h); ++j)
      v += std::pow(j, h) * fact(2 * j) / (fact(h - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
    v *= ((k + h) % 2) ? -1.0 : 1.0;
    s += v * F(k * ln2 / t);
  }
  return s * ln2 / t;
}

PriceBreakdown price(const LevyModelSpec& spec, const BarrierContract& c, const InversionParams& p,
                     const QuadOptions& opt) {
  validate_contract(c);
  validate_params(p);
  require_valid(spec);
  if (spec.kill_q != 0.0) fail(ErrorCode::InvalidParams, "price expects an unkilled model (kill_q = 0)");
  const double at = c.log_lower(), bt = c.log_upper();
  const bool rebates = c.rebate_up != 0.0 || c.rebate_down != 0.0;
  auto F = [&](cplx q) {
    std::vector<cplx> v(3, 0.0);
    v[0] = q_domain_ko_potential(spec, q, c, opt);
    if (rebates) {
      const auto e = two_sided_exit(std::make_shared<BundleCache>(factorize_model(spec, q)), at, bt, opt);
      v[1] = e.prob_up / q;
      v[2] = e.prob_down / q;
    }
    return v;
  };
  const auto inv = invert_laplace_many(F, c.maturity, p);
  PriceBreakdown out;
  out.discount_factor = std::exp(-c.discount_rate * c.maturity);
  out.ko_component = out.discount_factor * inv[0];
  out.rebate_up_component = out.discount_factor * c.rebate_up * inv[1];
  out.rebate_down_component = out.discount_factor * c.rebate_down * inv[2];
  out.price = out.ko_component + out.rebate_up_component + out.rebate_down_component;
  out.nodes = p.burnin + p.terms + 1;
  return out;
}

}  // namespace levyexit
