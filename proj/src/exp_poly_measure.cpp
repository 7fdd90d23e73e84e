#include "levyexit/exp_poly_measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "levyexit/errors.hpp"
#include "levyexit/quadrature.hpp"

namespace levyexit {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double ipow(double z, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= z;
  return r;
}

/// antiderivative of u^k e^{-d u}: -e^{-d u} sum_i k!/(k-i)! u^{k-i} / d^{i+1}
cplx antiderivative(int k, cplx d, double u) {
  cplx sum = 0.0, fall = 1.0, dp = d;
  for (int i = 0; i <= k; ++i) {
    sum += fall * ipow(u, k - i) / dp;
    fall *= static_cast<double>(k - i);
    dp *= d;
  }
  return -std::exp(-d * u) * sum;
}

bool same_rate(cplx r1, cplx r2) {
  return std::abs(r1 - r2) < 1e-8 * (1.0 + std::max(std::abs(r1), std::abs(r2)));
}

}  // namespace

cplx ExpTerm::density(double y) const {
  if (y < lo || y > hi) return 0.0;
  const double u = y - anchor;
  return coef * ipow(u, power) * std::exp(-rate * u);
}

cplx integral_pow_exp(int p, cplx r, double a, double b) {
  if (a == b) return 0.0;
  if (a > b) return -integral_pow_exp(p, r, b, a);
  const bool fin = std::isfinite(a) && std::isfinite(b);
  if (fin && std::abs(r) * std::max(std::abs(a), std::abs(b)) <= 0.5) {
    // series: sum_k (-r)^k/k! (b^{p+k+1} - a^{p+k+1})/(p+k+1)
    cplx sum = 0.0, c = 1.0;
    for (int k = 0; k < 60; ++k) {
      const int e = p + k + 1;
      const cplx t = c * (ipow(b, e) - ipow(a, e)) / static_cast<double>(e);
      sum += t;
      if (k > 2 && std::abs(t) <= 1e-18 * std::abs(sum)) break;
      c *= -r / static_cast<double>(k + 1);
    }
    return sum;
  }
  if (!std::isfinite(b) && !(r.real() > 0.0))
    fail(ErrorCode::DivergentTransform, "integral_pow_exp: no decay at +inf");
  if (!std::isfinite(a) && !(r.real() < 0.0))
    fail(ErrorCode::DivergentTransform, "integral_pow_exp: no decay at -inf");
  const cplx gb = std::isfinite(b) ? antiderivative(p, r, b) : cplx(0.0);
  const cplx ga = std::isfinite(a) ? antiderivative(p, r, a) : cplx(0.0);
  return gb - ga;
}

ExpPolyMeasure ExpPolyMeasure::dirac(double at, cplx mass) {
  ExpPolyMeasure m;
  m.add_atom(at, mass);
  return m;
}

ExpPolyMeasure ExpPolyMeasure::exponential(cplx coef, cplx rate, double lo, double hi, double anchor) {
  ExpPolyMeasure m;
  m.add_term(ExpTerm{coef, 0, rate, anchor, lo, hi});
  return m;
}

ExpPolyMeasure& ExpPolyMeasure::add_atom(double at, cplx mass) {
  atoms.push_back({at, mass});
  return *this;
}

ExpPolyMeasure& ExpPolyMeasure::add_term(const ExpTerm& t) {
  if (t.hi > t.lo) terms.push_back(t);
  return *this;
}

cplx ExpPolyMeasure::mass() const {
  cplx s = 0.0;
  for (const auto& a : atoms) s += a.mass;
  for (const auto& t : terms) s += t.coef * integral_pow_exp(t.power, t.rate, t.lo - t.anchor, t.hi - t.anchor);
  return s;
}

cplx ExpPolyMeasure::cdf(double y) const {
  cplx s = 0.0;
  for (const auto& a : atoms)
    if (a.location <= y) s += a.mass;
  for (const auto& t : terms) {
    if (y <= t.lo) continue;
    const double top = std::min(y, t.hi);
    s += t.coef * integral_pow_exp(t.power, t.rate, t.lo - t.anchor, top - t.anchor);
  }
  return s;
}

cplx ExpPolyMeasure::density(double y) const {
  cplx s = 0.0;
  for (const auto& t : terms) s += t.density(y);
  return s;
}

cplx ExpPolyMeasure::laplace(cplx lambda) const {
  cplx s = 0.0;
  for (const auto& a : atoms) s += a.mass * std::exp(-lambda * a.location);
  for (const auto& t : terms)
    s += t.coef * std::exp(-lambda * t.anchor) *
         integral_pow_exp(t.power, t.rate + lambda, t.lo - t.anchor, t.hi - t.anchor);
  return s;
}

double ExpPolyMeasure::total_variation() const {
  double tv = 0.0;
  for (const auto& a : atoms) tv += std::abs(a.mass);
  if (terms.empty()) return tv;
  std::vector<double> br;
  for (const auto& t : terms) {
    br.push_back(t.lo);
    br.push_back(t.hi);
  }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  auto f = [&](double y) { return std::abs(density(y)); };
  QuadOptions opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-14;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double a = br[i], b = br[i + 1];
    if (!std::isfinite(a) && !std::isfinite(b)) {
      tv += integrate_from_neg_inf(f, 0.0, opt) + integrate_to_inf(f, 0.0, opt);
    } else if (!std::isfinite(a)) {
      tv += integrate_from_neg_inf(f, b, opt);
    } else if (!std::isfinite(b)) {
      tv += integrate_to_inf(f, a, opt);
    } else {
      tv += integrate(f, a, b, opt);
    }
  }
  return tv;
}

ExpPolyMeasure ExpPolyMeasure::restricted(double lo, double hi) const {
  ExpPolyMeasure m;
  for (const auto& a : atoms)
    if (a.location >= lo && a.location <= hi) m.atoms.push_back(a);
  for (auto t : terms) {
    t.lo = std::max(t.lo, lo);
    t.hi = std::min(t.hi, hi);
    m.add_term(t);
  }
  return m;
}

ExpPolyMeasure ExpPolyMeasure::shifted(double by) const {
  ExpPolyMeasure m = *this;
  for (auto& a : m.atoms) a.location += by;
  for (auto& t : m.terms) {
    t.anchor += by;
    t.lo += by;
    t.hi += by;
  }
  return m;
}

ExpPolyMeasure ExpPolyMeasure::scaled(cplx s) const {
  ExpPolyMeasure m = *this;
  for (auto& a : m.atoms) a.mass *= s;
  for (auto& t : m.terms) t.coef *= s;
  return m;
}

ExpPolyMeasure ExpPolyMeasure::operator+(const ExpPolyMeasure& o) const {
  ExpPolyMeasure m = *this;
  m.atoms.insert(m.atoms.end(), o.atoms.begin(), o.atoms.end());
  m.terms.insert(m.terms.end(), o.terms.begin(), o.terms.end());
  return m;
}

ExpPolyMeasure ExpPolyMeasure::operator-(const ExpPolyMeasure& o) const { return *this + o.scaled(-1.0); }

ExpPolyMeasure ExpPolyMeasure::compressed() const {
  ExpPolyMeasure m;
  std::map<double, std::size_t> at_index;
  for (const auto& a : atoms) {
    auto [it, fresh] = at_index.try_emplace(a.location, m.atoms.size());
    if (fresh)
      m.atoms.push_back(a);
    else
      m.atoms[it->second].mass += a.mass;
  }
  using Key = std::tuple<int, double, double, double, double, double>;
  std::map<Key, std::size_t> term_index;
  for (const auto& t : terms) {
    Key k{t.power, t.rate.real(), t.rate.imag(), t.anchor, t.lo, t.hi};
    auto [it, fresh] = term_index.try_emplace(k, m.terms.size());
    if (fresh)
      m.terms.push_back(t);
    else
      m.terms[it->second].coef += t.coef;
  }
  std::erase_if(m.atoms, [](const PointMass& a) { return a.mass == cplx(0.0); });
  std::erase_if(m.terms, [](const ExpTerm& t) { return t.coef == cplx(0.0); });
  return m;
}

double ExpPolyMeasure::support_lo() const {
  double v = kInf;
  for (const auto& a : atoms) v = std::min(v, a.location);
  for (const auto& t : terms) v = std::min(v, t.lo);
  return v;
}

double ExpPolyMeasure::support_hi() const {
  double v = -kInf;
  for (const auto& a : atoms) v = std::max(v, a.location);
  for (const auto& t : terms) v = std::max(v, t.hi);
  return v;
}

namespace {

/// One limit of the inner integral on a z-piece: u = const, or u = z - (anchor1 + edge).
struct Limit {
  bool linear;
  double value;  // u* when constant, the other term's edge when linear
};

/// Adds sign * [antiderivative at the limit] as terms supported on [za, zb].
void emit_limit(const ExpTerm& t1, const ExpTerm& t2, cplx c, cplx delta, bool equal, const Limit& lim,
                double sign, double za, double zb, std::vector<ExpTerm>& out) {
  const int p1 = t1.power, p2 = t2.power;
  const double A = t1.anchor + t2.anchor;
  if (!lim.linear) {
    const double us = lim.value;
    if (!std::isfinite(us)) {
      // vanishing boundary term at +-inf; convergence is required
      const bool ok = equal ? false : (us > 0 ? delta.real() > 0.0 : delta.real() < 0.0);
      if (!ok) fail(ErrorCode::DivergentTransform, "convolution integral diverges");
      return;
    }
    for (int j = 0; j <= p2; ++j) {
      const int K = p1 + j;
      const cplx val = equal ? cplx(ipow(us, K + 1) / (K + 1)) : antiderivative(K, delta, us);
      const cplx coef = sign * c * binom(p2, j) * ((j % 2) ? -1.0 : 1.0) * val;
      if (coef != cplx(0.0)) out.push_back(ExpTerm{coef, p2 - j, t2.rate, A, za, zb});
    }
    return;
  }
  const double h = lim.value - t2.anchor;
  const double anchor = A + h;
  const cplx eh = std::exp(-t2.rate * h);
  for (int j = 0; j <= p2; ++j) {
    const int K = p1 + j;
    const double bj = binom(p2, j) * ((j % 2) ? -1.0 : 1.0);
    const int q = p2 - j;
    for (int l = 0; l <= q; ++l) {
      const double bl = binom(q, l) * ipow(h, q - l);
      if (equal) {
        const cplx coef = sign * c * bj * eh * bl / static_cast<double>(K + 1);
        out.push_back(ExpTerm{coef, K + 1 + l, t2.rate, anchor, za, zb});
      } else {
        cplx fall = 1.0, dp = delta;
        for (int i = 0; i <= K; ++i) {
          const cplx coef = -sign * c * bj * eh * bl * fall / dp;
          out.push_back(ExpTerm{coef, K - i + l, t1.rate, anchor, za, zb});
          fall *= static_cast<double>(K - i);
          dp *= delta;
        }
      }
    }
  }
}

void convolve_terms(ExpTerm t1, ExpTerm t2, std::vector<ExpTerm>& out) {
  // the binomial expansion runs over the second power; keep it the smaller one
  if (t2.power > t1.power) std::swap(t1, t2);
  const cplx c = t1.coef * t2.coef;
  const bool equal = same_rate(t1.rate, t2.rate);
  const cplx delta = equal ? cplx(0.0) : t1.rate - t2.rate;
  const double L1 = t1.lo, H1 = t1.hi, L2 = t2.lo, H2 = t2.hi;

  std::vector<double> br;
  for (double v : {L1 + L2, L1 + H2, H1 + L2, H1 + H2})
    if (!std::isnan(v)) br.push_back(v);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  const double zlo = L1 + L2, zhi = H1 + H2;

  for (std::size_t k = 0; k + 1 < br.size(); ++k) {
    const double za = std::max(br[k], zlo), zb = std::min(br[k + 1], zhi);
    if (!(zb > za)) continue;
    double zs;
    if (std::isfinite(za) && std::isfinite(zb))
      zs = 0.5 * (za + zb);
    else if (std::isfinite(za))
      zs = za + 1.0;
    else if (std::isfinite(zb))
      zs = zb - 1.0;
    else
      zs = 0.0;
    // inner variable y ranges over [max(L1, z-H2), min(H1, z-L2)]
    const bool lo_const = !(zs - H2 > L1);
    const bool hi_const = !(zs - L2 < H1);
    const Limit lo = lo_const ? Limit{false, L1 - t1.anchor} : Limit{true, H2};
    const Limit hi = hi_const ? Limit{false, H1 - t1.anchor} : Limit{true, L2};
    emit_limit(t1, t2, c, delta, equal, hi, +1.0, za, zb, out);
    emit_limit(t1, t2, c, delta, equal, lo, -1.0, za, zb, out);
  }
}

}  // namespace

ExpPolyMeasure convolve(const ExpPolyMeasure& a, const ExpPolyMeasure& b) {
  ExpPolyMeasure m;
  for (const auto& x : a.atoms)
    for (const auto& y : b.atoms) m.atoms.push_back({x.location + y.location, x.mass * y.mass});
  auto shift_term = [](ExpTerm t, const PointMass& p) {
    t.coef *= p.mass;
    t.anchor += p.location;
    t.lo += p.location;
    t.hi += p.location;
    return t;
  };
  for (const auto& x : a.atoms)
    for (const auto& t : b.terms) m.add_term(shift_term(t, x));
  for (const auto& y : b.atoms)
    for (const auto& t : a.terms) m.add_term(shift_term(t, y));
  for (const auto& t1 : a.terms)
    for (const auto& t2 : b.terms) convolve_terms(t1, t2, m.terms);
  return m.compressed();
}

}  // namespace levyexit
