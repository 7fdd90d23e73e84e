#include <doctest.h>

#include "levyexit/quadrature.hpp"
#include "levyexit/wiener_hopf.hpp"
#include "test_models.hpp"

using namespace levyexit;
using namespace testmodels;

namespace {
const double r2 = std::sqrt(2.0);

double wh_error(const LevyModelSpec& s) {
  const auto wh = factorize(s);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const cplx l(0.0, -100.0 + 200.0 * k / 199.0);
    const cplx p = phi_eval(s, l);
    worst = std::max(worst, std::abs(psi_eval(wh, l) * psibar_eval(wh, l) - p) / (1.0 + std::abs(p)));
  }
  return worst;
}
}  // namespace

TEST_CASE("Gaussian factorization") {
  const auto wh = factorize(model_a());
  REQUIRE(wh.betas.size() == 1);
  CHECK(std::abs(wh.betas[0] - r2) < 1e-14);
  CHECK(wh.gammas.empty());
  CHECK(wh.m == 1);
  CHECK(wh.n == 0);
  CHECK(wh.creeping);
  CHECK(std::abs(psi_eval(wh, 0.0) - r2) < 1e-14);
  CHECK(std::abs(psibar_eval(wh, 0.0) - 1.0 / r2) < 1e-14);
  for (cplx l : {cplx(0.3, 0.0), cplx(-1.0, 2.0)}) CHECK(std::abs(psibar_eval(wh, l) - (r2 - l) / 2.0) < 1e-14);
  const auto rep = ubar_representation(wh);
  CHECK(std::abs(rep.atom) < 1e-15);
  REQUIRE(rep.terms.size() == 1);
  CHECK(std::abs(rep.terms[0].u - 2.0) < 1e-13);
  CHECK(std::abs(rep.terms[0].theta - r2) < 1e-14);
}

TEST_CASE("structural zero root for driftless unkilled Brownian motion") {
  const auto wh = factorize(LevyModelSpec{1.0, 0.0, 0.0, {}, {}});
  REQUIRE(wh.betas.size() == 1);
  CHECK(std::abs(wh.betas[0]) < 1e-14);
  CHECK(wh.m == 1);
}

TEST_CASE("Kou factorization") {
  const auto B = model_b();
  const auto wh = factorize(B);
  CHECK(wh.m == 2);
  CHECK(wh.n == 1);
  for (cplx b : wh.betas) {
    CHECK(std::abs(phi_eval(B, -b)) < 1e-9);
    CHECK(b.real() > 0.0);
  }
  // bisection on the real axis brackets each root independently of the companion matrix
  auto f = [&](double l) { return phi_eval(B, l).real(); };
  auto bisect = [&](double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (f(lo) * f(mid) <= 0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };
  CHECK(std::abs(-bisect(-1.0, -0.01) - wh.betas[0].real()) < 1e-9);
  CHECK(std::abs(-bisect(-30.0, -10.5) - wh.betas[1].real()) < 1e-9);
  CHECK(wh_error(B) < 1e-9);
}

TEST_CASE("WH identity and dichotomy across models") {
  for (const auto& [name, s] : killed_models()) {
    INFO(name);
    const auto wh = factorize(s);
    CHECK(wh_error(s) < 1e-9);
    const bool creeping_expected = s.sigma > 0.0 || s.mu > 0.0;
    CHECK(wh.creeping == creeping_expected);
    CHECK((wh.m == wh.n || wh.m == wh.n + 1));
    for (cplx b : wh.betas) CHECK(std::abs(phi_eval(s, -b)) < 1e-9 * (1 + std::abs(b)));
    for (cplx t : wh.thetas) CHECK(std::abs(phi_eval(s, t)) < 1e-9 * (1 + std::abs(t)));
    // psi is monic at infinity
    const double L = 1e7;
    CHECK(std::abs(psi_eval(wh, L) / std::pow(L, wh.m - wh.n) - 1.0) < 1e-5);
  }
}

TEST_CASE("Ubar representation identities") {
  for (const auto& [name, s] : killed_models()) {
    INFO(name);
    const auto wh = factorize(s);
    const auto rep = ubar_representation(wh);
    // 1/psibar = d + sum u/(theta - l) on Re l = -1
    for (double u = -100.0; u <= 100.0; u += 5.0) {
      const cplx l(-1.0, u);
      cplx v = rep.atom;
      for (const auto& t : rep.terms) v += t.u / (t.theta - l);
      CHECK(std::abs(v - 1.0 / psibar_eval(wh, l)) < 1e-9 * (1 + std::abs(v)));
    }
    // the atom is present exactly when the process cannot creep downward
    CHECK((std::abs(rep.atom) > 0.0) == (s.sigma == 0.0 && s.mu >= 0.0));
    // positivity of the density
    for (double y = -20.0; y < -1e-4; y *= 0.8) CHECK(ubar_density(rep, -y).real() > -1e-12);
    // total mass 1/psibar(0)
    cplx mass = rep.atom;
    for (const auto& t : rep.terms) mass += t.u / t.theta;
    CHECK(std::abs(mass - 1.0 / psibar_eval(wh, 0.0)) < 1e-10 * std::abs(mass));
  }
}

TEST_CASE("window, tail and density for the Gaussian model") {
  const auto rep = ubar_representation(factorize(model_a()));
  CHECK(std::abs(ubar_window(rep, 1.0, 0.0) - r2 * (1.0 - std::exp(-r2))) < 1e-13);
  CHECK(std::abs(ubar_window(rep, 1.0, r2) - 2.0) < 1e-13);
  CHECK(std::abs(ubar_window(rep, 1e-12, 0.3) - rep.atom) < 1e-10);
  CHECK(std::abs(ubar_tail(rep, 1.0, 0.0) - r2 * std::exp(-r2)) < 1e-13);
  CHECK(std::abs(ubar_tail(rep, 60.0, -0.5)) < 1e-20);
  CHECK(std::abs(ubar_density(rep, 1.0) - 2.0 * std::exp(-r2)) < 1e-13);
  CHECK_THROWS_AS(ubar_tail(rep, 1.0, 2.0), Error);
}

TEST_CASE("window plus tail is the full transform; density is minus the tail slope") {
  for (const auto& [name, s] : killed_models()) {
    INFO(name);
    const auto wh = factorize(s);
    const auto rep = ubar_representation(wh);
    for (cplx l : {cplx(-0.5, 0.0), cplx(-1.0, 3.0), cplx(-4.0, -20.0)})
      for (double x : {0.1, 1.0, 3.0}) {
        const cplx tot = ubar_window(rep, x, l) + ubar_tail(rep, x, l);
        CHECK(std::abs(tot - 1.0 / psibar_eval(wh, l)) < 1e-10 * (1 + std::abs(tot)));
      }
    const double h = 1e-5;
    for (double x : {0.2, 1.5}) {
      const cplx fd = -(ubar_tail(rep, x + h, 0.0) - ubar_tail(rep, x - h, 0.0)) / (2 * h);
      CHECK(std::abs(fd - ubar_density(rep, x)) < 1e-6 * (1 + std::abs(fd)));
    }
  }
}

TEST_CASE("maximum and minimum laws") {
  const auto whA = factorize(model_a());
  const auto M = maximum_law(whA);
  for (double y : {0.0, 0.3, 1.0, 2.5}) CHECK(std::abs(M.cdf(y) - (1.0 - std::exp(-r2 * y))) < 1e-12);
  const auto repA = ubar_representation(whA);
  const auto m = minimum_law(repA, psibar_eval(whA, 0.0));
  CHECK(std::abs(m.density(-0.7) - r2 * std::exp(-r2 * 0.7)) < 1e-12);
  for (const auto& [name, s] : killed_models()) {
    INFO(name);
    const auto wh = factorize(s);
    CHECK(std::abs(maximum_law(wh).mass() - 1.0) < 1e-10);
    CHECK(std::abs(minimum_law(ubar_representation(wh), psibar_eval(wh, 0.0)).mass() - 1.0) < 1e-10);
  }
  // the maximum of an unkilled upward-drifting process is infinite
  CHECK_THROWS_AS(maximum_law(factorize(LevyModelSpec{1.0, 0.5, 0.0, {}, {}})), Error);
}

TEST_CASE("overshoot law") {
  const auto whA = factorize(model_a());
  for (double x : {0.5, 1.0, 2.0}) {
    const auto ov = overshoot_law(whA, maximum_coefficients(whA), x);
    CHECK(ov.terms.empty());
    CHECK(std::abs(ov.mass() - std::exp(-r2 * x)) < 1e-12);
  }
  for (const auto& [name, s] : killed_models()) {
    INFO(name);
    const auto wh = factorize(s);
    const auto mc = maximum_coefficients(wh);
    double prev = 1.0;
    for (double x : {0.1, 0.4, 1.0, 2.0}) {
      const double mass = overshoot_law(wh, mc, x).mass().real();
      // P(T^x < zeta) = P(M > x)
      CHECK(std::abs(mass - (1.0 - maximum_law(wh).cdf(x).real())) < 1e-10);
      CHECK(mass <= prev + 1e-12);
      prev = mass;
    }
  }
}

TEST_CASE("downward passage transform") {
  for (const auto& [name, s] : unkilled_not_drifting_up()) {
    INFO(name);
    const auto wh = factorize(s);
    CHECK(std::abs(psibar_eval(wh, 0.0)) < 1e-12);
    CHECK(std::abs(downward_passage_transform(wh, 0.7, -1e-9) - 1.0) < 1e-6);
  }
  // Gaussian: hitting -x at an exponential time has probability e^{-sqrt2 x}, position exactly -x
  const auto wh = factorize(model_a());
  CHECK(std::abs(downward_passage_transform(wh, 1.0, -1.0) - std::exp(-r2) * std::exp(-1.0)) < 1e-12);
}
