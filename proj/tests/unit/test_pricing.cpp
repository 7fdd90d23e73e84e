#include <doctest.h>

#include "bs_oracle.hpp"
#include "levyexit/errors.hpp"
#include "levyexit/pricing.hpp"
#include "test_models.hpp"

using namespace levyexit;
using namespace testmodels;

namespace {
BarrierContract ko(double lower, double upper, double t) {
  BarrierContract c;
  c.lower = lower;
  c.upper = upper;
  c.maturity = t;
  return c;
}
const LevyModelSpec bsA{1.0, -0.5, 0.0, {}, {}};
}  // namespace

TEST_CASE("Euler inversion of elementary transforms") {
  for (double t : {0.5, 1.0, 2.0}) {
    CHECK(std::abs(invert_laplace([](cplx q) { return 1.0 / q; }, t) - 1.0) < 1e-8);
    CHECK(std::abs(invert_laplace([](cplx q) { return 1.0 / (q + 1.0); }, t) - std::exp(-t)) < 1e-8);
    CHECK(std::abs(invert_laplace([](cplx q) { return 1.0 / (q * q); }, t) - t) < 1e-7);
    CHECK(std::abs(invert_laplace([](cplx q) { return 1.0 / (q * q + 1.0); }, t) - std::sin(t)) < 1e-7);
  }
  const auto many = invert_laplace_many(
      [](cplx q) { return std::vector<cplx>{1.0 / q, 1.0 / (q + 2.0)}; }, 1.0);
  CHECK(std::abs(many[1] - std::exp(-2.0)) < 1e-8);
}

TEST_CASE("inversion parameters are validated and divergence is reported") {
  InversionParams p;
  p.terms = 10;
  CHECK_THROWS_AS(invert_laplace([](cplx q) { return 1.0 / q; }, 1.0, p), Error);
  p = {};
  p.method = "talbot";
  CHECK_THROWS_AS(invert_laplace([](cplx q) { return 1.0 / q; }, 1.0, p), Error);
  try {
    // not a transform of any function: the alternating sums grow linearly
    invert_laplace([](cplx q) { return std::exp(q); }, 1.0);
    FAIL("expected OscillationDetected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OscillationDetected);
  }
}

TEST_CASE("Gaver-Stehfest agrees on smooth transforms") {
  CHECK(std::abs(invert_laplace_stehfest([](double q) { return 1.0 / (q + 1.0); }, 1.0) - std::exp(-1.0)) < 1e-5);
  CHECK(std::abs(invert_laplace_stehfest([](double q) { return 1.0 / (q * q); }, 0.5) - 0.5) < 1e-5);
  CHECK_THROWS_AS(invert_laplace_stehfest([](double q) { return 1.0 / q; }, 1.0, 13), Error);
}

TEST_CASE("contract validation") {
  CHECK_THROWS_AS(validate_contract(ko(110, 120, 1)), Error);
  CHECK_THROWS_AS(validate_contract(ko(80, 120, 0)), Error);
  auto c = ko(80, 120, 1);
  c.rebate_up = -1;
  CHECK_THROWS_AS(validate_contract(c), Error);
  CHECK_NOTHROW(validate_contract(ko(80, 120, 1)));
}

TEST_CASE("q-domain values") {
  LevyModelSpec s = bsA;
  s.kill_q = 2.0;
  auto c = ko(80, 120, 1);
  c.strike = 130;
  CHECK(q_domain_ko_value(s, c) == 0.0);
  // wide barriers, tiny strike: E_q[Y] = y0 for the martingale model
  c = ko(100 * std::exp(-10.0), 100 * std::exp(10.0), 1);
  c.strike = 1e-8;
  CHECK(std::abs(q_domain_ko_value(s, c) - 100.0) < 1e-3);
  // and y0 q/(q - 1/2) when the drift is removed
  s.mu = 0.0;
  CHECK(std::abs(q_domain_ko_value(s, c) / (100.0 * 2.0 / 1.5) - 1.0) < 1e-3);

  auto rb = q_domain_rebate(model_b(), ko(80, 120, 1));
  CHECK(rb.up_term == 0.0);
  CHECK(rb.down_term == 0.0);
  auto cs = ko(100 * std::exp(-0.5), 100 * std::exp(0.5), 1);
  cs.rebate_up = cs.rebate_down = 3.0;
  rb = q_domain_rebate(model_sym(), cs);
  CHECK(std::abs(rb.up_term - rb.down_term) < 1e-7);
  CHECK(rb.up_term > 0.0);
}

TEST_CASE("Black-Scholes limit against the sine-series oracle") {
  for (double t : {0.1, 0.25, 1.0}) {
    const auto p = price(bsA, ko(80, 125, t));
    const double ref = bs_double_ko_call(100, 100, 80, 125, 1.0, -0.5, t);
    INFO(t);
    CHECK(std::abs(p.price - ref) < 1e-6 * (1.0 + ref));
  }
  // short maturity: barriers are out of reach, the price is the vanilla value
  const auto p = price(bsA, ko(80, 125, 1e-3));
  CHECK(std::abs(p.price - bs_call(100, 100, 1.0, 1e-3)) < 1e-4);
  CHECK(std::abs(price(bsA, ko(80, 125, 1e-6)).price) < 0.05);
}

TEST_CASE("price properties") {
  // knock-out value grows as the barriers widen
  double prev = 0.0;
  for (double w : {0.0, 5.0, 10.0}) {
    const double v = price(bsA, ko(80 - w, 125 + w, 0.25)).ko_component;
    CHECK(v > prev);
    prev = v;
  }
  const std::vector<LevyModelSpec> models = {bsA, risk_neutral({0.2, 0.0, 0.0, {{30.0, 10.0}}, {{30.0, 15.0}}}),
                                             risk_neutral(model_sym())};
  for (const auto& s0 : models) {
    LevyModelSpec s = s0;
    s.kill_q = 0.0;
    auto c = ko(80, 120, 0.5);
    c.rebate_up = 2.0;
    c.rebate_down = 1.0;
    c.discount_rate = 0.03;
    const auto p = price(s, c);
    const auto vanilla = price(s, ko(100 * std::exp(-10.0), 100 * std::exp(10.0), 0.5));
    CHECK(p.ko_component >= 0.0);
    CHECK(p.ko_component / p.discount_factor <= vanilla.ko_component + 1e-9);
    CHECK(p.rebate_up_component >= 0.0);
    CHECK(p.rebate_up_component <= c.rebate_up);
    CHECK(p.rebate_down_component >= 0.0);
    CHECK(p.rebate_down_component <= c.rebate_down);
    CHECK(std::abs(p.price - p.ko_component - p.rebate_up_component - p.rebate_down_component) < 1e-12);
  }
  CHECK_THROWS_AS(price(model_b(), ko(80, 120, 1)), Error);
}

TEST_CASE("forward transform of the inverted prices recovers the q-domain value") {
  const auto c = ko(80, 125, 1.0);
  auto f = [&](double t) {
    auto ct = c;
    ct.maturity = t;
    return price(bsA, ct).ko_component;
  };
  for (double q : {3.0, 8.0}) {
    // substitute t = s^2 so the sqrt(t) behaviour at 0 is smooth; the piece below
    // t = 1e-6 is under 100 * 1e-6 * 0.4 * 1e-3 and is dropped
    const double fwd =
        integrate([&](double s) { return 2.0 * s * std::exp(-q * s * s) * f(s * s); }, 1e-3,
                  std::sqrt(40.0 / q), {1e-10, 1e-6, 20, 8});
    const double direct = q_domain_ko_potential(bsA, q, c).real();
    CHECK(std::abs(fwd / direct - 1.0) < 1e-4);
  }
}
