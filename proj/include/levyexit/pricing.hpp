#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levyexit/exit_laws.hpp"
#include "levyexit/model_spec.hpp"

namespace levyexit {

/// Double-barrier knock-out call on Y = y0 e^X with rebates paid at the exit.
struct BarrierContract {
  double y0 = 100.0;
  double strike = 100.0;
  double lower = 80.0;
  double upper = 120.0;
  double maturity = 1.0;
  double rebate_up = 0.0;
  double rebate_down = 0.0;
  double discount_rate = 0.0;

  double log_lower() const;  // a~ = -log(lower/y0) > 0
  double log_upper() const;  // b~ = log(upper/y0) > 0
};

void validate_contract(const BarrierContract& c);

struct InversionParams {
  std::string method = "euler";
  int terms = 20;       // order of the binomial averaging
  int burnin = 20;      // plain partial sums before averaging
  double tuning = 20.7; // contour abscissa A; discretization error ~ e^{-A}
};

void validate_params(const InversionParams& p);

/// int e^{-q t} E[(Y_t - K)^+; no exit before t] dt at a complex q with Re q > 0.
cplx q_domain_ko_potential(const LevyModelSpec& spec, cplx q, const BarrierContract& c,
                           const QuadOptions& opt = {});
/// E_q[(Y_zeta - K)^+; no exit before zeta] at q = spec.kill_q.
double q_domain_ko_value(const LevyModelSpec& spec_with_q, const BarrierContract& c, const QuadOptions& opt = {});

struct RebateTerms {
  double up_term = 0.0;
  double down_term = 0.0;
};

RebateTerms q_domain_rebate(const LevyModelSpec& spec_with_q, const BarrierContract& c, const QuadOptions& opt = {});

/// Euler-summation inversion along Re q = A/(2t).
double invert_laplace(const std::function<cplx(cplx)>& transform, double t, const InversionParams& p = {});
/// Several transforms sharing the same nodes.
std::vector<double> invert_laplace_many(const std::function<std::vector<cplx>(cplx)>& transform, double t,
                                        const InversionParams& p = {});
/// Gaver-Stehfest on real q; needs n even, double precision caps it near 14-16.
double invert_laplace_stehfest(const std::function<double(double)>& transform, double t, int n = 14);

struct PriceBreakdown {
  double price = 0.0;
  double ko_component = 0.0;
  double rebate_up_component = 0.0;
  double rebate_down_component = 0.0;
  double discount_factor = 1.0;
  int nodes = 0;
};

PriceBreakdown price(const LevyModelSpec& spec_unkilled, const BarrierContract& c, const InversionParams& p = {},
                     const QuadOptions& opt = {1e-13, 1e-10, 40, 4});

}  // namespace levyexit
