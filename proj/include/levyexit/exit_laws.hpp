#pragma once

#include <functional>
#include <memory>

#include "levyexit/exp_poly_measure.hpp"
#include "levyexit/kernels.hpp"
#include "levyexit/quadrature.hpp"

namespace levyexit {

using Transform = std::function<cplx(cplx)>;

/// e^{-beta (s + x)} on [-x, 0] convolved with U on [-x, 0], restricted back to [-x, 0].
/// Its transform is e^{-beta x} m_i(x, .).
ExpPolyMeasure m_measure_by_convolution(const UbarRepresentation& rep, cplx beta, double x);

cplx triple_potential(const KernelBundle& b, cplx lambda1, cplx lambda2);

/// Law of (S, X, I) at the killing time restricted to {S - I <= x}:
/// range_prob * inf_law(dy) * sup_law(dz) for I in dy, X - I in dz.
struct TripleLaw {
  double x = 0.0;
  cplx range_prob = 0.0;  // the potential int P(S_t - I_t <= x) dt in potential mode
  bool potential_mode = false;
  cplx A0 = 0.0, Abar0 = 0.0;
  ExpPolyMeasure sup_law;  // on [0, x], mass 1
  ExpPolyMeasure inf_law;  // on [-x, 0], mass 1
};

TripleLaw triple_law(const KernelBundle& b);

/// First time the drawdown X - S goes below -x.
struct VxLaw {
  cplx prob = 0.0;
  ExpPolyMeasure sup_law;  // S_{V_x} on {V_x < zeta}, mass = prob
  CVec rates;              // beta_i(x), roots of B(x, -.)
  Transform undershoot_transform;  // l -> E[e^{-l (X - S)_{V_x}}; V_x < zeta], Re l <= 0
};

VxLaw law_at_Vx(const KernelBundle& b);

/// First time the drawup X - I exceeds x.
struct VupxLaw {
  cplx prob = 0.0;
  ExpPolyMeasure overshoot_law;  // X - I - x at V^x on {V^x < zeta}, mass = prob
  ExpPolyMeasure inf_law;        // I_{V^x} on {V^x < zeta}
  bool inf_law_available = false;
  ExpPolyMeasure mu;             // kernel of the Neumann series
  double mu_total_variation = 0.0;
  int neumann_terms = 0;
};

VupxLaw law_at_Vupx(const KernelBundle& b, double neumann_tol = 1e-10);

/// First time the range S - I exceeds x.
struct UxLaw {
  cplx prob_bottom = 0.0;  // exits with X = I
  cplx prob_top = 0.0;     // exits with X = S
  cplx range_prob = 0.0;
  ExpPolyMeasure sup_at_bottom;   // law of S_{U_x} given a bottom exit
  Transform undershoot_at_bottom; // conditional transform of (X - S) at U_x
  ExpPolyMeasure inf_at_top;      // law of I_{U_x} given a top exit
  ExpPolyMeasure overshoot_at_top;// conditional law of X - I - x given a top exit
};

UxLaw law_at_Ux(const KernelBundle& b);

/// P(I in dy, X - I in dz, S - I <= x) = continuous dy dz + atoms on the axes.
struct RangeDensity {
  cplx continuous = 0.0;
  cplx atom_y0 = 0.0;    // delta_0(dy) dz
  cplx atom_z0 = 0.0;    // dy delta_0(dz)
  cplx atom_both = 0.0;  // delta_0(dy) delta_0(dz)
};

RangeDensity joint_range_density(const BundleCache& cache, double y, double z, double x);

/// Exit from [-a, b] before killing.
struct ExitSplit {
  double a = 0.0, b = 0.0;
  cplx prob_up = 0.0;
  cplx prob_down = 0.0;
  cplx prob_none = 0.0;        // potential of {no exit} in potential mode
  ExpPolyMeasure up_overshoot; // X_T - b on the up event
  Transform down_law_transform;  // l -> E[e^{-l (X_T + a)}; down], Re l <= 0
  std::function<cplx(double)> up_inf_density;    // I_T density on the up event (plus atom at 0)
  cplx up_inf_atom = 0.0;
  std::function<cplx(double)> down_sup_density;  // S_T density on the down event
  cplx down_sup_atom = 0.0;
};

ExitSplit two_sided_exit(std::shared_ptr<BundleCache> cache, double a, double b, const QuadOptions& opt = {});
ExitSplit two_sided_exit(const LevyModelSpec& spec, double a, double b, const QuadOptions& opt = {});

}  // namespace levyexit
