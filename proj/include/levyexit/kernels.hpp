#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <shared_mutex>

#include "levyexit/exp_poly_measure.hpp"
#include "levyexit/model_spec.hpp"
#include "levyexit/wiener_hopf.hpp"

namespace levyexit {

/// A model together with its factorization at one (possibly complex) kill rate.
struct FactorizedModel {
  LevyModelSpec spec;
  cplx kill = 0.0;
  WHFactorization wh;
  UbarRepresentation rep;

  bool potential_mode() const { return kill == cplx(0.0); }
};

std::shared_ptr<const FactorizedModel> factorize_model(const LevyModelSpec& spec);
std::shared_ptr<const FactorizedModel> factorize_model(const LevyModelSpec& spec, cplx kill);

/// Transform of M_i: (e^{-b s} 1_{[-x,0]}) * U restricted to [-x, 0].
cplx m_kernel(const UbarRepresentation& rep, cplx beta, double x, cplx lambda);
/// e^{-(lambda+beta) x} m_kernel, bounded for Re lambda >= 0.
cplx m_kernel_scaled(const UbarRepresentation& rep, cplx beta, double x, cplx lambda);
/// e^{-beta x} m_kernel, bounded for Re lambda <= 0.
cplx m_kernel_left(const UbarRepresentation& rep, cplx beta, double x, cplx lambda);
cplx n_kernel(const UbarRepresentation& rep, cplx gamma, double x, cplx lambda);
cplx i_kernel(cplx gamma, cplx lambda);

/// Coefficients of the range problem at one x. Rows attached to beta_i are stored
/// multiplied by e^{-beta_i x} so large x cannot overflow; the unscaled
/// accessors undo this.
struct KernelBundle {
  std::shared_ptr<const FactorizedModel> model;
  double x = 0.0;
  int m = 0, n = 0;
  bool creeping = false;

  CVec w_hat;       // Ubar_[-x,0](-beta_i)
  CVec wprime_hat;  // beta_i w_hat + e^{-beta_i x} ubar(-x), creeping only
  Eigen::MatrixXcd W_hat;  // m x n
  CVec v;                  // n
  cplx ubar_x = 0.0;       // density of U at -x
  CVec inv_psibar_mbeta;   // 1/psibar(-beta_i)
  cplx det_hat = 1.0;      // determinant of the scaled W or [w W]
  cplx log_row_scale = 0.0;

  CVec a_hat, abar_hat;  // multiply e^{-beta_i x} m_i
  CVec cbar;             // (cbar_0, cbar_1..n) when creeping, else (cbar_1..n)
  CVec bbar;             // same layout

  CVec w() const;
  CVec wprime() const;
  Eigen::MatrixXcd W() const;
  cplx det_r() const;
  const UbarRepresentation& rep() const { return model->rep; }
  const WHFactorization& wh() const { return model->wh; }
};

KernelBundle build_bundle(std::shared_ptr<const FactorizedModel> model, double x);

cplx func_A(const KernelBundle& b, cplx lambda);
cplx func_Abar(const KernelBundle& b, cplx lambda);
cplx func_B(const KernelBundle& b, cplx lambda);
cplx func_Bbar(const KernelBundle& b, cplx lambda);
cplx func_C(const KernelBundle& b, cplx lambda);
cplx func_Cbar(const KernelBundle& b, cplx lambda);

/// Measures whose transforms are A(x, .) on [0, x] and Abar(x, .) on [-x, 0], in closed form.
ExpPolyMeasure A_measure(const KernelBundle& b);
ExpPolyMeasure Abar_measure(const KernelBundle& b);
/// Continuous parts of the same measures, evaluated pointwise without building them.
cplx A_density(const KernelBundle& b, double s);
cplx Abar_density(const KernelBundle& b, double y);

/// Concurrent-read, insert-if-absent cache of bundles keyed on x.
class BundleCache {
 public:
  explicit BundleCache(std::shared_ptr<const FactorizedModel> model) : model_(std::move(model)) {}
  std::shared_ptr<const KernelBundle> get(double x) const;
  const std::shared_ptr<const FactorizedModel>& model() const { return model_; }
  std::size_t size() const;

 private:
  std::shared_ptr<const FactorizedModel> model_;
  mutable std::shared_mutex mu_;
  mutable std::map<double, std::shared_ptr<const KernelBundle>> map_;
};

}  // namespace levyexit
