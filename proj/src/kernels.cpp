#include "levyexit/kernels.hpp"

#include <Eigen/LU>
#include <mutex>

#include "levyexit/errors.hpp"

namespace levyexit {

std::shared_ptr<const FactorizedModel> factorize_model(const LevyModelSpec& spec) {
  return factorize_model(spec, spec.kill_q);
}

std::shared_ptr<const FactorizedModel> factorize_model(const LevyModelSpec& spec, cplx kill) {
  auto fm = std::make_shared<FactorizedModel>();
  fm->spec = spec;
  fm->kill = kill;
  fm->wh = factorize(spec, kill);
  fm->rep = ubar_representation(fm->wh);
  return fm;
}

namespace {

/// 1/psibar(-beta) = d + sum u/(theta + beta)
cplx inv_psibar_at(const UbarRepresentation& rep, cplx beta) {
  cplx v = rep.atom;
  for (const auto& t : rep.terms) {
    const cplx s = t.theta + beta;
    if (s == cplx(0.0)) fail(ErrorCode::NotDefined, "theta = -beta = 0: unkilled driftless model");
    v += t.u / s;
  }
  return v;
}

}  // namespace

cplx m_kernel_scaled(const UbarRepresentation& rep, cplx beta, double x, cplx lambda) {
  cplx v = inv_psibar_at(rep, beta) * window_factor(lambda + beta, x);
  for (const auto& t : rep.terms) {
    const cplx s = lambda - t.theta;
    const cplx e = s.real() >= 0.0 ? std::exp(-(beta + t.theta) * x) * window_factor(s, x)
                                   : std::exp(-(lambda + beta) * x) * window_factor(-s, x);
    v -= t.u / (t.theta + beta) * e;
  }
  return v;
}

cplx m_kernel_left(const UbarRepresentation& rep, cplx beta, double x, cplx lambda) {
  const cplx lb = lambda + beta;
  const cplx first = lb.real() >= 0.0 ? std::exp(lambda * x) * window_factor(lb, x)
                                      : std::exp(-beta * x) * window_factor(-lb, x);
  cplx v = inv_psibar_at(rep, beta) * first;
  for (const auto& t : rep.terms) {
    const cplx s = lambda - t.theta;
    const cplx e = s.real() >= 0.0 ? std::exp((lambda - beta - t.theta) * x) * window_factor(s, x)
                                   : std::exp(-beta * x) * window_factor(-s, x);
    v -= t.u / (t.theta + beta) * e;
  }
  return v;
}

cplx m_kernel(const UbarRepresentation& rep, cplx beta, double x, cplx lambda) {
  return std::exp((lambda + beta) * x) * m_kernel_scaled(rep, beta, x, lambda);
}

cplx n_kernel(const UbarRepresentation& rep, cplx gamma, double x, cplx lambda) {
  cplx v = 0.0;
  for (const auto& t : rep.terms) {
    if (!(lambda.real() < t.theta.real())) fail(ErrorCode::DivergentTransform, "n_kernel outside its half-plane");
    v += t.u * std::exp(-t.theta * x) / ((t.theta - lambda) * (t.theta + gamma));
  }
  return v;
}

cplx i_kernel(cplx gamma, cplx lambda) {
  const cplx d = lambda + gamma;
  if (std::abs(d) < 1e-14 * (1.0 + std::abs(gamma))) fail(ErrorCode::PoleEvaluation, "i_kernel at its pole");
  return 1.0 / d;
}

KernelBundle build_bundle(std::shared_ptr<const FactorizedModel> model, double x) {
  if (!(x > 0.0)) fail(ErrorCode::InvalidParams, "bundle needs x > 0");
  KernelBundle b;
  b.model = std::move(model);
  b.x = x;
  const auto& wh = b.model->wh;
  const auto& rep = b.model->rep;
  b.m = wh.m;
  b.n = wh.n;
  b.creeping = wh.creeping;
  const int m = b.m, n = b.n;

  b.ubar_x = ubar_density(rep, x);
  b.v.resize(n);
  for (int j = 0; j < n; ++j) {
    cplx s = 0.0;
    for (const auto& t : rep.terms) s += t.u * std::exp(-t.theta * x) / (t.theta + wh.gammas[j]);
    b.v[j] = -s;
  }
  b.w_hat.resize(m);
  b.inv_psibar_mbeta.resize(m);
  CVec row_scale(m);
  for (int i = 0; i < m; ++i) {
    const cplx beta = wh.betas[i];
    b.w_hat[i] = ubar_window(rep, x, -beta);
    b.inv_psibar_mbeta[i] = inv_psibar_at(rep, beta);
    row_scale[i] = std::exp(-beta * x);
    b.log_row_scale += beta * x;
  }
  b.W_hat.resize(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      b.W_hat(i, j) = (b.w_hat[i] - row_scale[i] * b.v[j]) / (wh.betas[i] - wh.gammas[j]);
  if (b.creeping) {
    b.wprime_hat.resize(m);
    for (int i = 0; i < m; ++i) b.wprime_hat[i] = wh.betas[i] * b.w_hat[i] + row_scale[i] * b.ubar_x;
  }

  Eigen::VectorXcd ones_like_scale(m);
  for (int i = 0; i < m; ++i) ones_like_scale[i] = row_scale[i];

  if (m == 0) {
    b.det_hat = 1.0;
    return b;
  }
  Eigen::MatrixXcd M(m, m);
  if (b.creeping) {
    for (int i = 0; i < m; ++i) M(i, 0) = b.w_hat[i];
    if (n > 0) M.rightCols(n) = b.W_hat;
  } else {
    M = b.W_hat;
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  b.det_hat = lu.determinant();
  double hadamard = 1.0;
  for (int i = 0; i < m; ++i) hadamard *= M.row(i).norm();
  if (!(std::abs(b.det_hat) > 1e-12 * hadamard) || !std::isfinite(std::abs(b.det_hat)))
    fail(ErrorCode::SingularBundle, "kernel matrix is numerically singular at x=" + std::to_string(x));
  Eigen::PartialPivLU<Eigen::MatrixXcd> luT(M.transpose());

  auto to_cvec = [](const Eigen::VectorXcd& v) { return CVec(v.data(), v.data() + v.size()); };
  Eigen::VectorXcd rhs_a(m), rhs_abar(m), rhs_c(m);
  if (b.creeping) {
    rhs_a.setZero();
    rhs_a[0] = -1.0;
    rhs_abar[0] = b.ubar_x;
    for (int j = 0; j < n; ++j) rhs_abar[j + 1] = b.v[j];
    for (int i = 0; i < m; ++i) rhs_c[i] = b.wprime_hat[i];
  } else {
    rhs_a.setOnes();
    for (int j = 0; j < n; ++j) rhs_abar[j] = b.v[j];
    for (int i = 0; i < m; ++i) rhs_c[i] = -b.w_hat[i];
  }
  b.a_hat = to_cvec(luT.solve(rhs_a));
  b.abar_hat = to_cvec(luT.solve(rhs_abar));
  b.cbar = to_cvec(lu.solve(rhs_c));
  b.bbar = to_cvec(lu.solve(ones_like_scale));
  return b;
}

CVec KernelBundle::w() const {
  CVec r(m);
  for (int i = 0; i < m; ++i) r[i] = std::exp(wh().betas[i] * x) * w_hat[i];
  return r;
}

CVec KernelBundle::wprime() const {
  CVec r(wprime_hat.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::exp(wh().betas[i] * x) * wprime_hat[i];
  return r;
}

Eigen::MatrixXcd KernelBundle::W() const {
  Eigen::MatrixXcd r = W_hat;
  for (int i = 0; i < m; ++i) r.row(i) *= std::exp(wh().betas[i] * x);
  return r;
}

cplx KernelBundle::det_r() const { return det_hat * std::exp(log_row_scale); }

namespace {

/// sum_j c_j/(l + g_j) over the jump part of a coefficient vector
cplx gamma_sum(const KernelBundle& b, const CVec& c, cplx lambda) {
  const std::size_t off = b.creeping ? 1 : 0;
  cplx s = 0.0;
  for (int j = 0; j < b.n; ++j) s += c[j + off] * i_kernel(b.wh().gammas[j], lambda);
  return s;
}

cplx gamma_sum_at_theta(const KernelBundle& b, const CVec& c, cplx theta) {
  const std::size_t off = b.creeping ? 1 : 0;
  cplx s = 0.0;
  for (int j = 0; j < b.n; ++j) s += c[j + off] / (theta + b.wh().gammas[j]);
  return s;
}

}  // namespace

cplx func_A(const KernelBundle& b, cplx lambda) {
  cplx v = b.creeping ? cplx(0.0) : cplx(1.0);
  for (int i = 0; i < b.m; ++i) v -= b.a_hat[i] * m_kernel_scaled(b.rep(), b.wh().betas[i], b.x, lambda);
  return v;
}

cplx func_Abar(const KernelBundle& b, cplx lambda) {
  cplx v = ubar_window(b.rep(), b.x, lambda);
  for (int i = 0; i < b.m; ++i) v -= b.abar_hat[i] * m_kernel_left(b.rep(), b.wh().betas[i], b.x, lambda);
  return v;
}

cplx func_B(const KernelBundle& b, cplx lambda) {
  if (b.creeping) return lambda + b.cbar[0] - gamma_sum(b, b.cbar, lambda);
  return 1.0 - gamma_sum(b, b.cbar, lambda);
}

cplx func_C(const KernelBundle& b, cplx lambda) {
  const cplx head = b.creeping ? b.bbar[0] : cplx(0.0);
  return std::exp(-lambda * b.x) * (head - gamma_sum(b, b.bbar, lambda));
}

cplx func_Bbar(const KernelBundle& b, cplx lambda) {
  const auto& wh = b.wh();
  cplx v = psibar_eval(wh, lambda);
  const cplx head = b.creeping ? b.bbar[0] : cplx(0.0);
  for (std::size_t k = 0; k < wh.thetas.size(); ++k) {
    const cplx th = wh.thetas[k];
    const cplx g = psibar_over_pole(wh, k, lambda) * std::exp(-th * b.x);
    v += g * (head - gamma_sum_at_theta(b, b.bbar, th));
  }
  return v;
}

cplx func_Cbar(const KernelBundle& b, cplx lambda) {
  const auto& wh = b.wh();
  cplx v = 0.0;
  const cplx head = b.creeping ? lambda + b.cbar[0] : cplx(1.0);
  for (std::size_t k = 0; k < wh.thetas.size(); ++k) {
    const cplx th = wh.thetas[k];
    const cplx g = psibar_over_pole(wh, k, lambda) * std::exp(-(th - lambda) * b.x);
    v += g * (head - gamma_sum_at_theta(b, b.cbar, th));
  }
  if (b.creeping) v += b.ubar_x * psibar_eval(wh, lambda) * std::exp(lambda * b.x);
  return v;
}

ExpPolyMeasure A_measure(const KernelBundle& b) {
  ExpPolyMeasure m;
  const double x = b.x;
  if (!b.creeping) m.add_atom(0.0, 1.0);
  for (int i = 0; i < b.m; ++i) {
    const cplx beta = b.wh().betas[i];
    const cplx a = b.a_hat[i];
    m.add_term(ExpTerm{-a * b.inv_psibar_mbeta[i], 0, beta, 0.0, 0.0, x});
    for (const auto& t : b.rep().terms)
      m.add_term(ExpTerm{a * t.u * std::exp(-beta * x) / (t.theta + beta), 0, -t.theta, x, 0.0, x});
  }
  return m.compressed();
}

ExpPolyMeasure Abar_measure(const KernelBundle& b) {
  ExpPolyMeasure m;
  const double x = b.x;
  if (b.rep().atom != cplx(0.0)) m.add_atom(0.0, b.rep().atom);
  for (const auto& t : b.rep().terms) m.add_term(ExpTerm{t.u, 0, -t.theta, 0.0, -x, 0.0});
  for (int i = 0; i < b.m; ++i) {
    const cplx beta = b.wh().betas[i];
    const cplx a = b.abar_hat[i];
    m.add_term(ExpTerm{-a * b.inv_psibar_mbeta[i], 0, beta, -x, -x, 0.0});
    for (const auto& t : b.rep().terms)
      m.add_term(ExpTerm{a * t.u * std::exp(-beta * x) / (t.theta + beta), 0, -t.theta, 0.0, -x, 0.0});
  }
  return m.compressed();
}

cplx Abar_density(const KernelBundle& b, double y) {
  const auto& rep = b.rep();
  cplx v = 0.0;
  for (const auto& t : rep.terms) v += t.u * std::exp(t.theta * y);
  for (int i = 0; i < b.m; ++i) {
    const cplx beta = b.wh().betas[i];
    cplx mi = b.inv_psibar_mbeta[i] * std::exp(-beta * (y + b.x));
    for (const auto& t : rep.terms) mi -= t.u * std::exp(-beta * b.x + t.theta * y) / (t.theta + beta);
    v -= b.abar_hat[i] * mi;
  }
  return v;
}

cplx A_density(const KernelBundle& b, double s) {
  const auto& rep = b.rep();
  cplx v = 0.0;
  for (int i = 0; i < b.m; ++i) {
    const cplx beta = b.wh().betas[i];
    cplx mi = b.inv_psibar_mbeta[i] * std::exp(-beta * s);
    for (const auto& t : rep.terms) mi -= t.u * std::exp(-beta * b.x + t.theta * (s - b.x)) / (t.theta + beta);
    v -= b.a_hat[i] * mi;
  }
  return v;
}

std::shared_ptr<const KernelBundle> BundleCache::get(double x) const {
  {
    std::shared_lock lock(mu_);
    auto it = map_.find(x);
    if (it != map_.end()) return it->second;
  }
  auto fresh = std::make_shared<const KernelBundle>(build_bundle(model_, x));
  std::unique_lock lock(mu_);
  auto [it, inserted] = map_.try_emplace(x, std::move(fresh));
  return it->second;
}

std::size_t BundleCache::size() const {
  std::shared_lock lock(mu_);
  return map_.size();
}

}  // namespace levyexit
