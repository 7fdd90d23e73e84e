#include <doctest.h>

#include <thread>

#include "levyexit/exit_laws.hpp"
#include "levyexit/kernels.hpp"
#include "test_models.hpp"

using namespace levyexit;
using namespace testmodels;

namespace {
const double r2 = std::sqrt(2.0);
const double wA = r2 * std::sinh(r2);  // Gaussian w_1 at x = 1
const double ubA = 2.0 * std::exp(-r2);  // density of U at -1

ExpPolyMeasure ubar_tail_shifted(const UbarRepresentation& rep, double x) {
  ExpPolyMeasure m;
  for (const auto& t : rep.terms) m.add_term(ExpTerm{t.u, 0, -t.theta, 0.0, -kInf, -x});
  return m.shifted(x);
}
}  // namespace

TEST_CASE("i kernel") {
  CHECK(std::abs(i_kernel(10.0, 0.0) - 0.1) < 1e-16);
  CHECK(std::abs(i_kernel(10.0, cplx(0.0, 10.0)) - cplx(0.05, -0.05)) < 1e-16);
  CHECK(std::abs(i_kernel(10.0, 1e12)) < 1e-11);
  CHECK_THROWS_AS(i_kernel(10.0, -10.0), Error);
}

TEST_CASE("m kernel: Gaussian value, removable point, convolution oracle") {
  const auto fm = factorize_model(model_a());
  const cplx b = fm->wh.betas[0];
  const double expect = (wA - r2 * (1.0 - std::exp(-r2))) / r2;
  CHECK(std::abs(m_kernel(fm->rep, b, 1.0, 0.0) - expect) < 1e-13);
  CHECK(std::abs(expect - 1.1782) < 1e-4);
  for (const auto& [name, s] : killed_models()) {
    INFO(name);
    const auto f = factorize_model(s);
    for (cplx beta : f->wh.betas)
      for (double x : {0.3, 1.0}) {
        // continuity through l = -beta
        const cplx at = m_kernel(f->rep, beta, x, -beta);
        const double h = 1e-4;
        const cplx mid = 0.5 * (m_kernel(f->rep, beta, x, -beta + h) + m_kernel(f->rep, beta, x, -beta - h));
        CHECK(std::abs(at - mid) < 1e-7 * (1 + std::abs(at)));
        const auto meas = m_measure_by_convolution(f->rep, beta, x);
        for (cplx l : {cplx(0.0), cplx(0.5, 1.0), cplx(-1.0, 2.0)}) {
          const cplx ref = meas.laplace(l);
          const cplx val = std::exp(-beta * x) * m_kernel(f->rep, beta, x, l);
          CHECK(std::abs(val - ref) < 1e-9 * (1 + std::abs(ref)));
          CHECK(std::abs(m_kernel_left(f->rep, beta, x, l) - val) < 1e-12 * (1 + std::abs(val)));
        }
      }
  }
}

TEST_CASE("n kernel against the convolution measure") {
  for (const auto& [name, s] : killed_models()) {
    INFO(name);
    const auto f = factorize_model(s);
    for (cplx g : f->wh.gammas)
      for (double x : {0.5, 1.2}) {
        const auto meas =
            convolve(ubar_tail_shifted(f->rep, x), ExpPolyMeasure::exponential(1.0, g, 0.0, kInf)).restricted(-kInf, 0.0);
        for (cplx l : {cplx(-1.0), cplx(-0.3, 4.0)}) {
          const cplx ref = meas.laplace(l);
          CHECK(std::abs(n_kernel(f->rep, g, x, l) - ref) < 1e-9 * (1 + std::abs(ref)));
        }
        const cplx at = n_kernel(f->rep, g, x, -g);
        const cplx mid = 0.5 * (n_kernel(f->rep, g, x, -g + 1e-4) + n_kernel(f->rep, g, x, -g - 1e-4));
        CHECK(std::abs(at - mid) < 1e-7 * (1 + std::abs(at)));
        CHECK(std::abs(n_kernel(f->rep, g, 40.0, -0.5)) < 1e-8);
      }
  }
}

TEST_CASE("Gaussian bundle and boundary functions at x = 1") {
  const auto b = build_bundle(factorize_model(model_a()), 1.0);
  CHECK(b.m == 1);
  CHECK(b.n == 0);
  CHECK(std::abs(b.w()[0] - wA) < 1e-12);
  CHECK(std::abs(b.wprime()[0] - (r2 * wA + ubA)) < 1e-12);
  CHECK(std::abs(b.det_r() - wA) < 1e-12);
  CHECK(b.W().cols() == 0);
  const double m0 = (wA - r2 * (1.0 - std::exp(-r2))) / r2;
  CHECK(std::abs(func_A(b, 0.0) - m0 / wA) < 1e-12);
  CHECK(std::abs(func_A(b, 0.0) - 0.43053) < 1e-5);
  const double abar = r2 * (1.0 - std::exp(-r2)) - ubA / wA * m0;
  CHECK(std::abs(func_Abar(b, 0.0) - abar) < 1e-12);
  CHECK(std::abs(func_Abar(b, 0.0) - 0.86106) < 1e-5);
  for (cplx l : {cplx(0.0), cplx(2.0, 1.0)})
    CHECK(std::abs(func_B(b, l) - (l + (r2 * wA + ubA) / wA)) < 1e-12);
  CHECK(std::abs(func_C(b, 0.0) - 1.0 / wA) < 1e-12);
  CHECK(std::abs(func_C(b, 0.7) - std::exp(-0.7) / wA) < 1e-12);
}

TEST_CASE("bundle entries match quadrature of the defining integrals (Kou, x = 0.7)") {
  const auto fm = factorize_model(model_b());
  const double x = 0.7;
  const auto b = build_bundle(fm, x);
  const auto& rep = fm->rep;
  const QuadOptions opt{1e-15, 1e-12, 40, 8};
  auto ub = [&](double y) { return ubar_density(rep, -y); };
  for (int i = 0; i < b.m; ++i) {
    const cplx beta = fm->wh.betas[i];
    const cplx win = rep.atom + integrate([&](double y) { return std::exp(beta * y) * ub(y); }, -x, 0.0, opt);
    CHECK(std::abs(b.w()[i] - std::exp(beta * x) * win) < 1e-8 * std::abs(b.w()[i]));
  }
  for (int j = 0; j < b.n; ++j) {
    const cplx g = fm->wh.gammas[j];
    const cplx tail = integrate_from_neg_inf([&](double y) { return std::exp(g * y) * ub(y); }, -x, opt);
    CHECK(std::abs(b.v[j] + std::exp(g * x) * tail) < 1e-8 * std::abs(b.v[j]));
    for (int i = 0; i < b.m; ++i) {
      const cplx expect = (b.w()[i] - b.v[j]) / (fm->wh.betas[i] - g);
      CHECK(std::abs(b.W()(i, j) - expect) < 1e-8 * std::abs(expect));
    }
  }
}

TEST_CASE("boundary behaviour and determinant identities") {
  for (const auto& [name, s] : killed_models()) {
    INFO(name);
    const auto fm = factorize_model(s);
    for (double x : {0.2, 1.0, 3.0}) {
      const auto b = build_bundle(fm, x);
      for (cplx l : {cplx(0.0), cplx(0.8, 0.0), cplx(2.0, 5.0)}) {
        const cplx d = func_A(b, l) * func_B(b, l) + func_C(b, l) * func_Abar(b, l);
        CHECK(std::abs(d - 1.0) < 1e-9);
      }
      for (cplx l : {cplx(-0.1), cplx(-0.8, 0.0), cplx(-2.0, 5.0)}) {
        const cplx d = func_Bbar(b, l) * func_Abar(b, l) + func_A(b, l) * func_Cbar(b, l);
        CHECK(std::abs(d - 1.0) < 1e-9);
      }
      CHECK(std::abs(psi_eval(fm->wh, 1e3) * func_A(b, 1e3) - 1.0) < 1e-2);
      CHECK(std::abs(psi_eval(fm->wh, 1e4) * func_A(b, 1e4) - 1.0) < 1e-3);
      CHECK(std::abs(func_B(b, 1e4) / psi_eval(fm->wh, 1e4) - 1.0) < 1e-3);
      CHECK(std::abs(func_Bbar(b, -1e4) / psibar_eval(fm->wh, -1e4) - 1.0) < 1e-3);
      // A is entire: no jump across the removable points
      for (cplx beta : fm->wh.betas) {
        const cplx at = func_A(b, -beta);
        CHECK(std::abs(at - func_A(b, -beta + 1e-6)) < 1e-5 * (1 + std::abs(at)));
      }
      // e^{lx} C bounded on the right half-plane
      double sup = 0.0;
      for (double u = 0.0; u < 200.0; u += 7.0) sup = std::max(sup, std::abs(std::exp(u * x) * func_C(b, u)));
      CHECK(std::isfinite(sup));
      const double pr = (s.kill_q * func_Abar(b, 0.0) * func_A(b, 0.0)).real();
      CHECK(pr >= -1e-12);
      CHECK(pr <= 1.0 + 1e-12);
    }
    // the range window closes at x -> 0 for creeping models
    if (fm->wh.creeping) CHECK(std::abs(func_Abar(build_bundle(fm, 1e-7), 0.0) - fm->rep.atom) < 1e-5);
    CHECK(std::abs((func_Cbar(build_bundle(fm, 60.0), 0.0) / func_B(build_bundle(fm, 60.0), 0.0))) < 1e-6);
  }
}

TEST_CASE("determinant nonvanishing on an x grid") {
  for (const auto& [name, s] : killed_models()) {
    INFO(name);
    const auto fm = factorize_model(s);
    for (double x = 1e-3; x <= 10.0; x *= 2.0) {
      const auto b = build_bundle(fm, x);
      CHECK(std::abs(b.det_hat) > 0.0);
      CHECK(std::isfinite(std::abs(b.det_hat)));
    }
  }
}

TEST_CASE("bundle cache inserts once and is safe to share") {
  auto cache = std::make_shared<BundleCache>(factorize_model(model_b()));
  std::vector<std::shared_ptr<const KernelBundle>> got(8);
  std::vector<std::thread> ts;
  for (int i = 0; i < 8; ++i) ts.emplace_back([&, i] { got[i] = cache->get(0.75); });
  for (auto& t : ts) t.join();
  for (const auto& g : got) CHECK(g == got[0]);
  CHECK(cache->size() == 1);
}
