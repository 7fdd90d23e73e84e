#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "levyexit/exit_laws.hpp"
#include "levyexit/io.hpp"
#include "levyexit/mc_oracle.hpp"
#include "levyexit/pricing.hpp"

namespace py = pybind11;
using namespace levyexit;

namespace {

const std::vector<cplx>& to_list(const CVec& v) { return v; }

py::dict measure_dict(const ExpPolyMeasure& m) { return py::module_::import("json").attr("loads")(to_json(m).dump()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exit laws of hyperexponential jump diffusions";

  static py::exception<Error> exc(m, "LevyExitError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      exc((std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<JumpComponent>(m, "JumpComponent")
      .def(py::init([](double w, double r) { return JumpComponent{w, r}; }), py::arg("weight"), py::arg("rate"))
      .def_readwrite("weight", &JumpComponent::weight)
      .def_readwrite("rate", &JumpComponent::rate);

  py::class_<LevyModelSpec>(m, "LevyModelSpec")
      .def(py::init([](double sigma, double mu, double kill_q, std::vector<JumpComponent> pos,
                       std::vector<JumpComponent> neg) { return LevyModelSpec{sigma, mu, kill_q, pos, neg}; }),
           py::arg("sigma") = 0.0, py::arg("mu") = 0.0, py::arg("kill_q") = 0.0,
           py::arg("pos_jumps") = std::vector<JumpComponent>{}, py::arg("neg_jumps") = std::vector<JumpComponent>{})
      .def_readwrite("sigma", &LevyModelSpec::sigma)
      .def_readwrite("mu", &LevyModelSpec::mu)
      .def_readwrite("kill_q", &LevyModelSpec::kill_q)
      .def_readwrite("pos_jumps", &LevyModelSpec::pos_jumps)
      .def_readwrite("neg_jumps", &LevyModelSpec::neg_jumps);

  m.def("load_model", &load_model, py::arg("path"));
  m.def("phi", [](const LevyModelSpec& s, cplx l) { return phi_eval(s, l); }, py::arg("spec"), py::arg("lam"));

  m.def(
      "factorize",
      [](const LevyModelSpec& s) {
        const auto wh = factorize(s);
        py::dict d;
        d["betas"] = to_list(wh.betas);
        d["gammas"] = to_list(wh.gammas);
        d["thetas"] = to_list(wh.thetas);
        d["etas"] = to_list(wh.etas);
        d["m"] = wh.m;
        d["n"] = wh.n;
        d["creeping"] = wh.creeping;
        return d;
      },
      py::arg("spec"));
  m.def(
      "psi", [](const LevyModelSpec& s, cplx l) { return psi_eval(factorize(s), l); }, py::arg("spec"),
      py::arg("lam"));
  m.def(
      "psibar", [](const LevyModelSpec& s, cplx l) { return psibar_eval(factorize(s), l); }, py::arg("spec"),
      py::arg("lam"));
  m.def(
      "maximum_law", [](const LevyModelSpec& s) { return measure_dict(maximum_law(factorize(s))); },
      py::arg("spec"));

  m.def(
      "range_prob", [](const LevyModelSpec& s, double x) {
        return triple_law(build_bundle(factorize_model(s), x)).range_prob.real();
      },
      py::arg("spec"), py::arg("x"));
  m.def(
      "prob_vx", [](const LevyModelSpec& s, double x) { return law_at_Vx(build_bundle(factorize_model(s), x)).prob.real(); },
      py::arg("spec"), py::arg("x"));
  m.def(
      "prob_vupx",
      [](const LevyModelSpec& s, double x) { return law_at_Vupx(build_bundle(factorize_model(s), x)).prob.real(); },
      py::arg("spec"), py::arg("x"));
  m.def(
      "ux",
      [](const LevyModelSpec& s, double x) {
        const auto u = law_at_Ux(build_bundle(factorize_model(s), x));
        return py::make_tuple(u.prob_bottom.real(), u.prob_top.real(), u.range_prob.real());
      },
      py::arg("spec"), py::arg("x"));
  m.def(
      "two_sided_exit",
      [](const LevyModelSpec& s, double a, double b) {
        const auto e = two_sided_exit(s, a, b);
        return py::make_tuple(e.prob_up.real(), e.prob_down.real(), e.prob_none.real());
      },
      py::arg("spec"), py::arg("a"), py::arg("b"));

  py::class_<BarrierContract>(m, "BarrierContract")
      .def(py::init([](double y0, double strike, double lower, double upper, double maturity, double ru, double rd,
                       double r) { return BarrierContract{y0, strike, lower, upper, maturity, ru, rd, r}; }),
           py::arg("y0"), py::arg("strike"), py::arg("lower"), py::arg("upper"), py::arg("maturity"),
           py::arg("rebate_up") = 0.0, py::arg("rebate_down") = 0.0, py::arg("discount_rate") = 0.0);
  m.def(
      "price",
      [](const LevyModelSpec& s, const BarrierContract& c, int terms) {
        InversionParams p;
        p.terms = terms;
        const auto r = price(s, c, p);
        py::dict d;
        d["price"] = r.price;
        d["ko_component"] = r.ko_component;
        d["rebate_up_component"] = r.rebate_up_component;
        d["rebate_down_component"] = r.rebate_down_component;
        return d;
      },
      py::arg("spec"), py::arg("contract"), py::arg("terms") = 20);
  m.def(
      "invert_laplace",
      [](const std::function<cplx(cplx)>& f, double t, int terms) {
        InversionParams p;
        p.terms = terms;
        return invert_laplace(f, t, p);
      },
      py::arg("transform"), py::arg("t"), py::arg("terms") = 20);

  m.def(
      "mc_range_prob",
      [](const LevyModelSpec& s, double x, std::uint64_t paths, std::uint64_t seed, double step) {
        PathConfig cfg;
        cfg.seed = seed;
        cfg.step = step;
        py::gil_scoped_release release;
        const auto e = simulate_functional(s, cfg, Functional::range_below(x), paths);
        return std::make_pair(e.mean, e.std_error);
      },
      py::arg("spec"), py::arg("x"), py::arg("paths") = 100000, py::arg("seed") = 1, py::arg("step") = 0.01);
}
