#include "levyexit/cli.hpp"

#include <fstream>
#include <ostream>

#include "levyexit/errors.hpp"
#include "levyexit/exit_laws.hpp"
#include "levyexit/io.hpp"
#include "levyexit/mc_oracle.hpp"
#include "levyexit/pricing.hpp"

namespace levyexit {

Command parse_command(const std::string& name) {
  if (name == "factorize") return Command::Factorize;
  if (name == "triple-law") return Command::TripleLaw;
  if (name == "exit") return Command::Exit;
  if (name == "vx") return Command::Vx;
  if (name == "vupx") return Command::Vupx;
  if (name == "ux") return Command::Ux;
  if (name == "price") return Command::Price;
  if (name == "mc-check") return Command::McCheck;
  fail(ErrorCode::InvalidParams, "unknown command '" + name + "'");
}

OutputFormat parse_format(const std::string& name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  fail(ErrorCode::InvalidParams, "unknown format '" + name + "'");
}

namespace {

struct Output {
  Json json = Json::object();
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void scalar(const std::string& key, cplx v) {
    json[key] = to_json(v);
    if (rows.empty()) rows.emplace_back();
    header.push_back(key);
    rows[0].push_back(cell(v));
  }
  static std::string cell(cplx v) {
    const double im = round12(v.imag());
    if (im == 0.0) return format12(v.real());
    return format12(v.real()) + (im < 0 ? "" : "+") + format12(im) + "i";
  }
};

bool input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::DuplicateRate:
    case ErrorCode::DegenerateModel:
    case ErrorCode::NegativeParameter:
    case ErrorCode::InvalidContract:
    case ErrorCode::InvalidParams:
    case ErrorCode::ModelFileNotFound:
    case ErrorCode::ContractFileNotFound:
    case ErrorCode::ParseError:
    case ErrorCode::UnknownKey:
    case ErrorCode::IoError:
      return true;
    default:
      return false;
  }
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) fail(ErrorCode::InvalidParams, std::string(name) + " must be positive");
}

Output do_factorize(const LevyModelSpec& spec, const RunParams& p) {
  const auto fm = factorize_model(spec);
  Output o;
  o.json = to_json(fm->wh, fm->rep);
  if (!p.lambdas.empty()) {
    Json grid = Json::array();
    o.header = {"lambda", "phi", "psi", "psibar"};
    for (double l : p.lambdas) {
      const cplx ph = phi_eval(spec, l), ps = psi_eval(fm->wh, l), pb = psibar_eval(fm->wh, l);
      grid.push_back({{"lambda", round12(l)}, {"phi", to_json(ph)}, {"psi", to_json(ps)}, {"psibar", to_json(pb)}});
      o.rows.push_back({format12(l), Output::cell(ph), Output::cell(ps), Output::cell(pb)});
    }
    o.json["grid"] = grid;
    return o;
  }
  o.header = {"kind", "index", "value"};
  auto rows = [&](const char* kind, const CVec& v) {
    for (std::size_t i = 0; i < v.size(); ++i) o.rows.push_back({kind, std::to_string(i), Output::cell(v[i])});
  };
  rows("beta", fm->wh.betas);
  rows("gamma", fm->wh.gammas);
  rows("theta", fm->wh.thetas);
  rows("eta", fm->wh.etas);
  o.rows.push_back({"ubar_atom", "0", Output::cell(fm->rep.atom)});
  for (std::size_t k = 0; k < fm->rep.terms.size(); ++k)
    o.rows.push_back({"ubar_u", std::to_string(k), Output::cell(fm->rep.terms[k].u)});
  return o;
}

Output do_triple(const LevyModelSpec& spec, const RunParams& p) {
  require_positive(p.x, "x");
  const auto b = build_bundle(factorize_model(spec), p.x);
  const auto t = triple_law(b);
  Output o;
  o.scalar("x", p.x);
  o.scalar("range_prob", t.range_prob);
  o.scalar("A0", t.A0);
  o.scalar("Abar0", t.Abar0);
  o.json["potential_mode"] = t.potential_mode;
  o.json["sup_law"] = to_json(t.sup_law);
  o.json["inf_law"] = to_json(t.inf_law);
  if (!p.lambdas.empty()) {
    Json grid = Json::array();
    o.header = {"lambda", "A", "Abar", "B", "Bbar", "C", "Cbar"};
    o.rows.clear();
    for (double l : p.lambdas) {
      const cplx v[6] = {func_A(b, l), func_Abar(b, l), func_B(b, l), func_Bbar(b, l), func_C(b, l), func_Cbar(b, l)};
      Json g{{"lambda", round12(l)}};
      std::vector<std::string> row{format12(l)};
      for (int i = 0; i < 6; ++i) {
        g[o.header[i + 1]] = to_json(v[i]);
        row.push_back(Output::cell(v[i]));
      }
      grid.push_back(g);
      o.rows.push_back(row);
    }
    o.json["grid"] = grid;
  }
  return o;
}

Output do_exit(const LevyModelSpec& spec, const RunParams& p) {
  require_positive(p.a, "a");
  require_positive(p.b, "b");
  const auto e = two_sided_exit(spec, p.a, p.b);
  Output o;
  o.scalar("a", p.a);
  o.scalar("b", p.b);
  o.scalar("prob_up", e.prob_up);
  o.scalar("prob_down", e.prob_down);
  o.scalar("prob_none", e.prob_none);
  o.json["up_overshoot"] = to_json(e.up_overshoot);
  return o;
}

Output do_vx(const LevyModelSpec& spec, const RunParams& p) {
  require_positive(p.x, "x");
  const auto v = law_at_Vx(build_bundle(factorize_model(spec), p.x));
  Output o;
  o.scalar("x", p.x);
  o.scalar("prob", v.prob);
  o.json["sup_law"] = to_json(v.sup_law);
  o.json["rates"] = to_json(v.rates);
  return o;
}

Output do_vupx(const LevyModelSpec& spec, const RunParams& p) {
  require_positive(p.x, "x");
  const auto v = law_at_Vupx(build_bundle(factorize_model(spec), p.x));
  Output o;
  o.scalar("x", p.x);
  o.scalar("prob", v.prob);
  o.json["overshoot_law"] = to_json(v.overshoot_law);
  o.json["inf_law_available"] = v.inf_law_available;
  if (v.inf_law_available) o.json["inf_law"] = to_json(v.inf_law);
  o.json["neumann_terms"] = v.neumann_terms;
  return o;
}

Output do_ux(const LevyModelSpec& spec, const RunParams& p) {
  require_positive(p.x, "x");
  const auto u = law_at_Ux(build_bundle(factorize_model(spec), p.x));
  Output o;
  o.scalar("x", p.x);
  o.scalar("prob_bottom", u.prob_bottom);
  o.scalar("prob_top", u.prob_top);
  o.scalar("range_prob", u.range_prob);
  o.json["sup_at_bottom"] = to_json(u.sup_at_bottom);
  o.json["inf_at_top"] = to_json(u.inf_at_top);
  o.json["overshoot_at_top"] = to_json(u.overshoot_at_top);
  return o;
}

InversionParams inversion(const RunParams& p) {
  InversionParams ip;
  ip.terms = p.terms;
  return ip;
}

BarrierContract contract_of(const RunManifest& m) {
  if (m.contract_path.empty()) fail(ErrorCode::InvalidParams, "this command needs --contract");
  return load_contract(m.contract_path);
}

Output do_price(const LevyModelSpec& spec, const RunManifest& m) {
  const auto c = contract_of(m);
  const auto r = price(spec, c, inversion(m.params));
  Output o;
  o.scalar("price", r.price);
  o.scalar("ko_component", r.ko_component);
  o.scalar("rebate_up_component", r.rebate_up_component);
  o.scalar("rebate_down_component", r.rebate_down_component);
  o.scalar("discount_factor", r.discount_factor);
  o.json["contract"] = to_json(c);
  return o;
}

Output do_mc_check(const LevyModelSpec& spec, const RunManifest& m) {
  const auto& p = m.params;
  PathConfig cfg;
  cfg.step = p.step;
  cfg.seed = p.seed;
  cfg.workers = p.workers;
  const std::string& qn = p.quantity;
  cplx analytic = 0.0;
  Functional f;
  auto bundle = [&] {
    require_positive(p.x, "x");
    return build_bundle(factorize_model(spec), p.x);
  };
  if (qn == "range") {
    analytic = triple_law(bundle()).range_prob;
    f = Functional::range_below(p.x);
  } else if (qn == "vx") {
    analytic = law_at_Vx(bundle()).prob;
    f = Functional::drawdown_hit(p.x);
  } else if (qn == "vupx") {
    analytic = law_at_Vupx(bundle()).prob;
    f = Functional::drawup_hit(p.x);
  } else if (qn == "ux-top" || qn == "ux-bottom") {
    const auto u = law_at_Ux(bundle());
    analytic = qn == "ux-top" ? u.prob_top : u.prob_bottom;
    f = qn == "ux-top" ? Functional::range_exit_top(p.x) : Functional::range_exit_bottom(p.x);
  } else if (qn == "exit-up" || qn == "exit-down") {
    require_positive(p.a, "a");
    require_positive(p.b, "b");
    const auto e = two_sided_exit(spec, p.a, p.b);
    analytic = qn == "exit-up" ? e.prob_up : e.prob_down;
    f = qn == "exit-up" ? Functional::exit_up(p.a, p.b) : Functional::exit_down(p.a, p.b);
  } else if (qn == "max") {
    analytic = maximum_law(factorize(spec)).cdf(p.level);
    f = Functional::max_below(p.level);
  } else if (qn == "overshoot") {
    require_positive(p.x, "x");
    const auto wh = factorize(spec);
    analytic = overshoot_law(wh, maximum_coefficients(wh), p.x).cdf(p.level);
    f = Functional::overshoot_below(p.x, p.level);
  } else if (qn == "ko") {
    const auto c = contract_of(m);
    analytic = q_domain_ko_value(spec, c);
    f = Functional::barrier_payoff(c);
  } else if (qn == "price") {
    const auto c = contract_of(m);
    analytic = price(spec, c, inversion(p)).price;
    f = Functional::barrier_payoff(c);
    cfg.horizon_mode = HorizonMode::Fixed;
    cfg.horizon = c.maturity;
  } else {
    fail(ErrorCode::InvalidParams, "unknown mc-check quantity '" + qn + "'");
  }
  const auto est = simulate_functional(spec, cfg, f, p.paths);
  Output o;
  o.json["quantity"] = qn;
  if (o.rows.empty()) o.rows.emplace_back();
  o.header.push_back("quantity");
  o.rows[0].push_back(qn);
  o.scalar("analytic", analytic);
  o.scalar("mc_mean", est.mean);
  o.scalar("mc_std_error", est.std_error);
  o.scalar("z_score", est.std_error > 0.0 ? (analytic.real() - est.mean) / est.std_error : 0.0);
  o.json["n_paths"] = est.n_paths;
  o.json["seed"] = p.seed;
  o.header.push_back("n_paths");
  o.rows[0].push_back(std::to_string(est.n_paths));
  return o;
}

void emit(const Output& o, OutputFormat fmt, std::ostream& os) {
  if (fmt == OutputFormat::Json) {
    os << o.json.dump(2) << '\n';
    return;
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(o.header);
  for (const auto& r : o.rows) line(r);
}

Output dispatch(const RunManifest& m) {
  LevyModelSpec spec = load_model(m.model_path);
  if (m.params.q) spec.kill_q = *m.params.q;
  require_valid(spec);
  switch (m.command) {
    case Command::Factorize: return do_factorize(spec, m.params);
    case Command::TripleLaw: return do_triple(spec, m.params);
    case Command::Exit: return do_exit(spec, m.params);
    case Command::Vx: return do_vx(spec, m.params);
    case Command::Vupx: return do_vupx(spec, m.params);
    case Command::Ux: return do_ux(spec, m.params);
    case Command::Price: return do_price(spec, m);
    case Command::McCheck: return do_mc_check(spec, m);
  }
  fail(ErrorCode::InvalidParams, "unhandled command");
}

}  // namespace

int run(const RunManifest& m, std::ostream& out) {
  int status = 0;
  Output o;
  OutputFormat fmt = m.format;
  try {
    o = dispatch(m);
  } catch (const Error& e) {
    o.json = error_record(e.code(), e.what());
    fmt = OutputFormat::Json;
    status = input_error(e.code()) ? 2 : 1;
  }
  if (m.output_path.empty()) {
    emit(o, fmt, out);
    return status;
  }
  std::ofstream f(m.output_path, std::ios::binary);
  if (!f) {
    emit(Output{error_record(ErrorCode::IoError, "cannot write " + m.output_path), {}, {}}, OutputFormat::Json, out);
    return 2;
  }
  emit(o, fmt, f);
  return status;
}

}  // namespace levyexit
