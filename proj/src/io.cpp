#include "levyexit/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "levyexit/errors.hpp"

namespace levyexit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateRate: return "DuplicateRate";
    case ErrorCode::DegenerateModel: return "DegenerateModel";
    case ErrorCode::NegativeParameter: return "NegativeParameter";
    case ErrorCode::PoleEvaluation: return "PoleEvaluation";
    case ErrorCode::RootClassificationAmbiguous: return "RootClassificationAmbiguous";
    case ErrorCode::MultipleRootDetected: return "MultipleRootDetected";
    case ErrorCode::DivergentTransform: return "DivergentTransform";
    case ErrorCode::NotDefined: return "NotDefined";
    case ErrorCode::SingularBundle: return "SingularBundle";
    case ErrorCode::NeumannDivergence: return "NeumannDivergence";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::MomentExplosion: return "MomentExplosion";
    case ErrorCode::OscillationDetected: return "OscillationDetected";
    case ErrorCode::InvalidContract: return "InvalidContract";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ModelFileNotFound: return "ModelFileNotFound";
    case ErrorCode::ContractFileNotFound: return "ContractFileNotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // no negative zero in output
}

std::string format12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", round12(v));
  return buf;
}

Json to_json(cplx v) {
  const double re = round12(v.real()), im = round12(v.imag());
  if (im == 0.0) return re;
  return Json{{"re", re}, {"im", im}};
}

Json to_json(const CVec& v) {
  Json a = Json::array();
  for (const cplx& e : v) a.push_back(to_json(e));
  return a;
}

namespace {

Json bound(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return round12(v);
}

}  // namespace

Json to_json(const ExpPolyMeasure& m) {
  Json atoms = Json::array(), terms = Json::array();
  for (const auto& a : m.atoms) atoms.push_back({{"location", round12(a.location)}, {"mass", to_json(a.mass)}});
  for (const auto& t : m.terms)
    terms.push_back({{"coef", to_json(t.coef)},
                     {"power", t.power},
                     {"rate", to_json(t.rate)},
                     {"anchor", round12(t.anchor)},
                     {"lo", bound(t.lo)},
                     {"hi", bound(t.hi)}});
  return Json{{"atoms", atoms}, {"terms", terms}, {"mass", to_json(m.mass())}};
}

Json to_json(const LevyModelSpec& s) {
  auto jumps = [](const std::vector<JumpComponent>& js) {
    Json a = Json::array();
    for (const auto& c : js) a.push_back({{"weight", c.weight}, {"rate", c.rate}});
    return a;
  };
  return Json{{"sigma", s.sigma}, {"mu", s.mu}, {"kill_q", s.kill_q},
              {"pos_jumps", jumps(s.pos_jumps)}, {"neg_jumps", jumps(s.neg_jumps)}};
}

Json to_json(const WHFactorization& wh, const UbarRepresentation& rep) {
  Json terms = Json::array();
  for (const auto& t : rep.terms) terms.push_back({{"u", to_json(t.u)}, {"theta", to_json(t.theta)}});
  return Json{{"betas", to_json(wh.betas)},
              {"gammas", to_json(wh.gammas)},
              {"thetas", to_json(wh.thetas)},
              {"etas", to_json(wh.etas)},
              {"m", wh.m},
              {"n", wh.n},
              {"creeping", wh.creeping},
              {"lead", to_json(wh.lead)},
              {"ubar", {{"atom", to_json(rep.atom)}, {"terms", terms}}}};
}

Json to_json(const BarrierContract& c) {
  return Json{{"y0", c.y0}, {"strike", c.strike}, {"lower", c.lower}, {"upper", c.upper},
              {"maturity", c.maturity}, {"rebate_up", c.rebate_up}, {"rebate_down", c.rebate_down},
              {"discount_rate", c.discount_rate}};
}

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) fail(ErrorCode::ParseError, where + " must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail(ErrorCode::UnknownKey, "unknown key '" + k + "' in " + where);
}

double number(const Json& j, const std::string& key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) fail(ErrorCode::ParseError, where + "." + key + " must be a number");
  return v.get<double>();
}

std::vector<JumpComponent> jumps_from(const Json& j, const std::string& key) {
  std::vector<JumpComponent> out;
  if (!j.contains(key)) return out;
  const auto& a = j.at(key);
  if (!a.is_array()) fail(ErrorCode::ParseError, key + " must be an array");
  for (const auto& e : a) {
    check_keys(e, {"weight", "rate"}, key + "[]");
    if (!e.contains("weight") || !e.contains("rate"))
      fail(ErrorCode::ParseError, key + "[] needs weight and rate");
    out.push_back({number(e, "weight", 0.0, key), number(e, "rate", 0.0, key)});
  }
  return out;
}

Json read_json(const std::string& path, ErrorCode missing, const std::string& what) {
  std::ifstream in(path);
  if (!in) fail(missing, what + " file not found: " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, what + " file " + path + ": " + e.what());
  }
}

}  // namespace

LevyModelSpec model_from_json(const Json& j) {
  check_keys(j, {"sigma", "mu", "kill_q", "pos_jumps", "neg_jumps"}, "model");
  LevyModelSpec s;
  s.sigma = number(j, "sigma", 0.0, "model");
  s.mu = number(j, "mu", 0.0, "model");
  s.kill_q = number(j, "kill_q", 0.0, "model");
  s.pos_jumps = jumps_from(j, "pos_jumps");
  s.neg_jumps = jumps_from(j, "neg_jumps");
  return s;
}

BarrierContract contract_from_json(const Json& j) {
  check_keys(j, {"y0", "strike", "lower", "upper", "maturity", "rebate_up", "rebate_down", "discount_rate"},
             "contract");
  for (const char* k : {"y0", "strike", "lower", "upper", "maturity"})
    if (!j.contains(k)) fail(ErrorCode::ParseError, std::string("contract needs '") + k + "'");
  BarrierContract c;
  c.y0 = number(j, "y0", 0.0, "contract");
  c.strike = number(j, "strike", 0.0, "contract");
  c.lower = number(j, "lower", 0.0, "contract");
  c.upper = number(j, "upper", 0.0, "contract");
  c.maturity = number(j, "maturity", 0.0, "contract");
  c.rebate_up = number(j, "rebate_up", 0.0, "contract");
  c.rebate_down = number(j, "rebate_down", 0.0, "contract");
  c.discount_rate = number(j, "discount_rate", 0.0, "contract");
  return c;
}

LevyModelSpec load_model(const std::string& path) {
  return model_from_json(read_json(path, ErrorCode::ModelFileNotFound, "model"));
}

BarrierContract load_contract(const std::string& path) {
  return contract_from_json(read_json(path, ErrorCode::ContractFileNotFound, "contract"));
}

Json error_record(ErrorCode code, const std::string& message) {
  return Json{{"code", std::string(to_string(code))}, {"message", message}};
}

}  // namespace levyexit
