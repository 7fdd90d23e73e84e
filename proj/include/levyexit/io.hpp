#pragma once

#include <string>

#include <json.hpp>

#include "levyexit/exp_poly_measure.hpp"
#include "levyexit/model_spec.hpp"
#include "levyexit/pricing.hpp"
#include "levyexit/wiener_hopf.hpp"

namespace levyexit {

using Json = nlohmann::ordered_json;

/// Shortest decimal that agrees with `v` to 12 significant digits.
double round12(double v);
std::string format12(double v);

/// Reals as plain numbers; complex values with a nonzero imaginary part as {re, im}.
Json to_json(cplx v);
Json to_json(const CVec& v);
Json to_json(const ExpPolyMeasure& m);
Json to_json(const LevyModelSpec& s);
Json to_json(const WHFactorization& wh, const UbarRepresentation& rep);
Json to_json(const BarrierContract& c);

/// Unknown keys raise UnknownKey; type errors raise ParseError.
LevyModelSpec model_from_json(const Json& j);
BarrierContract contract_from_json(const Json& j);

LevyModelSpec load_model(const std::string& path);
BarrierContract load_contract(const std::string& path);

Json error_record(ErrorCode code, const std::string& message);

}  // namespace levyexit
