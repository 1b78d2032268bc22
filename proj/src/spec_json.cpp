#include "hamzoo/spec_json.hpp"

#include "hamzoo/error.hpp"

namespace hamzoo {

using nlohmann::json;

json spec_to_json(const HamiltonianSpec& spec, const SystemParams& params) {
  json j;
  j["family"] = to_string(spec.family);
  j["j"] = spec.level;
  j["lambdas"] = spec.lambdas;
  j["sign"] = spec.sign;
  j["m"] = params.m;
  if (spec.family == Family::kSigma && spec.sigma) j["sigma"] = *spec.sigma;
  if (spec.family == Family::kTruncatedSeries) j["order"] = spec.order;
  if (spec.family == Family::kPowerBase) j["exponent"] = spec.exponent;
  return j;
}

namespace {

template <typename T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidSpec(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

HamiltonianSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw InvalidSpec("spec must be a JSON object");
  if (!j.contains("family") || !j.at("family").is_string()) {
    throw InvalidSpec("spec needs a string 'family'");
  }
  HamiltonianSpec spec;
  spec.family = family_from_string(j.at("family").get<std::string>());
  spec.lambdas = field<std::vector<double>>(j, "lambdas", {});
  spec.level = field<int>(j, "j", static_cast<int>(spec.lambdas.size()));
  spec.sign = field<int>(j, "sign", -1);
  if (j.contains("sigma")) spec.sigma = field<double>(j, "sigma", 0.0);
  spec.order = field<int>(j, "order", 0);
  spec.exponent = field<int>(j, "exponent", 0);
  validate(spec, params_from_json(j));
  return spec;
}

SystemParams params_from_json(const json& j, SystemParams default_params) {
  SystemParams params = default_params;
  if (j.is_object()) params.m = field<double>(j, "m", default_params.m);
  if (!(params.m > 0.0)) throw InvalidSpec("mass must be positive");
  return params;
}

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidSpec(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace hamzoo
