#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "hamzoo/zoo.hpp"

namespace hamzoo {

/// {"family": "cabbatonian", "j": 2, "lambdas": [2.0, 3.0], "sign": -1,
///  "m": 1.0}; "sigma", "order" and "exponent" only where they apply.
nlohmann::json spec_to_json(const HamiltonianSpec& spec,
                            const SystemParams& params);

/// Throws InvalidSpec on missing/ill-typed fields or broken invariants.
/// "m" is optional and falls back to `default_params`.
HamiltonianSpec spec_from_json(const nlohmann::json& j);
SystemParams params_from_json(const nlohmann::json& j,
                              SystemParams default_params = {});

/// Parses JSON text; malformed text becomes InvalidSpec.
nlohmann::json parse_json_text(std::string_view text);

}  // namespace hamzoo
