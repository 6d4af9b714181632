#pragma once

#include <json.hpp>

#include "nlts/params.hpp"

namespace nlts {

/// Flat key-value document: family, gamma, omega, alpha1[], alpha2[], beta[],
/// d, l, regimes[][], c[], M, p, q. Scalars of the (1,1) families are stored
/// as one-element arrays under alpha1/alpha2/beta. Unknown keys are rejected.
nlohmann::json params_to_json(const AnyParams& params);
AnyParams params_from_json(const nlohmann::json& doc);

nlohmann::json innovation_to_json(const InnovationSpec& spec);
InnovationSpec innovation_from_json(const nlohmann::json& doc);

}  // namespace nlts
