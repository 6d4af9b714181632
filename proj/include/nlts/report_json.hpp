#pragma once

#include <json.hpp>

#include "nlts/estimate.hpp"
#include "nlts/ident.hpp"
#include "nlts/mixture.hpp"
#include "nlts/simulate.hpp"
#include "nlts/stationarity.hpp"

namespace nlts {

nlohmann::json vector_json(const Eigen::Ref<const Eigen::VectorXd>& v);
nlohmann::json matrix_json(const Eigen::MatrixXd& m);
nlohmann::json to_json(const Curvature& c);
nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const Minimizer& m);
nlohmann::json to_json(const IdentReport& report);
nlohmann::json to_json(const RootCheck& check);
nlohmann::json to_json(const PartialProbeReport& report);
nlohmann::json to_json(const GramReport& report);
nlohmann::json to_json(const NullVector& v);
nlohmann::json to_json(const StationarityReport& report);
nlohmann::json to_json(const AgarchIdentity& result);
nlohmann::json to_json(const PoissonArCheck& check);

}  // namespace nlts
