#pragma once

#include <nlohmann/json.hpp>

#include "mmsbayes/classifier.hpp"
#include "mmsbayes/conjugate.hpp"
#include "mmsbayes/diagnostics.hpp"
#include "mmsbayes/hierarchical.hpp"
#include "mmsbayes/session.hpp"

// JSON views of the domain types shared by the HTTP API and the CLI. Doubles
// are written with round-trip precision.
namespace mmsbayes::json_io {

nlohmann::json to_json(const BetaParams& params);
nlohmann::json to_json(const PosteriorSummary& summary);
nlohmann::json to_json(const DensityGrid& grid);
nlohmann::json to_json(const BagTally& bag);
nlohmann::json to_json(const Session& session);
nlohmann::json to_json(const PosteriorView& view);
nlohmann::json to_json(const FactoryPosterior& posterior,
                       const std::vector<std::string>& factories);
nlohmann::json to_json(const LotCodeResult& result);
nlohmann::json to_json(const RevealReport& report);
nlohmann::json to_json(const MixturePosteriorSummary& summary);
nlohmann::json to_json(const ScalarDiagnostics& diag);
nlohmann::json to_json(const MixtureState& state);

// Accepts {"bag_id", "counts": {colour: n, ...six colours}} or
// {"bag_id", "blue", "total"}, each with an optional "lot_code". Throws
// DomainError on malformed input.
BagTally bag_from_json(const nlohmann::json& j);

}  // namespace mmsbayes::json_io
