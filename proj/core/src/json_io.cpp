#include "mmsbayes/json_io.hpp"

#include <algorithm>

#include "mmsbayes/error.hpp"

namespace mmsbayes::json_io {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json();
}

std::uint64_t count_field(const json& j, const std::string& key) {
  if (!j.contains(key)) throw DomainError("missing field '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number_unsigned() &&
      !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw DomainError("field '" + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

json to_json(const BetaParams& params) {
  return json{{"alpha", params.alpha()}, {"beta", params.beta()}};
}

json to_json(const PosteriorSummary& summary) {
  return json{{"mean", summary.mean},
              {"mode", optional_number(summary.mode)},
              {"variance", summary.variance},
              {"interval",
               {{"kind", "equal_tailed"},
                {"level", summary.interval.level},
                {"lower", summary.interval.lower},
                {"upper", summary.interval.upper}}}};
}

json to_json(const DensityGrid& grid) {
  return json{{"theta", grid.theta}, {"density", grid.density}};
}

json to_json(const BagTally& bag) {
  json j{{"bag_id", bag.bag_id},
         {"blue", bag.blue()},
         {"total", bag.total()},
         {"lot_code", bag.lot_code ? json(*bag.lot_code) : json()}};
  if (bag.counts.size() == kColours.size()) {
    json counts = json::object();
    for (std::size_t k = 0; k < kColours.size(); ++k) {
      counts[std::string(kColours[k])] = bag.counts[k];
    }
    j["counts"] = counts;
  }
  return j;
}

json to_json(const Session& session) {
  json bags = json::array();
  for (const auto& b : session.bags) bags.push_back(to_json(b));
  const char* phase = session.revealed       ? "revealed"
                      : session.prior_locked ? "collecting"
                                             : "eliciting";
  return json{{"id", session.id},
              {"created_at", session.created_at},
              {"prior", session.prior ? to_json(*session.prior) : json()},
              {"prior_locked", session.prior_locked},
              {"revealed", session.revealed},
              {"phase", phase},
              {"bags", bags},
              {"sequence", session.sequence}};
}

json to_json(const PosteriorView& view) {
  return json{{"scope", view.scope},
              {"prior", to_json(view.prior)},
              {"posterior", to_json(view.posterior)},
              {"data", {{"blue", view.blue}, {"total", view.total}}},
              {"summary", to_json(view.summary)},
              {"grid", to_json(view.grid)},
              {"sequence", view.sequence}};
}

json to_json(const FactoryPosterior& posterior,
             const std::vector<std::string>& factories) {
  json probs = json::array();
  for (std::size_t f = 0; f < posterior.probs.size(); ++f) {
    probs.push_back({{"factory", f < factories.size() ? factories[f] : ""},
                     {"probability", posterior.probs[f]}});
  }
  return json{{"probs", probs}, {"log_bayes_factor", posterior.log_bayes_factor}};
}

json to_json(const LotCodeResult& result) {
  return json{{"factory", result.factory ? json(*result.factory) : json()},
              {"reason", result.reason}};
}

json to_json(const RevealReport& report) {
  json checks = json::array();
  for (const auto& c : report.lot_checks) {
    checks.push_back({{"bag_id", c.bag_id},
                      {"lot_code", c.lot_code ? json(*c.lot_code) : json()},
                      {"parsed", to_json(c.parsed)}});
  }
  std::size_t best = 0;
  for (std::size_t f = 1; f < report.pooled.probs.size(); ++f) {
    if (report.pooled.probs[f] > report.pooled.probs[best]) best = f;
  }
  return json{{"data", {{"blue", report.blue}, {"total", report.total}}},
              {"classification", to_json(report.pooled, report.factories)},
              {"most_probable", report.factories.empty()
                                    ? json()
                                    : json(report.factories[best])},
              {"lot_checks", checks},
              {"sequence", report.sequence}};
}

json to_json(const MixturePosteriorSummary& summary) {
  json betas = json::array();
  for (const auto& b : summary.beta_means) betas.push_back(b.weights());
  return json{{"assignment_probs", summary.assignment_probs},
              {"theta_mean", summary.theta_mean.weights()},
              {"beta_means", betas}};
}

json to_json(const ScalarDiagnostics& diag) {
  return json{{"name", diag.name},
              {"effective_sample_size",
               optional_number(diag.effective_sample_size)},
              {"split_r_hat", optional_number(diag.split_r_hat)}};
}

json to_json(const MixtureState& state) {
  json betas = json::array();
  for (const auto& b : state.beta) betas.push_back(b.weights());
  return json{{"z", state.z}, {"theta", state.theta.weights()}, {"beta", betas}};
}

BagTally bag_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("bag must be a JSON object");
  BagTally bag;
  if (!j.contains("bag_id") || !j["bag_id"].is_string()) {
    throw DomainError("bag needs a string 'bag_id'");
  }
  bag.bag_id = j["bag_id"].get<std::string>();
  if (j.contains("counts")) {
    const json& counts = j["counts"];
    if (!counts.is_object()) throw DomainError("'counts' must be an object");
    for (const auto& [key, _] : counts.items()) {
      if (std::find(kColours.begin(), kColours.end(), key) == kColours.end()) {
        throw DomainError("unknown colour '" + key + "'");
      }
    }
    std::vector<std::uint64_t> v;
    for (auto colour : kColours) v.push_back(count_field(counts, std::string(colour)));
    bag.counts = CountVector(std::move(v));
  } else if (j.contains("blue") || j.contains("total")) {
    const auto blue = count_field(j, "blue");
    const auto total = count_field(j, "total");
    if (blue > total) throw DomainError("blue exceeds total");
    bag.counts = CountVector::binary(blue, total);
  } else {
    throw DomainError("bag needs 'counts' or 'blue' and 'total'");
  }
  if (j.contains("lot_code") && !j["lot_code"].is_null()) {
    if (!j["lot_code"].is_string()) throw DomainError("'lot_code' must be a string");
    bag.lot_code = j["lot_code"].get<std::string>();
  }
  return bag;
}

}  // namespace mmsbayes::json_io
