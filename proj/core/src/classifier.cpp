#include "mmsbayes/classifier.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mmsbayes/error.hpp"
#include "mmsbayes/special.hpp"
#include "mmsbayes/tally.hpp"

namespace mmsbayes {

namespace {

void require_two(std::span<const FactoryProfile> profiles,
                 const Simplex& prior_probs) {
  if (profiles.size() != 2) {
    throw DomainError("classification compares exactly two factory profiles");
  }
  if (prior_probs.size() != profiles.size()) {
    throw DomainError("prior over factories must have one entry per profile");
  }
}

FactoryPosterior posterior_from(const std::vector<double>& log_likelihood,
                                 const Simplex& prior_probs) {
  std::vector<double> log_weights(log_likelihood.size());
  for (std::size_t f = 0; f < log_weights.size(); ++f) {
    log_weights[f] = std::log(prior_probs[f]) + log_likelihood[f];
  }
  return FactoryPosterior{Simplex::normalized(normalize_log_weights(log_weights)),
                          log_likelihood[0] - log_likelihood[1]};
}

std::string upper(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::toupper(c));
  });
  return out;
}

LotCodeResult scan(std::string_view text,
                   const std::vector<std::pair<std::string, std::string>>& codes) {
  const std::string haystack = upper(text);
  if (haystack.find_first_not_of(" \t\r\n") == std::string::npos) {
    return {std::nullopt, "empty lot text"};
  }
  std::vector<const std::pair<std::string, std::string>*> hits;
  for (const auto& entry : codes) {
    if (!entry.first.empty() &&
        haystack.find(upper(entry.first)) != std::string::npos) {
      hits.push_back(&entry);
    }
  }
  if (hits.empty()) return {std::nullopt, "no known lot code found"};
  if (hits.size() > 1) {
    std::string reason = "ambiguous: found";
    for (const auto* h : hits) reason += " " + h->first;
    return {std::nullopt, reason};
  }
  return {hits.front()->second, "matched " + hits.front()->first};
}

}  // namespace

double FactoryProfile::blue() const { return colour_proportions[kBlue]; }

FactoryPosterior classify_blue(const CountVector& data,
                               std::span<const FactoryProfile> profiles,
                               const Simplex& prior_probs) {
  require_two(profiles, prior_probs);
  if (data.size() != 2) {
    throw DomainError("classify_blue needs (blue, not blue) counts");
  }
  std::vector<double> log_likelihood;
  for (const auto& p : profiles) {
    log_likelihood.push_back(
        binomial_log_pmf(data[0], data.total(), Probability(p.blue())));
  }
  return posterior_from(log_likelihood, prior_probs);
}

FactoryPosterior classify_blue(const CountVector& data,
                               std::span<const FactoryProfile> profiles) {
  return classify_blue(data, profiles, Simplex::uniform(profiles.size()));
}

FactoryPosterior classify_full(const CountVector& data,
                               std::span<const FactoryProfile> profiles,
                               const Simplex& prior_probs) {
  require_two(profiles, prior_probs);
  std::vector<double> log_likelihood;
  for (const auto& p : profiles) {
    if (data.size() != p.colour_proportions.size()) {
      throw DomainError("classify_full: counts have " +
                        std::to_string(data.size()) + " colours, profile '" +
                        p.name + "' has " +
                        std::to_string(p.colour_proportions.size()));
    }
    log_likelihood.push_back(multinomial_log_pmf(data, p.colour_proportions));
  }
  return posterior_from(log_likelihood, prior_probs);
}

FactoryPosterior classify_full(const CountVector& data,
                               std::span<const FactoryProfile> profiles) {
  return classify_full(data, profiles, Simplex::uniform(profiles.size()));
}

LotCodeResult parse_lot_code(std::string_view text) {
  static const std::vector<std::pair<std::string, std::string>> kDefault = {
      {"CLV", "Tennessee"}, {"HKP", "New Jersey"}};
  return scan(text, kDefault);
}

LotCodeResult parse_lot_code(std::string_view text,
                             std::span<const FactoryProfile> profiles) {
  std::vector<std::pair<std::string, std::string>> codes;
  for (const auto& p : profiles) codes.emplace_back(p.lot_code, p.name);
  return scan(text, codes);
}

ProfileSet parse_factory_profiles(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("factory profile config is not JSON: ") +
                      e.what());
  }
  if (!doc.is_object() || !doc.contains("factories") ||
      !doc["factories"].is_array()) {
    throw DomainError("factory profile config needs a 'factories' array");
  }
  ProfileSet out;
  out.provenance = doc.value("provenance", "");
  for (const auto& entry : doc["factories"]) {
    const std::string name = entry.value("name", "");
    const std::string lot_code = entry.value("lot_code", "");
    if (name.empty()) throw DomainError("factory profile without a name");
    if (lot_code.empty()) {
      throw DomainError("factory profile '" + name + "' has an empty lot_code");
    }
    if (!entry.contains("colours") || !entry["colours"].is_object()) {
      throw DomainError("factory profile '" + name + "' needs a 'colours' object");
    }
    const auto& colours = entry["colours"];
    for (const auto& [key, value] : colours.items()) {
      if (std::find(kColours.begin(), kColours.end(), key) == kColours.end()) {
        throw DomainError("factory profile '" + name + "' has unknown colour '" +
                          key + "'");
      }
    }
    std::vector<double> weights;
    double sum = 0.0;
    for (auto colour : kColours) {
      const std::string key(colour);
      if (!colours.contains(key) || !colours[key].is_number()) {
        throw DomainError("factory profile '" + name + "' is missing colour '" +
                          key + "'");
      }
      const double w = colours[key].get<double>();
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw DomainError("factory profile '" + name +
                          "' has a negative or non-finite proportion");
      }
      weights.push_back(w);
      sum += w;
    }
    if (std::fabs(sum - 1.0) > kProfileSimplexTolerance) {
      throw DomainError("factory profile '" + name +
                        "' proportions sum to " + std::to_string(sum) +
                        ", not 1 within 1e-6");
    }
    if (std::fabs(sum - 1.0) > Simplex::kTolerance) {
      std::ostringstream msg;
      msg << "factory profile '" << name << "' proportions sum to "
          << std::setprecision(12) << sum << "; renormalized";
      out.warnings.push_back(msg.str());
    }
    out.profiles.push_back(
        FactoryProfile{name, lot_code, Simplex::normalized(std::move(weights))});
  }
  if (out.profiles.empty()) throw DomainError("factory profile config is empty");
  return out;
}

ProfileSet load_factory_profiles(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open factory profile config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_factory_profiles(buffer.str());
}

}  // namespace mmsbayes
