#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmsbayes/distributions.hpp"

namespace mmsbayes {

struct FactoryProfile {
  std::string name;
  std::string lot_code;
  Simplex colour_proportions;  // kColours order

  double blue() const;
};

struct FactoryPosterior {
  Simplex probs;            // one entry per profile, in profile order
  double log_bayes_factor;  // profile 0 versus profile 1
};

// Factory of origin from (blue, not blue) counts:
// P(f | y, n) proportional to prior_f * Binomial(y; n, blue_f).
FactoryPosterior classify_blue(const CountVector& data,
                               std::span<const FactoryProfile> profiles,
                               const Simplex& prior_probs);
FactoryPosterior classify_blue(const CountVector& data,
                               std::span<const FactoryProfile> profiles);

// Same with a multinomial likelihood over all six colours.
FactoryPosterior classify_full(const CountVector& data,
                               std::span<const FactoryProfile> profiles,
                               const Simplex& prior_probs);
FactoryPosterior classify_full(const CountVector& data,
                               std::span<const FactoryProfile> profiles);

struct LotCodeResult {
  std::optional<std::string> factory;
  std::string reason;
};

// Case-insensitive scan for the lot codes CLV (Cleveland, Tennessee) and HKP
// (Hackettstown, New Jersey). Neither or both give an unknown result with a
// reason.
LotCodeResult parse_lot_code(std::string_view text);
// Same scan against the lot codes of the given profiles.
LotCodeResult parse_lot_code(std::string_view text,
                             std::span<const FactoryProfile> profiles);

struct ProfileSet {
  std::vector<FactoryProfile> profiles;
  std::string provenance;
  std::vector<std::string> warnings;
};

inline constexpr double kProfileSimplexTolerance = 1e-6;

// Factory profile config (JSON):
//   { "provenance": "...",
//     "factories": [ { "name": "...", "lot_code": "...",
//                      "colours": { "blue": 0.25, ... six colours ... } } ] }
// Proportions within 1e-6 of a simplex are renormalized with a warning;
// anything further off is rejected with DomainError.
ProfileSet parse_factory_profiles(std::string_view json_text);
ProfileSet load_factory_profiles(const std::string& path);

}  // namespace mmsbayes
