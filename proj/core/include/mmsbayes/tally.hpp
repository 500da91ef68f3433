#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmsbayes/distributions.hpp"

namespace mmsbayes {

// Colour order used by every six-category count vector. Blue comes first and
// is the category the two-factory analyses focus on.
inline constexpr std::array<std::string_view, 6> kColours = {
    "blue", "orange", "green", "yellow", "red", "brown"};
inline constexpr std::size_t kBlue = 0;

// One bag's counts. Six-colour bags use kColours order; blue-only bags are
// two-category (blue, not blue).
struct BagTally {
  std::string bag_id;
  CountVector counts;
  std::optional<std::string> lot_code;

  std::uint64_t blue() const { return counts[kBlue]; }
  std::uint64_t total() const { return counts.total(); }

  friend bool operator==(const BagTally&, const BagTally&) = default;
};

// Collapses any tally to (blue, not blue).
CountVector blue_split(const CountVector& counts);

// Sum of (blue, not blue) over bags.
CountVector pooled_blue(const std::vector<BagTally>& bags);

enum class CsvMode {
  // Header bag_id,blue,orange,green,yellow,red,brown[,lot_code].
  strict,
  // Additionally accepts the blue-only header bag_id,blue,total[,lot_code].
  permissive,
};

// Parses a tally CSV. Unknown or missing columns, malformed counts, duplicate
// bag ids and blue > total all throw DomainError naming the problem.
std::vector<BagTally> parse_tally_csv(std::string_view text,
                                      CsvMode mode = CsvMode::strict);
std::vector<BagTally> read_tally_csv(const std::string& path,
                                     CsvMode mode = CsvMode::strict);

// Six-colour header when every bag has six categories, otherwise the
// blue-only header. A lot_code column is written when any bag carries one.
std::string format_tally_csv(const std::vector<BagTally>& bags);

}  // namespace mmsbayes
