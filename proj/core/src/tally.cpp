#include "mmsbayes/tally.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "mmsbayes/error.hpp"

namespace mmsbayes {

namespace {

std::vector<std::string> split_row(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    std::string_view cell = line.substr(start, comma - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) {
      cell.remove_prefix(1);
    }
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) {
      cell.remove_suffix(1);
    }
    cells.emplace_back(cell);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::uint64_t parse_count(const std::string& cell, std::size_t line_no,
                          std::string_view column) {
  std::uint64_t value = 0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    throw DomainError("line " + std::to_string(line_no) + ": column '" +
                      std::string(column) + "' is not a non-negative integer: '" +
                      cell + "'");
  }
  return value;
}

enum class Layout { colours, blue_total };

}  // namespace

CountVector blue_split(const CountVector& counts) {
  if (counts.size() == 0) return CountVector::zeros(2);
  return CountVector::binary(counts[kBlue], counts.total());
}

CountVector pooled_blue(const std::vector<BagTally>& bags) {
  CountVector pooled = CountVector::zeros(2);
  for (const auto& bag : bags) pooled += blue_split(bag.counts);
  return pooled;
}

std::vector<BagTally> parse_tally_csv(std::string_view text, CsvMode mode) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
    text.remove_prefix(3);
  }
  std::vector<std::string> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t nl = text.find('\n', start);
      if (nl == std::string_view::npos) nl = text.size();
      std::string line(text.substr(start, nl - start));
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
      start = nl + 1;
    }
  }
  std::size_t header_index = 0;
  while (header_index < lines.size() && lines[header_index].empty()) {
    ++header_index;
  }
  if (header_index == lines.size()) throw DomainError("tally CSV is empty");

  auto header = split_row(lines[header_index]);
  std::transform(header.begin(), header.end(), header.begin(),
                 [](std::string h) {
                   std::transform(h.begin(), h.end(), h.begin(), [](char c) {
                     return static_cast<char>(std::tolower(
                         static_cast<unsigned char>(c)));
                   });
                   return h;
                 });

  const bool has_lot = !header.empty() && header.back() == "lot_code";
  std::vector<std::string> core(header.begin(),
                                header.end() - (has_lot ? 1 : 0));

  std::vector<std::string> colour_header{"bag_id"};
  for (auto c : kColours) colour_header.emplace_back(c);
  const std::vector<std::string> blue_header{"bag_id", "blue", "total"};

  Layout layout = Layout::colours;
  if (core == colour_header) {
    layout = Layout::colours;
  } else if (core == blue_header && mode == CsvMode::permissive) {
    layout = Layout::blue_total;
  } else {
    const auto& expected =
        (mode == CsvMode::permissive && core.size() == 3) ? blue_header
                                                          : colour_header;
    for (std::size_t i = 0; i < core.size(); ++i) {
      if (i >= expected.size() || core[i] != expected[i]) {
        const bool known = std::find(expected.begin(), expected.end(),
                                     core[i]) != expected.end();
        throw DomainError((known ? "misplaced column '" : "unknown column '") +
                          core[i] + "' in tally CSV header");
      }
    }
    throw DomainError("missing column '" + expected[core.size()] +
                      "' in tally CSV header");
  }

  std::vector<BagTally> bags;
  std::set<std::string> seen;
  for (std::size_t i = header_index + 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::size_t line_no = i + 1;
    const auto cells = split_row(lines[i]);
    if (cells.size() != header.size()) {
      throw DomainError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, got " +
                        std::to_string(cells.size()));
    }
    BagTally bag;
    bag.bag_id = cells[0];
    if (bag.bag_id.empty()) {
      throw DomainError("line " + std::to_string(line_no) + ": empty bag_id");
    }
    if (!seen.insert(bag.bag_id).second) {
      throw DomainError("line " + std::to_string(line_no) +
                        ": duplicate bag_id '" + bag.bag_id + "'");
    }
    if (layout == Layout::colours) {
      std::vector<std::uint64_t> counts;
      for (std::size_t k = 0; k < kColours.size(); ++k) {
        counts.push_back(parse_count(cells[k + 1], line_no, kColours[k]));
      }
      bag.counts = CountVector(std::move(counts));
    } else {
      const auto blue = parse_count(cells[1], line_no, "blue");
      const auto total = parse_count(cells[2], line_no, "total");
      if (blue > total) {
        throw DomainError("line " + std::to_string(line_no) +
                          ": blue exceeds total");
      }
      bag.counts = CountVector::binary(blue, total);
    }
    if (has_lot && !cells.back().empty()) bag.lot_code = cells.back();
    bags.push_back(std::move(bag));
  }
  return bags;
}

std::vector<BagTally> read_tally_csv(const std::string& path, CsvMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open tally CSV '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_tally_csv(buffer.str(), mode);
}

std::string format_tally_csv(const std::vector<BagTally>& bags) {
  const bool all_colours =
      std::all_of(bags.begin(), bags.end(), [](const BagTally& b) {
        return b.counts.size() == kColours.size();
      });
  const bool any_lot = std::any_of(bags.begin(), bags.end(),
                                   [](const BagTally& b) {
                                     return b.lot_code.has_value();
                                   });
  std::ostringstream out;
  out << "bag_id";
  if (all_colours) {
    for (auto c : kColours) out << ',' << c;
  } else {
    out << ",blue,total";
  }
  if (any_lot) out << ",lot_code";
  out << '\n';
  for (const auto& bag : bags) {
    out << bag.bag_id;
    if (all_colours) {
      for (auto c : bag.counts.counts()) out << ',' << c;
    } else {
      out << ',' << bag.blue() << ',' << bag.total();
    }
    if (any_lot) out << ',' << bag.lot_code.value_or("");
    out << '\n';
  }
  return out.str();
}

}  // namespace mmsbayes
