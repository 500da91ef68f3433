#include <gtest/gtest.h>

#include "mmsbayes/error.hpp"
#include "mmsbayes/tally.hpp"

using namespace mmsbayes;

namespace {

std::string error_of(std::string_view text, CsvMode mode = CsvMode::strict) {
  try {
    parse_tally_csv(text, mode);
  } catch (const DomainError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(TallyCsv, StrictSixColours) {
  const auto bags = parse_tally_csv(
      "bag_id,blue,orange,green,yellow,red,brown\n"
      "b1,5,4,3,3,2,3\r\n"
      "b2,7,2,2,4,3,2\n");
  ASSERT_EQ(bags.size(), 2u);
  EXPECT_EQ(bags[0].bag_id, "b1");
  EXPECT_EQ(bags[0].counts, CountVector({5, 4, 3, 3, 2, 3}));
  EXPECT_EQ(bags[1].blue(), 7u);
  EXPECT_EQ(bags[1].total(), 20u);
  EXPECT_FALSE(bags[0].lot_code.has_value());
  EXPECT_EQ(pooled_blue(bags), CountVector::binary(12, 40));
  EXPECT_EQ(blue_split(bags[0].counts), CountVector::binary(5, 20));
}

TEST(TallyCsv, LotCodeColumn) {
  const auto bags = parse_tally_csv(
      "bag_id,blue,orange,green,yellow,red,brown,lot_code\n"
      "b1,5,4,3,3,2,3,HKP 123\n"
      "b2,7,2,2,4,3,2,\n");
  EXPECT_EQ(bags[0].lot_code, std::optional<std::string>("HKP 123"));
  EXPECT_FALSE(bags[1].lot_code.has_value());
}

TEST(TallyCsv, PermissiveBlueOnly) {
  const std::string text = "bag_id,blue,total\nb1,6,25\nb2,7,25\n";
  EXPECT_NE(error_of(text), "");
  const auto bags = parse_tally_csv(text, CsvMode::permissive);
  ASSERT_EQ(bags.size(), 2u);
  EXPECT_EQ(bags[0].counts, CountVector::binary(6, 25));
  EXPECT_NE(error_of("bag_id,blue,total\nb1,26,25\n", CsvMode::permissive), "");
}

TEST(TallyCsv, NamedErrors) {
  EXPECT_NE(error_of("bag_id,blue,orange,green,yellow,red,brown,purple\nb,1,1,1,1,1,1,1\n")
                .find("purple"),
            std::string::npos);
  EXPECT_NE(error_of("bag_id,blue,orange,green,yellow,red\nb,1,1,1,1,1\n").find("brown"),
            std::string::npos);
  EXPECT_NE(error_of("bag_id,blue,orange,green,yellow,red,brown\nb,1,1,1,1,1,1\nb,2,2,2,2,2,2\n")
                .find("duplicate"),
            std::string::npos);
  EXPECT_NE(error_of("bag_id,blue,orange,green,yellow,red,brown\nb,1,x,1,1,1,1\n"), "");
  EXPECT_NE(error_of("bag_id,blue,orange,green,yellow,red,brown\nb,1,-1,1,1,1,1\n"), "");
  EXPECT_NE(error_of("bag_id,blue,orange,green,yellow,red,brown\nb,1,1,1\n"), "");
  EXPECT_NE(error_of(""), "");
  EXPECT_NE(error_of("bag_id,orange,blue,green,yellow,red,brown\nb,1,1,1,1,1,1\n"), "");
}

TEST(TallyCsv, FormatRoundTrip) {
  const std::vector<BagTally> six{
      {"a", CountVector({1, 2, 3, 4, 5, 6}), std::nullopt},
      {"b", CountVector({0, 0, 0, 0, 0, 9}), std::string("CLV")}};
  const auto text = format_tally_csv(six);
  EXPECT_EQ(text.substr(0, text.find('\n')), "bag_id,blue,orange,green,yellow,red,brown,lot_code");
  EXPECT_EQ(parse_tally_csv(text), six);

  const std::vector<BagTally> two{{"a", CountVector::binary(3, 10), std::nullopt}};
  EXPECT_EQ(format_tally_csv(two), "bag_id,blue,total\na,3,10\n");
  EXPECT_EQ(parse_tally_csv(format_tally_csv(two), CsvMode::permissive), two);
}
