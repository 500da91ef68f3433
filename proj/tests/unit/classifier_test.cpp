#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "mmsbayes/classifier.hpp"
#include "mmsbayes/error.hpp"
#include "mmsbayes/tally.hpp"
#include "oracles.hpp"

using namespace mmsbayes;

namespace {

std::vector<FactoryProfile> default_profiles() {
  return load_factory_profiles(std::string(MMSBAYES_CONFIG_DIR) + "/factories.json").profiles;
}

}  // namespace

TEST(Profiles, DefaultConfig) {
  const auto set = load_factory_profiles(std::string(MMSBAYES_CONFIG_DIR) + "/factories.json");
  ASSERT_EQ(set.profiles.size(), 2u);
  EXPECT_EQ(set.profiles[0].name, "New Jersey");
  EXPECT_EQ(set.profiles[0].lot_code, "HKP");
  EXPECT_DOUBLE_EQ(set.profiles[0].blue(), 0.25);
  EXPECT_DOUBLE_EQ(set.profiles[1].blue(), 0.207);
  EXPECT_FALSE(set.provenance.empty());
  EXPECT_TRUE(set.warnings.empty());
}

TEST(Profiles, RenormalizesWithinToleranceOnly) {
  const std::string near = R"({"factories":[
    {"name":"A","lot_code":"AAA","colours":{"blue":0.2500004,"orange":0.25,"green":0.125,"yellow":0.125,"red":0.125,"brown":0.125}},
    {"name":"B","lot_code":"BBB","colours":{"blue":0.2,"orange":0.2,"green":0.2,"yellow":0.2,"red":0.1,"brown":0.1}}]})";
  const auto set = parse_factory_profiles(near);
  EXPECT_EQ(set.warnings.size(), 1u);
  double sum = 0;
  for (double w : set.profiles[0].colour_proportions.weights()) sum += w;
  EXPECT_NEAR(sum, 1.0, 1e-15);

  const std::string far = R"({"factories":[
    {"name":"A","lot_code":"AAA","colours":{"blue":0.3,"orange":0.25,"green":0.125,"yellow":0.125,"red":0.125,"brown":0.125}}]})";
  EXPECT_THROW(parse_factory_profiles(far), DomainError);
  EXPECT_THROW(parse_factory_profiles(R"({"factories":[{"name":"A","colours":{"blue":1}}]})"),
               DomainError);
  EXPECT_THROW(parse_factory_profiles("not json"), DomainError);
}

TEST(ClassifyBlue, ClassFixture) {
  const auto profiles = default_profiles();
  const auto r = classify_blue(CountVector::binary(25, 100), profiles);
  const double ref = oracle::two_factory_probability(0.25, 0.207, 25, 100);
  EXPECT_NEAR(r.probs[0], ref, 1e-9);
  EXPECT_NEAR(r.probs[0], 0.631, 5e-4);
  EXPECT_NEAR(r.log_bayes_factor, std::log(ref / (1 - ref)), 1e-9);
  EXPECT_NEAR(r.probs[0] + r.probs[1], 1.0, 1e-15);
}

TEST(ClassifyBlue, PriorShiftsPosteriorOdds) {
  const auto profiles = default_profiles();
  const auto flat = classify_blue(CountVector::binary(25, 100), profiles);
  const auto tilted = classify_blue(CountVector::binary(25, 100), profiles, Simplex({0.2, 0.8}));
  const double odds = flat.probs[0] / flat.probs[1] * 0.25;
  EXPECT_NEAR(tilted.probs[0] / tilted.probs[1], odds, 1e-10);
  EXPECT_NEAR(tilted.log_bayes_factor, flat.log_bayes_factor, 1e-12);
}

TEST(ClassifyBlue, ManyCandiesStayFinite) {
  const auto r = classify_blue(CountVector::binary(25000, 100000), default_profiles());
  EXPECT_NEAR(r.probs[0], 1.0, 1e-12);
  EXPECT_TRUE(std::isfinite(r.log_bayes_factor));
}

TEST(ClassifyFull, MatchesDirectMultinomialRatio) {
  const auto profiles = default_profiles();
  const CountVector c({25, 22, 14, 13, 12, 14});
  const auto r = classify_full(c, profiles);
  oracle::big l0 = 1, l1 = 1;
  for (std::size_t k = 0; k < 6; ++k) {
    l0 *= pow(oracle::big(profiles[0].colour_proportions[k]), c[k]);
    l1 *= pow(oracle::big(profiles[1].colour_proportions[k]), c[k]);
  }
  EXPECT_NEAR(r.probs[0], static_cast<double>(l0 / (l0 + l1)), 1e-12);
  EXPECT_THROW(classify_full(CountVector::binary(1, 3), profiles), DomainError);
}

TEST(LotCode, DefaultTable) {
  EXPECT_EQ(parse_lot_code("HKP 1234").factory, std::optional<std::string>("New Jersey"));
  EXPECT_EQ(parse_lot_code("x-clv-9").factory, std::optional<std::string>("Tennessee"));
  EXPECT_FALSE(parse_lot_code("").factory.has_value());
  EXPECT_FALSE(parse_lot_code("ABC123").factory.has_value());
  const auto both = parse_lot_code("HKP/CLV");
  EXPECT_FALSE(both.factory.has_value());
  EXPECT_NE(both.reason, parse_lot_code("ABC").reason);
  EXPECT_NE(parse_lot_code("").reason, parse_lot_code("ABC").reason);
}

TEST(LotCode, AgainstProfiles) {
  const auto profiles = default_profiles();
  EXPECT_EQ(parse_lot_code("hkp", profiles).factory, std::optional<std::string>("New Jersey"));
  EXPECT_EQ(parse_lot_code("CLV 7", profiles).factory, std::optional<std::string>("Tennessee"));
}
