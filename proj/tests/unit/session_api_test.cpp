#include <gtest/gtest.h>

#include "mmsbayes/session_api.hpp"
#include "session_fuzz.hpp"
#include "test_dirs.hpp"

using namespace mmsbayes;
using nlohmann::json;

namespace {

SessionStoreOptions options(const std::filesystem::path& dir = {}) {
  SessionStoreOptions o;
  o.data_dir = dir;
  o.fsync = false;
  o.profiles = load_factory_profiles(std::string(MMSBAYES_CONFIG_DIR) + "/factories.json").profiles;
  return o;
}

}  // namespace

class ApiTest : public ::testing::Test {
 protected:
  ApiResponse call(const std::string& method, const std::string& path, std::string body = "",
                   std::map<std::string, std::string> query = {}) {
    return api.handle({method, path, std::move(query), std::move(body)});
  }
  json body(const ApiResponse& r) { return json::parse(r.body); }

  SessionStore store{options()};
  SessionApi api{store};
};

TEST_F(ApiTest, ClassFixtureThroughRoutes) {
  const auto created = call("POST", "/sessions");
  ASSERT_EQ(created.status, 201);
  const std::string id = body(created)["id"];
  EXPECT_EQ(body(created)["phase"], "eliciting");
  const std::string base = "/sessions/" + id;

  EXPECT_EQ(call("PUT", base + "/prior", R"({"alpha":2,"beta":9})").status, 200);
  EXPECT_EQ(body(call("POST", base + "/prior/lock"))["phase"], "collecting");
  for (int i = 0; i < 4; ++i) {
    const json bag{{"bag_id", "bag" + std::to_string(i)}, {"blue", i == 0 ? 7 : 6}, {"total", 25}};
    ASSERT_EQ(call("POST", base + "/bags", bag.dump()).status, 201);
  }
  const auto post = call("GET", base + "/posterior", "", {{"scope", "class"}, {"level", "0.95"}});
  ASSERT_EQ(post.status, 200);
  const auto j = body(post);
  EXPECT_EQ(j["posterior"]["alpha"], 27.0);
  EXPECT_EQ(j["posterior"]["beta"], 84.0);
  EXPECT_NEAR(j["summary"]["mean"].get<double>(), 27.0 / 111.0, 1e-15);
  EXPECT_EQ(j["grid"]["theta"].size(), 512u);
  EXPECT_EQ(j["grid"]["density"].size(), 512u);

  const auto reveal = call("POST", base + "/reveal");
  ASSERT_EQ(reveal.status, 200);
  EXPECT_EQ(body(reveal)["most_probable"], "New Jersey");
  EXPECT_EQ(body(call("GET", base))["phase"], "revealed");

  const auto csv = call("GET", base + "/export.csv");
  EXPECT_EQ(csv.status, 200);
  EXPECT_EQ(csv.content_type.rfind("text/csv", 0), 0u);
  EXPECT_EQ(csv.body.substr(0, csv.body.find('\n')), "bag_id,blue,total");
}

TEST_F(ApiTest, ErrorBodies) {
  const auto missing = call("GET", "/sessions/nope");
  EXPECT_EQ(missing.status, 404);
  EXPECT_EQ(body(missing)["code"], "not_found");
  const std::string id = body(call("POST", "/sessions"))["id"];
  const auto early = call("POST", "/sessions/" + id + "/bags", R"({"bag_id":"a","blue":1,"total":2})");
  EXPECT_EQ(early.status, 409);
  EXPECT_EQ(body(early)["rule"], "prior_not_locked");
  EXPECT_TRUE(body(early)["message"].is_string());
  EXPECT_EQ(call("PUT", "/sessions/" + id + "/prior", "{oops").status, 400);
  EXPECT_EQ(call("PUT", "/sessions/" + id + "/prior", R"({"alpha":-1,"beta":2})").status, 400);
  EXPECT_EQ(call("DELETE", "/sessions/" + id).status, 405);
  EXPECT_EQ(call("GET", "/elsewhere").status, 404);
  EXPECT_EQ(call("GET", "/sessions/" + id + "/posterior", "", {{"grid", "1"}}).status, 400);
  EXPECT_EQ(call("GET", "/sessions/" + id + "/posterior", "", {{"level", "x"}}).status, 400);
}

TEST_F(ApiTest, PreviewAndHealth) {
  EXPECT_EQ(call("GET", "/healthz").status, 200);
  const auto p = call("GET", "/preview", "", {{"alpha", "1"}, {"beta", "1"}, {"grid", "32"}});
  ASSERT_EQ(p.status, 200);
  for (const auto& d : body(p)["grid"]["density"]) EXPECT_DOUBLE_EQ(d.get<double>(), 1.0);
  EXPECT_EQ(call("GET", "/preview", "", {{"alpha", "0"}}).status, 400);
}

TEST(ApiFuzz, ModelAgreementAndReplay) {
  ScratchDir dir;
  SessionStore store(options(dir.path()));
  fuzz::Fuzzer fuzzer(store, 2024);
  const auto report = fuzzer.run(3000);
  for (const auto& v : report.violations) ADD_FAILURE() << v;
  EXPECT_GT(report.lock_rule_attempts, 50u);
  EXPECT_GT(report.statuses.at(409), 100u);

  SessionStore reloaded(options(dir.path()));
  for (const auto& [id, model] : fuzzer.models()) EXPECT_EQ(reloaded.get(id), store.get(id));
}
