#include "robcons/config.hpp"

#include <string>

#include <gtest/gtest.h>

#include "robcons/case_study.hpp"

namespace robcons {
namespace {

using nlohmann::json;

json Minimal() {
  return json::parse(R"({
    "agent": {"A": [[-1.0]], "B": [[1.0]], "C": [[1.0]]},
    "topology": {"sets": [{"label": "T", "nodes": 3,
                           "graphs": [{"name": "tri", "edges": [[1,2],[2,3],[1,3]]}]}]}
  })");
}

// Returns the message of the config error raised for `doc`.
std::string ConfigError(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    return e.what();
  }
  ADD_FAILURE() << "expected a config error";
  return "";
}

TEST(Config, MinimalDocumentUsesDefaults) {
  const Config c = parse_config(Minimal());
  EXPECT_EQ(c.gamma_rel, 1.0);
  EXPECT_EQ(c.dt, 0.01);
  EXPECT_EQ(c.t_end, 800.0);
  EXPECT_EQ(c.switch_period, 1.0);
  EXPECT_EQ(c.output_directory, "out");
  EXPECT_EQ(c.box.dA_upper, Matrix::Zero(1, 1));
  ASSERT_EQ(c.bank.sets.size(), 1u);
  EXPECT_EQ(c.bank.sets[0].graphs[0].name(), "tri");
}

TEST(Config, DefaultRoundTrip) {
  const Config c = uuv::default_config();
  const json first = to_json(c);
  const json second = to_json(parse_config(first));
  EXPECT_EQ(first, second);
}

TEST(Config, ShippedFileMatchesDefault) {
  const Config c = load_config(std::string(ROBCONS_SOURCE_DIR) + "/config/uuv_case_study.json");
  EXPECT_EQ(to_json(c), to_json(uuv::default_config()));
  EXPECT_EQ(c.cases.size(), 4u);
  EXPECT_EQ(c.find_case(3).runs.size(), 6u);
  EXPECT_EQ(c.find_case(1).runs.size(), 1u);
}

TEST(Config, ErrorsCarryLocations) {
  json doc = Minimal();
  doc["agent"]["extra"] = 1;
  EXPECT_NE(ConfigError(doc).find("/agent/extra"), std::string::npos);

  doc = Minimal();
  doc["agent"]["A"] = "oops";
  EXPECT_NE(ConfigError(doc).find("/agent/A"), std::string::npos);

  doc = Minimal();
  doc["topology"]["sets"] = json::array();
  EXPECT_NE(ConfigError(doc).find("/topology/sets"), std::string::npos);

  doc = Minimal();
  doc["topology"]["sets"][0]["graphs"][0]["edges"][1] = json::array({2, 2});
  EXPECT_NE(ConfigError(doc).find("/topology/sets/0/graphs/0"), std::string::npos);

  doc = Minimal();
  doc.erase("agent");
  EXPECT_NE(ConfigError(doc).find("/agent"), std::string::npos);

  doc = Minimal();
  doc["synthesis"] = {{"gamma_rel", 0.5}};
  EXPECT_NE(ConfigError(doc).find("/synthesis/gamma_rel"), std::string::npos);
}

TEST(Config, RaggedMatrixIsRejected) {
  json doc = Minimal();
  doc["agent"]["A"] = json::parse("[[1, 2], [3]]");
  EXPECT_NE(ConfigError(doc).find("/agent/A"), std::string::npos);
}

TEST(Config, UnknownCase) {
  try {
    uuv::default_config().find_case(9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
}

TEST(Config, ControllerRoundTrip) {
  const Controller K = uuv::reference_controller();
  const Controller back = controller_from_json(controller_to_json(K));
  EXPECT_EQ(back.K_A, K.K_A);
  EXPECT_EQ(back.K_B, K.K_B);
  EXPECT_EQ(back.K_C, K.K_C);
  EXPECT_EQ(back.K_D, K.K_D);
  EXPECT_THROW(controller_from_json(json::object()), Error);
}

}  // namespace
}  // namespace robcons
