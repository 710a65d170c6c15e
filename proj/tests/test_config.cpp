#include "rlt/config.hpp"
#include "rlt/report.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace rlt;

namespace {

std::string error_path(const json &j, const Overrides &o = {}) {
  try {
    load_config(j, o);
  } catch (const ConfigError &e) {
    return e.path;
  }
  return "";
}

}  // namespace

TEST(Config, Defaults) {
  auto rc = load_config(json::object());
  EXPECT_EQ(rc.datum.name, datum_from_tag("GL2").name);
  EXPECT_FALSE(rc.realization);
  EXPECT_TRUE(rc.params.is_object());
}

TEST(Config, FixturesLoad) {
  for (std::string name : {"gl2_ti_p5", "gl2_ti_p3", "example1_sl2", "gl3_reversal"}) {
    auto rc = load_config(read_json_file(std::string(RLT_FIXTURE_DIR) + "/" + name + ".json"));
    EXPECT_TRUE(rc.theta) << name;
  }
  auto rc = load_config(read_json_file(std::string(RLT_FIXTURE_DIR) + "/gl2_ti_p5.json"));
  ASSERT_TRUE(rc.realization);
  EXPECT_EQ(rc.realization->ctx.p, 5);
  EXPECT_EQ(rc.theta->theta_star, (IMat{{-1, 0}, {0, -1}}));
}

TEST(Config, OverridesReplaceRealizationKeys) {
  auto j = read_json_file(std::string(RLT_FIXTURE_DIR) + "/gl2_ti_p5.json");
  Overrides o;
  o.prime = 3;
  o.precision = 7;
  auto rc = load_config(j, o);
  EXPECT_EQ(rc.realization->ctx.p, 3);
  EXPECT_EQ(rc.realization->ctx.k, 7);
  EXPECT_EQ(rc.raw["realization"]["prime"], 3);
}

TEST(Config, ErrorsCarryPaths) {
  EXPECT_EQ(error_path(json{{"bogus", 1}}), "$.bogus");
  EXPECT_EQ(error_path(json{{"realization", {{"prime", 4}}}}), "$.realization.prime");
  EXPECT_EQ(error_path(json{{"realization", {{"precision", 0}}}}), "$.realization.precision");
  EXPECT_EQ(error_path(json{{"realization", {{"theta_star", {{2, 0}, {0, 1}}}}}}), "$.realization.theta_star");
  EXPECT_EQ(error_path(json{{"realization", {{"involution", {{"kind", "outer"}, {"param", {{1, 0}, {0, 1}}}}}}}}),
            "$.realization.involution.kind");
  EXPECT_EQ(error_path(json{{"params", 3}}), "$.params");
  EXPECT_EQ(error_path(json::array()), "$");
}

TEST(Config, RationalsAndMatrices) {
  EXPECT_EQ(q_from_json(json("3/6"), "x"), Q(1, 2));
  EXPECT_EQ(q_to_json(Q(1, 2)), json("1/2"));
  EXPECT_EQ(q_to_json(Q(4)), json(4));
  EXPECT_THROW(q_from_json(json("x"), "x"), ConfigError);
  EXPECT_EQ(parse_matrix("5,1;0,1/25"), (QMat{{Q(5), Q(1)}, {Q(0), Q(1, 25)}}));
  EXPECT_THROW(parse_matrix("1,2;3"), ConfigError);
  EXPECT_THROW(imat_from_json(json{{1, 2}, {3}}, "m"), ConfigError);
}

TEST(Config, BorelSetFromJson) {
  RootDatum d = datum_from_tag("GL2");
  json j{{"e", {2, 0}}, {"1", {0, 2}}};
  auto s = borel_set_from_json(d, j, "set");
  EXPECT_TRUE(validate_orthogonal(s, d).positive);
  EXPECT_THROW(borel_set_from_json(d, json{{"e", {2, 0}}}, "set"), ConfigError);
  EXPECT_THROW(borel_set_from_json(d, json{{"e", {2, 0}}, {"1", {0, 2, 1}}}, "set"), ConfigError);
  EXPECT_EQ(to_json(d, s)["points"][0]["point"], json({2, 0}));
}

TEST(Config, FunctionTables) {
  FiniteLieAlgebra alg{Ring(3, 1), LieType::sl2, LieInvolution::InnerDiag};
  auto f = function_table_from_json(alg, json{{"1,0,0,2", 5}}, "f");
  EXPECT_EQ(f.at(M2{1, 0, 0, 2}), 5);
  EXPECT_THROW(function_table_from_json(alg, json{{"1,0,0,1", 5}}, "f"), ConfigError);  // trace 2
  EXPECT_THROW(function_table_from_json(alg, json{{"1,0", 5}}, "f"), ConfigError);
}

TEST(Report, JsonLinesCarryOp) {
  std::ostringstream os;
  Reporter r(os, Format::Jsonl);
  r.emit("padic.cartan_decomposition", json{{"lambda", {1, -2}}});
  r.emit("orthoset.hull_member", json{{"inside", true}}, 3);
  r.finish();
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(json::parse(line)["op"], "padic.cartan_decomposition");
  std::getline(is, line);
  EXPECT_EQ(json::parse(line)["index"], 3);
}

TEST(Report, CsvUsesUnionOfKeys) {
  std::ostringstream os;
  Reporter r(os, Format::Csv);
  r.emit("a.x", json{{"u", 1}});
  r.emit("a.y", json{{"v", "p,q"}});
  r.finish();
  EXPECT_EQ(os.str(), "op,u,v\na.x,1,\na.y,,\"p,q\"\n");
}
