#include <gtest/gtest.h>

#include <string>

#include "coopsearch/io.hpp"

using namespace coopsearch;
using namespace coopsearch::io;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text, "s.json");
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(FormatDouble, SeventeenDigitsAndRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0 / 3.0), "0.66666666666666663");
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(-0.25), "-0.25");
  EXPECT_EQ(format_double(-1.5e-20), "-1.5000000000000001e-20");
  for (double v : {1.0 / 3.0, -0.0123456789, 6.02e23}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Scenario, OneDDefaults) {
  const auto sc = parse_scenario(R"({"model": "one_d", "one_d": {"r2": 0.5}})");
  EXPECT_EQ(sc.model, ModelKind::OneD);
  EXPECT_EQ(sc.one_d.r1.values.size(), 199u);
  EXPECT_DOUBLE_EQ(sc.one_d.r1.values.front(), 0.005);
  EXPECT_DOUBLE_EQ(sc.one_d.r1.values.back(), 0.995);
  EXPECT_EQ(sc.one_d.priors, std::vector<std::string>{"uniform"});
  EXPECT_EQ(sc.one_d.quadrature, model1d::kDefaultQuadrature);
}

TEST(Scenario, UnknownKeyNamesItsLine) {
  const std::string text = "{\n  \"model\": \"two_d\",\n  \"two_d\": {\n    \"grid\": [7, 7],\n"
                           "    \"sigmaa\": 2.0\n  }\n}\n";
  const std::string err = error_of(text);
  EXPECT_NE(err.find("s.json:5:"), std::string::npos) << err;
  EXPECT_NE(err.find("unknown key 'sigmaa'"), std::string::npos) << err;
}

TEST(Scenario, OutOfRangeValueNamesItsLine) {
  const std::string text = "{\"model\": \"one_d\",\n\"one_d\": {\n\"r2\": 1.5}}";
  const std::string err = error_of(text);
  EXPECT_NE(err.find("s.json:3:"), std::string::npos) << err;
  EXPECT_NE(err.find("r2"), std::string::npos) << err;
}

TEST(Scenario, SyntaxErrorNamesItsLine) {
  const std::string err = error_of("{\n\"model\": \"one_d\",\n\"one_d\": {\"r2\": 0.5,}\n}");
  EXPECT_NE(err.find("line 3"), std::string::npos) << err;
}

TEST(Scenario, StructuralErrors) {
  EXPECT_NE(error_of(R"({"model": "three_d"})").find("expected one of"), std::string::npos);
  EXPECT_NE(error_of(R"({"model": "one_d"})").find("missing section"), std::string::npos);
  EXPECT_NE(error_of(R"({"model": "one_d", "one_d": {"r2": 0.5}, "two_d": {}})")
                .find("does not apply"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"model": "one_d", "one_d": {"r2": 0.5}, "model": "one_d"})")
                .find("duplicate"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"model": "simulate", "simulate": {"d": 0.6}})").find("d must"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"model": "simulate", "simulate": {"start1": [0, 0], "start2": [0, 0]}})")
                .find("different cells"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"model": "two_d", "two_d": {"a": [0.5, 1.0]}})").find("(0, 1)"),
            std::string::npos);
}

TEST(Scenario, KeyLinesSurviveStringsWithColonsAndEscapes) {
  const std::string text =
      "{\n\"model\": \"simulate\",\n\"simulate\": {\n\"modes\": \"both\",\n\"source\": \"random\","
      "\n\"grid\": [8, 8],\n\"bogus\": \"a\\\": b\"\n}\n}";
  const std::string err = error_of(text);
  EXPECT_NE(err.find("s.json:7:"), std::string::npos) << err;
}

TEST(Scenario, EchoParsesBackToTheSameScenario) {
  const std::string texts[] = {
      R"({"model": "one_d", "one_d": {"r2": 0.6666666666666666, "priors": ["uniform", "gaussian"],
          "r1": [0.1, 0.2], "a": {"from": 0.1, "to": 0.9, "count": 5}, "quadrature": 501}})",
      R"({"model": "two_d", "two_d": {"grid": [5, 6], "r2": [1, 3], "prior_peak": [2.5, 2],
          "sigma": 1.5, "d": 0.3, "a": [0.2], "exclude_occupied": false}})",
      R"({"model": "simulate", "simulate": {"grid": [9, 9], "source": [4, 4], "a": 0.3,
          "max_steps": 50, "modes": "both", "seeds": {"first": 5, "count": 10}}})"};
  for (const auto& t : texts) {
    const auto sc = parse_scenario(t);
    const std::string echo = scenario_json(sc).dump();
    EXPECT_EQ(scenario_json(parse_scenario(echo)).dump(), echo);
  }
}

TEST(FieldCsv, RoundTripAndRowOrder) {
  GridField f("r1", {0.1, 0.2, 0.3}, "a", {0.5, 0.7});
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = -1.0 / (3.0 + static_cast<double>(i));
  f.metadata["prior"] = "uniform";
  const std::string csv = field_csv(f, "field1d", Json{{"model", "one_d"}});
  EXPECT_NE(csv.find("# tool: coopsearch 0.1.0"), std::string::npos);
  EXPECT_NE(csv.find("\nr1,a,R\n0.10000000000000001,0.5,-0.33333333333333331\n"
                     "0.10000000000000001,0.69999999999999996,-0.25\n"),
            std::string::npos);
  const auto back = read_field_csv(csv);
  EXPECT_EQ(back.axis1, f.axis1);
  EXPECT_EQ(back.axis2, f.axis2);
  EXPECT_EQ(back.values, f.values);
  EXPECT_EQ(back.metadata.at("prior"), "uniform");
}

TEST(FieldCsv, MalformedInputRejected) {
  EXPECT_THROW(read_field_csv("# only comments\n"), ValidationError);
  EXPECT_THROW(read_field_csv("x,y,R\n0,0,1\n0,1,oops\n"), ValidationError);
  EXPECT_THROW(read_field_csv("x,y,R\n0,0,1\n0,1,2\n1,0,3\n"), ValidationError);
}

TEST(TraceJson, ConfigEchoReproducesTheRun) {
  engine::SearchConfig cfg;
  cfg.grid = {8, 8};
  cfg.start2 = {7, 7};
  cfg.source = {2, 5};
  cfg.seed = 12;
  const auto first = trace_json(engine::run_search(cfg)).dump();
  const auto echoed = parse_scenario(Json::parse(first)["config"].dump());
  engine::SearchConfig again = echoed.simulate.base;
  again.seed = echoed.simulate.first_seed;
  EXPECT_EQ(trace_json(engine::run_search(again)).dump(), first);
  const Json j = Json::parse(first);
  EXPECT_EQ(j["steps"][0]["entropy"].get<double>(), 6.0);
  EXPECT_EQ(j["found"].get<bool>(), j["steps_to_find"].is_number());
}
