#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "helpers.hpp"

using namespace spike_regions;
using testing_util::Q;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("spike_regions_io_" + name)).string();
}

Json simple_network_json() {
  return Json::parse(R"({
    "format": "spike_regions.network", "version": 1, "mode": "exact", "T": 2,
    "encoder": {"variant": "direct"},
    "decoder": {"variant": "rate"},
    "layers": [{"W": [[1, "1/3"]], "b": [0.1], "u0": ["0"], "beta": "4/5", "theta": 1}]
  })");
}

}  // namespace

TEST(NetworkJson, ExactRoundTrip) {
  Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    const auto net = random_network<Rational>(rng, 3, {4, 2}, 3);
    const auto back = network_from_json<Rational>(Json::parse(network_to_json(net).dump()));
    EXPECT_EQ(back, net);
  }
  const auto gp = general_position_layer(3, 2);
  EXPECT_EQ(network_from_json<Rational>(network_to_json(gp)), gp);
}

TEST(NetworkJson, FloatRoundTripIsBitExact) {
  Rng rng(6);
  for (int k = 0; k < 20; ++k) {
    auto net = random_network<double>(rng, 2, {3}, 2);
    net.layers[0].W(0, 0) = 0.1 + 0.2;  // not a short decimal
    net.layers[0].b[1] = 1.0 / 3.0;
    const auto back = network_from_json<double>(Json::parse(dump_json(network_to_json(net))));
    EXPECT_EQ(back, net);
  }
}

TEST(NetworkJson, AllDecoderVariantsRoundTrip) {
  auto net = identity_network<Rational>(2, 3, 1);
  const std::vector<DecoderSpec<Rational>> decoders{
      RateDecoder{}, CountDecoder{},
      FirstSpikeTimeDecoder<Rational>{Q(7), SpikeTimeTransform::Identity},
      FirstSpikeTimeDecoder<Rational>{std::nullopt, SpikeTimeTransform::Reciprocal}};
  for (const auto& d : decoders) {
    net.decoder = d;
    EXPECT_EQ(network_from_json<Rational>(network_to_json(net)), net);
  }
}

TEST(NetworkJson, DecimalNumbersReadExactly) {
  const auto net = network_from_json<Rational>(simple_network_json());
  EXPECT_EQ(net.layers[0].b[0], Q(1, 10));
  EXPECT_EQ(net.layers[0].W(0, 1), Q(1, 3));
  EXPECT_EQ(net.layers[0].beta, Q(4, 5));
}

TEST(NetworkJson, RejectsInvalidParameters) {
  auto j = simple_network_json();
  j["layers"][0]["beta"] = 1.5;
  EXPECT_THROW(network_from_json<Rational>(j), ValidationError);
  j = simple_network_json();
  j["layers"][0]["theta"] = 0;
  EXPECT_THROW(network_from_json<Rational>(j), ValidationError);
  j = simple_network_json();
  j["layers"][0]["b"] = Json::array({1, 2});
  EXPECT_THROW(network_from_json<Rational>(j), DimensionError);
}

TEST(NetworkJson, RejectsMalformedFiles) {
  auto j = simple_network_json();
  j.erase("decoder");
  EXPECT_THROW(network_from_json<Rational>(j), FormatError);
  j = simple_network_json();
  j["version"] = 2;
  EXPECT_THROW(network_from_json<Rational>(j), FormatError);
  j = simple_network_json();
  j["format"] = "something.else";
  EXPECT_THROW(network_from_json<Rational>(j), FormatError);
  j = simple_network_json();
  j["decoder"]["variant"] = "magic";
  EXPECT_THROW(network_from_json<Rational>(j), FormatError);
  j = simple_network_json();
  j["layers"][0]["W"] = Json::array({Json::array({1}), Json::array({1, 2})});
  EXPECT_THROW(network_from_json<Rational>(j), FormatError);
  j = simple_network_json();
  j["layers"][0]["beta"] = Json::array();
  EXPECT_THROW(network_from_json<Rational>(j), FormatError);
  EXPECT_THROW(network_from_json<Rational>(Json::array()), FormatError);
}

TEST(NetworkJson, ModeMismatchIsRejected) {
  EXPECT_THROW(network_from_json<double>(simple_network_json()), FormatError);
  EXPECT_EQ(network_mode(simple_network_json()), Mode::Exact);
}

TEST(NetworkFiles, SaveLoadAndErrors) {
  const auto path = temp_path("net.json");
  const auto net = identity_network<Rational>(2, 4, 2);
  save_network(path, net, Json{{"note", "x"}});
  EXPECT_EQ(load_network<Rational>(path), net);
  EXPECT_EQ(read_json_file(path)["meta"]["note"], "x");
  std::remove(path.c_str());
  EXPECT_THROW(load_network<Rational>(temp_path("does_not_exist.json")), IoError);
  write_text_file(path, "{ not json");
  EXPECT_THROW(load_network<Rational>(path), FormatError);
  std::remove(path.c_str());
  EXPECT_THROW(write_text_file("/nonexistent_dir_for_test/x.json", "{}"), IoError);
}

TEST(SpecJson, StepSpecRoundTrip) {
  const StepFunctionSpec<Rational> spec{{{Q(0), Q(1, 3), Q(1)}}, {Q(2), Q(-5, 7)}, Q(1, 9)};
  const auto back = step_spec_from_json<Rational>(Json::parse(step_spec_to_json(spec).dump()));
  EXPECT_EQ(back.breakpoints, spec.breakpoints);
  EXPECT_EQ(back.values, spec.values);
  EXPECT_EQ(back.outside_value, spec.outside_value);
  EXPECT_THROW(step_spec_from_json<Rational>(Json::parse(R"({"breakpoints": [[0, 1]], "values": [1, 2]})")),
               DimensionError);
  EXPECT_THROW(step_spec_from_json<Rational>(Json::parse(R"({"values": [1]})")), FormatError);
}

TEST(SpecJson, Polyhedron) {
  const auto p = polyhedron_from_json<Rational>(Json::parse(R"({"A": [[1, 0], [0, 1]], "b": ["1/2", 1]})"));
  EXPECT_EQ(p.b, (std::vector<Rational>{Q(1, 2), Q(1)}));
  EXPECT_THROW(polyhedron_from_json<Rational>(Json::parse(R"({"A": [[0, 0]], "b": [1]})")), ValidationError);
}

TEST(ReportJson, BigIntegersAreStrings) {
  const BigInt big = count_bound(10, 20, 100);  // 5051^10
  const auto j = bigint_to_json(big);
  ASSERT_TRUE(j.is_string());
  EXPECT_EQ(j.get<std::string>(), big.str());
  EXPECT_EQ(bigint_to_json(BigInt(37)), Json(37));
}
