#include <doctest.h>

#include "edgeplace/config.hpp"
#include "edgeplace/errors.hpp"

using namespace edgeplace;

namespace {

std::string error_key(const std::string& text, std::vector<std::string> overrides = {}) {
  try {
    parse_config_text(text, overrides);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("empty document gives the paper defaults") {
  CHECK(parse_config_text("{}") == Scenario::paper_default());
}

TEST_CASE("single keys override defaults") {
  Scenario expected = Scenario::paper_default();
  expected.v = 1000;
  CHECK(parse_config_text(R"({"v": 1000})") == expected);

  const auto s = parse_config_text(
      R"({"grid.width": 4, "grid.height": 2, "grid.cell_m": 250, "grid.hop_delay_s": 10,
          "node.capacity": 1e10, "users.count": 12, "users.pedestrian_fraction": 0.5,
          "horizon": 7, "e_avg": 3.5, "beta": 2, "policy": "grk", "policy.k": 4, "seed": 99,
          "trace_path": "t.csv", "markov.iterations": 100, "mobility.slot_s": 60})");
  CHECK(s.map == GridMap{4, 2, 250, 10});
  CHECK(s.node_capacity == 1e10);
  CHECK(s.users == 12);
  CHECK(s.mobility.pedestrian_fraction == 0.5);
  CHECK(s.mobility.slot_length_s == 60);
  CHECK(s.horizon == 7);
  CHECK(s.e_avg == 3.5);
  CHECK(s.beta == 2);
  CHECK(s.policy == Policy{PolicyKind::grk, 4});
  CHECK(s.seed == 99);
  CHECK(s.trace_path == "t.csv");
  CHECK(s.markov_iterations == 100);
}

TEST_CASE("errors name the key") {
  CHECK(error_key(R"({"policy": "gk"})") == "policy.k");
  try {
    parse_config_text(R"({"policy": "gk"})");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("policy.k required") != std::string::npos);
  }
  CHECK(error_key(R"({"velocity": 3})") == "velocity");
  CHECK(error_key(R"({"v": "big"})") == "v");
  CHECK(error_key(R"({"users.count": 2.5})") == "users.count");
  CHECK(error_key(R"({"users.count": -3})") == "users.count");
  CHECK(error_key(R"({"horizon": 0})") == "horizon");
  CHECK(error_key(R"({"e_avg": 0})") == "e_avg");
  CHECK(error_key(R"({"beta": 0})") == "beta");
  CHECK(error_key(R"({"grid.cell_m": -1})") == "grid.cell_m");
  CHECK(error_key(R"({"users.pedestrian_fraction": 2})") == "users.pedestrian_fraction");
  CHECK(error_key(R"({"policy": "teleport"})") == "policy");
  CHECK(error_key(R"({"policy": 3})") == "policy");
  CHECK(error_key(R"({"policy.k": 3})") == "policy.k");
  CHECK(error_key(R"({"trace_path": 5})") == "trace_path");
  CHECK(error_key(R"({"seed": "one"})") == "seed");
  CHECK(error_key("[1, 2]") == "<document>");
  CHECK(error_key("{not json") == "<document>");
}

TEST_CASE("round trip") {
  std::vector<Scenario> cases{Scenario::paper_default(), Scenario::desk_preset()};
  Scenario s = Scenario::desk_preset();
  s.policy = {PolicyKind::gk, 7};
  s.trace_path = "/tmp/x.csv";
  s.markov_iterations = 321;
  s.v = 0.1 + 0.2;
  s.e_avg = 1.0 / 3.0;
  s.seed = 18446744073709551615ULL;
  cases.push_back(s);
  for (const auto& c : cases) CHECK(parse_config_text(serialize_config(c)) == c);
}

TEST_CASE("overrides") {
  const std::vector<std::string> o{"v=10", "policy=markov", "seed=5"};
  const auto s = parse_config_text(R"({"v": 1000, "policy": "gm"})", o);
  CHECK(s.v == 10);
  CHECK(s.policy.kind == PolicyKind::markov);
  CHECK(s.seed == 5);
  CHECK(error_key("{}", {"novalue"}) == "novalue");
  CHECK(error_key("{}", {"=3"}) == "=3");
  CHECK(error_key("{}", {"horizon=soon"}) == "horizon");
  CHECK(parse_config_text("{}", std::vector<std::string>{"trace_path=a.csv"}).trace_path == "a.csv");
}

TEST_CASE("shipped config files") {
  CHECK(parse_config(EDGEPLACE_CONFIG_DIR "/desk.json") == Scenario::desk_preset());
  const auto small = parse_config(EDGEPLACE_CONFIG_DIR "/oracle_small.json");
  CHECK(small.users == 4);
  CHECK(small.map.node_count() == 3);
  CHECK(small.beta == 5);
  CHECK_THROWS_AS(parse_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("every documented key is recognized") {
  for (auto key : config_keys()) {
    CAPTURE(key);
    try {
      parse_config_text(R"({")" + std::string(key) + R"(": null})");
    } catch (const ConfigError& e) {
      CHECK(e.key() == key);
      CHECK(std::string(e.what()).find("unknown key") == std::string::npos);
    }
  }
}
