#include "doctest.h"

#include "qdot/config.hpp"

using namespace qdot;

TEST_CASE("defaults parse and validate") {
  const RunConfig cfg = parse_config("{}");
  CHECK(cfg.solver.J == 4);
  CHECK(cfg.solver.K == 4);
  CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_AS(parse_config(R"({"solver": {"taux": 1}})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"mystery": {}})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"tolerances": {"ray_angel": 0.1}}})"),
                  Error);
}

TEST_CASE("malformed json is a config error") {
  CHECK_THROWS_AS(parse_config("{ not json"), Error);
}

TEST_CASE("semantic validation") {
  CHECK_THROWS_AS(parse_config(R"({"solver": {"K": 9, "J": 4}})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"tolerances": {"ray_angle": -1.0}}})"),
                  Error);
  // Gaussian dot narrows the sector below the default rotation angle
  CHECK_THROWS_AS(
      parse_config(
          R"({"potential": {"dot": {"family": "gaussian_gaussian", "amplitude": 1.0}},
              "solver": {"theta_im": 0.3}})"),
      Error);
  CHECK_NOTHROW(
      parse_config(
          R"({"potential": {"dot": {"family": "gaussian_gaussian", "amplitude": 1.0}},
              "solver": {"theta_im": 0.2}})"));
}

TEST_CASE("config hash is canonical") {
  const RunConfig a = parse_config(R"({"solver": {"J": 5, "K": 3}})");
  const RunConfig b = parse_config(R"({"solver": {"K": 3, "J": 5}})");
  CHECK(config_hash(a) == config_hash(b));
  const RunConfig c = parse_config(R"({"solver": {"J": 5, "K": 4}})");
  CHECK(config_hash(a) != config_hash(c));
}
