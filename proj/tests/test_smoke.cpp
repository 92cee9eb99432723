#include <doctest.h>

#include "shadowforge/config/config.hpp"
#include "shadowforge/pipeline/pipeline.hpp"

TEST_CASE("default config round-trips") {
  shadowforge::ExperimentConfig cfg;
  auto j = shadowforge::config_to_json(cfg);
  auto back = shadowforge::parse_config(j);
  CHECK(shadowforge::config_to_json(back) == j);
}
