#pragma once

#include "homvcp/engine.hpp"

namespace homvcp::test {

inline Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

inline Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

inline EngineConfig run_config(double delta, const Vec& center, double radius, std::uint64_t seed = 1) {
  EngineConfig cfg;
  cfg.delta = delta;
  cfg.roi = RoiSpec{center, radius};
  cfg.seed = seed;
  return cfg;
}

}  // namespace homvcp::test
