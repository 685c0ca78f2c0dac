#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>

#include "calgraph/experiment.hpp"

namespace testutil {

inline std::shared_ptr<const calgraph::GraphWindow> make_window(
    const std::string& family, int hops) {
  auto provider = calgraph::generate(calgraph::parse_family(family));
  return calgraph::build_window(provider, provider->base(), hops);
}

inline double uniform_pm1(std::mt19937_64& eng) {
  return 2.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 1.0;
}

inline calgraph::VertexFunction random_function(
    std::shared_ptr<const calgraph::GraphWindow> w, std::mt19937_64& eng) {
  calgraph::VertexFunction f(w);
  for (int i = 0; i < w->size(); ++i) f.set(i, uniform_pm1(eng));
  return f;
}

// random function supported on vertices of depth <= max_depth
inline calgraph::VertexFunction random_supported(
    std::shared_ptr<const calgraph::GraphWindow> w, int max_depth,
    std::mt19937_64& eng) {
  calgraph::VertexFunction f(w);
  for (int i = 0; i < w->size(); ++i)
    if (w->depth_of(i) <= max_depth) f.set(i, uniform_pm1(eng));
  return f;
}

}  // namespace testutil
