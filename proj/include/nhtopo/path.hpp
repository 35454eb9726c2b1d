#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "nhtopo/momentum.hpp"

namespace nhtopo {

/// Parametric momentum path t ∈ [0, 1] ↦ k(t). A closed path has k(1) ≡ k(0).
struct Path {
  std::function<Momentum(double)> at;
  bool closed = false;
};

/// Straight loop through the Brillouin zone along `axis`:
/// k_axis = start + 2πt, remaining components taken from `base`.
Path axis_loop(const Momentum& base, std::size_t axis, double start = 0.0);

/// Circle of the given radius around `center` in the plane spanned by axes u, v,
/// counterclockwise from angle `phase`.
Path circle_loop(const Momentum& center, double radius, std::size_t u, std::size_t v,
                 double phase = 0.0);

/// Piecewise-linear path through the points; closed if first == last.
Path polyline(std::vector<Momentum> points);

Path reversed(Path path);

/// Evenly spaced parameters 0, 1/(n−1), …, 1.
std::vector<double> uniform_parameters(std::size_t samples);

}  // namespace nhtopo
