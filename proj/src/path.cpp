#include "nhtopo/path.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "nhtopo/error.hpp"

namespace nhtopo {

Path axis_loop(const Momentum& base, std::size_t axis, double start) {
  if (axis >= base.dim()) throw Error(ErrorKind::InvalidArgument, "loop axis out of range");
  return Path{[base, axis, start](double t) {
                Momentum k = base;
                k[axis] = start + kTwoPi * t;
                return k;
              },
              true};
}

Path circle_loop(const Momentum& center, double radius, std::size_t u, std::size_t v, double phase) {
  if (u >= center.dim() || v >= center.dim() || u == v)
    throw Error(ErrorKind::InvalidArgument, "circle plane axes invalid");
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "circle radius must be positive");
  return Path{[center, radius, u, v, phase](double t) {
                const double angle = phase + kTwoPi * t;
                Momentum k = center;
                k[u] += radius * std::cos(angle);
                k[v] += radius * std::sin(angle);
                return k;
              },
              true};
}

Path polyline(std::vector<Momentum> points) {
  if (points.size() < 2) throw Error(ErrorKind::InvalidArgument, "path needs at least two points");
  const bool closed = points.front() == points.back();
  return Path{[points = std::move(points)](double t) {
                const double s = std::clamp(t, 0.0, 1.0) * static_cast<double>(points.size() - 1);
                const auto i = std::min(static_cast<std::size_t>(s), points.size() - 2);
                const double f = s - static_cast<double>(i);
                if (f == 0.0) return points[i];
                if (f == 1.0) return points[i + 1];
                return points[i] + f * (points[i + 1] - points[i]);
              },
              closed};
}

Path reversed(Path path) {
  auto at = std::move(path.at);
  return Path{[at = std::move(at)](double t) { return at(1.0 - t); }, path.closed};
}

std::vector<double> uniform_parameters(std::size_t samples) {
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "need at least two samples");
  std::vector<double> t(samples);
  for (std::size_t i = 0; i < samples; ++i)
    t[i] = static_cast<double>(i) / static_cast<double>(samples - 1);
  return t;
}

}  // namespace nhtopo
