#include "nhtopo/wilson.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "nhtopo/parallel.hpp"

namespace nhtopo {

namespace {

using cd = std::complex<double>;

struct Slice {
  std::vector<WilsonEigen> eigen;
  std::vector<cd> base_values;
};

WilsonFlow flow_over(const BlochModel& model, std::size_t loop_samples, std::size_t flow_samples, double flow0,
                     const std::function<Path(double)>& loop_at, const TrackOptions& options) {
  if (loop_samples < 32 || flow_samples < 32)
    throw Error(ErrorKind::InvalidArgument, "loop and flow samples must be at least 32");
  std::vector<double> params(flow_samples);
  for (std::size_t i = 0; i < flow_samples; ++i)
    params[i] = flow0 + kTwoPi * static_cast<double>(i) / static_cast<double>(flow_samples);

  std::vector<Slice> slices(flow_samples);
  parallel_for(flow_samples, [&](std::size_t i) {
    const Path loop = loop_at(params[i]);
    try {
      slices[i].eigen = wilson_loop(model, loop, loop_samples, options);
      slices[i].base_values = gapped_frame(model, loop.at(0.0), options).values;
    } catch (const Error& e) {
      throw Error(e.kind(), "slice " + std::to_string(i) + " at " + std::to_string(params[i]) + ": " + e.what());
    }
  });

  WilsonFlow flow;
  flow.slice_params = params;
  const std::size_t n = slices.front().eigen.size();
  for (const auto& s : slices) {
    std::vector<double> ph, mod;
    double sum = 0.0;
    for (const auto& w : s.eigen) {
      ph.push_back(w.phase);
      mod.push_back(w.modulus);
      sum += w.phase;
      flow.modulus_drift = std::max(flow.modulus_drift, std::abs(w.modulus - 1.0));
    }
    flow.phase_sum_residual = std::max(flow.phase_sum_residual, std::abs(wrap_angle(sum)));
    flow.phases.push_back(std::move(ph));
    flow.moduli.push_back(std::move(mod));
  }

  // Follow each band across slices by continuity of its base-point eigenvalue.
  flow.unwrapped.assign(n, {});
  std::vector<int> band(n);
  for (std::size_t a = 0; a < n; ++a) {
    band[a] = static_cast<int>(a);
    flow.unwrapped[a].push_back(flow.phases[0][a]);
  }
  for (std::size_t i = 1; i <= flow_samples; ++i) {
    const std::size_t prev = i - 1, cur = i % flow_samples;
    const auto match = match_eigenvalues(slices[prev].base_values, slices[cur].base_values);
    for (std::size_t a = 0; a < n; ++a) {
      band[a] = match[static_cast<std::size_t>(band[a])];
      const double last = flow.unwrapped[a].back();
      const double step = wrap_angle(flow.phases[cur][static_cast<std::size_t>(band[a])] - last);
      if (!(std::abs(step) < 0.5 * kPi))
        throw Error(ErrorKind::NonTransversal, "Wilson phase jumps by " + std::to_string(step) + " between slices " +
                                                   std::to_string(prev) + " and " + std::to_string(cur) +
                                                   "; increase flow samples");
      flow.unwrapped[a].push_back(last + step);
    }
  }
  return flow;
}

}  // namespace

std::vector<cd> band_holonomies(const std::vector<EigenFrame>& frames) {
  if (frames.size() < 2) throw Error(ErrorKind::InvalidArgument, "holonomy needs at least two frames");
  const auto n = static_cast<Eigen::Index>(frames.front().size());
  std::vector<cd> w(static_cast<std::size_t>(n), cd(1.0, 0.0));
  for (std::size_t j = 0; j + 1 < frames.size(); ++j)
    for (Eigen::Index a = 0; a < n; ++a)
      w[static_cast<std::size_t>(a)] *= frames[j + 1].left.col(a).dot(frames[j].right.col(a));
  return w;
}

std::vector<WilsonEigen> wilson_loop(const BlochModel& model, const Path& loop, std::size_t resolution,
                                     const TrackOptions& options) {
  if (!loop.closed) throw Error(ErrorKind::InvalidArgument, "Wilson loop requires a closed loop");
  const BandPath bp = track(model, loop, resolution, options);
  const Permutation p = bp.composite();
  if (!p.is_identity())
    throw Error(ErrorKind::WindingAlongLoop, "bands are exchanged along the loop " + p.to_cycles());
  std::vector<WilsonEigen> out;
  for (const cd& w : band_holonomies(bp.frames)) out.push_back({wrap_angle(std::arg(w)), std::abs(w)});
  return out;
}

WilsonFlow wilson_flow(const BlochModel& model, const CylinderSpec& spec, const TrackOptions& options) {
  if (!(spec.radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "cylinder radius must be positive");
  return flow_over(
      model, spec.loop_samples, spec.flow_samples, spec.kz0,
      [&](double kz) { return circle_loop(Momentum{spec.cx, spec.cy, kz}, spec.radius, 0, 1, spec.theta0); },
      options);
}

WilsonFlow wilson_flow(const BlochModel& model, const TorusSpec& spec, const TrackOptions& options) {
  if (spec.loop_axis > 2 || spec.flow_axis > 2 || spec.loop_axis == spec.flow_axis)
    throw Error(ErrorKind::InvalidArgument, "loop and flow axes must be distinct axes of a 3D zone");
  const std::size_t fixed_axis = 3 - spec.loop_axis - spec.flow_axis;
  return flow_over(
      model, spec.loop_samples, spec.flow_samples, spec.flow0,
      [&](double s) {
        Momentum base{0.0, 0.0, 0.0};
        base[fixed_axis] = spec.fixed;
        base[spec.flow_axis] = s;
        const std::size_t u = spec.loop_axis, v = spec.flow_axis;
        const bool diagonal = spec.diagonal;
        return Path{[base, u, v, diagonal](double t) {
                      Momentum k = base;
                      k[u] += kTwoPi * t;
                      if (diagonal) k[v] += kTwoPi * t;
                      return k;
                    },
                    true};
      },
      options);
}

CrossingReport count_crossings(const WilsonFlow& flow, double tangency_tol) {
  CrossingReport r;
  r.modulus_drift = flow.modulus_drift;
  r.phase_sum_residual = flow.phase_sum_residual;
  if (flow.unwrapped.empty()) return r;
  const auto& u = flow.unwrapped.front();

  // Samples within tangency_tol of a multiple of π are "on a line"; crossings
  // are counted between consecutive samples that are off every line.
  auto on_line = [&](double x) { return std::abs(x - kPi * std::round(x / kPi)) < tangency_tol; };
  auto count_between = [&](double a, double b) {
    const double lo = std::min(a, b) / kPi, hi = std::max(a, b) / kPi;
    for (long j = static_cast<long>(std::floor(lo)) + 1; j <= static_cast<long>(std::floor(hi)); ++j) {
      if (j % 2 == 0)
        ++r.n_zero;
      else
        ++r.n_pi;
    }
  };

  std::size_t last_off = u.size();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (on_line(u[i])) continue;
    if (last_off != u.size()) {
      if (last_off + 1 < i && std::floor(u[last_off] / kPi) == std::floor(u[i] / kPi))
        throw Error(ErrorKind::NonTransversal,
                    "Wilson phase touches " + std::to_string(std::round(u[i - 1] / kPi)) +
                        "*pi without crossing near slice " + std::to_string(i - 1) + "; refine flow samples");
      count_between(u[last_off], u[i]);
    }
    last_off = i;
  }
  r.nu = r.n_pi % 2;
  return r;
}

void write_flow_csv(std::ostream& out, const WilsonFlow& flow) {
  out << "kz,phi1,phi2,mod1,mod2\n";
  char buf[64];
  for (std::size_t i = 0; i < flow.slice_params.size(); ++i) {
    std::string line;
    auto put = [&](double v) {
      std::snprintf(buf, sizeof buf, "%.12g", v);
      if (!line.empty()) line += ',';
      line += buf;
    };
    put(flow.slice_params[i]);
    for (double p : flow.phases[i]) put(p);
    for (double m : flow.moduli[i]) put(m);
    out << line << '\n';
  }
}

}  // namespace nhtopo
