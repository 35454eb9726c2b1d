#include "nhtopo/nodes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "nhtopo/braids.hpp"
#include "nhtopo/parallel.hpp"
#include "nhtopo/path.hpp"
#include "nhtopo/wilson.hpp"

namespace nhtopo {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::WeylPoint: return "WeylPoint";
    case NodeKind::ExceptionalCrossing: return "ExceptionalCrossing";
    case NodeKind::Unclassified: break;
  }
  return "Unclassified";
}

bool Region::excluded(const Momentum& k) const {
  if (tube_radius <= 0.0) return false;
  std::array<double, 2> d{};
  std::size_t j = 0;
  for (std::size_t a = 0; a < 3; ++a)
    if (a != tube_axis) {
      d[j] = k[a] - tube_center[j];
      ++j;
    }
  return std::hypot(d[0], d[1]) < tube_radius;
}

bool Region::contains(const Momentum& k, double slack) const {
  for (std::size_t a = 0; a < 3; ++a)
    if (k[a] < lo[a] - slack || k[a] > hi[a] + slack) return false;
  return !excluded(k);
}

namespace {

using cd = std::complex<double>;

struct Refined {
  bool converged = false;
  Momentum x;
  double residual = 0.0;
  std::string message;
};

Eigen::Vector2d residual_vec(const BlochModel& model, const Momentum& k) {
  const cd d = discriminant(model(k));
  return {d.real(), d.imag()};
}

// Levenberg–Marquardt on (Re Disc, Im Disc) over the three momentum components.
// At a Weyl point the discriminant vanishes quadratically and convergence is
// linear, so iteration continues until the step itself is negligible.
Refined refine(const BlochModel& model, Momentum x, const FindOptions& opt) {
  Refined out;
  Eigen::Vector2d r = residual_vec(model, x);
  double mu = -1.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (r.norm() == 0.0) break;
    Eigen::Matrix<double, 2, 3> jac;
    for (std::size_t a = 0; a < 3; ++a) {
      Momentum xp = x, xm = x;
      xp[a] += opt.fd_step;
      xm[a] -= opt.fd_step;
      jac.col(static_cast<Eigen::Index>(a)) = (residual_vec(model, xp) - residual_vec(model, xm)) / (2.0 * opt.fd_step);
    }
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d g = jac.transpose() * r;
    if (mu < 0.0) mu = 1e-3 * std::max(jtj.diagonal().maxCoeff(), 1e-300);
    bool accepted = false;
    double step_norm = 0.0;
    for (int tries = 0; tries < 60 && !accepted; ++tries) {
      Eigen::Matrix3d a = jtj;
      a.diagonal().array() += mu;
      const Eigen::Vector3d delta = -a.ldlt().solve(g);
      Momentum xn = x;
      for (std::size_t c = 0; c < 3; ++c) xn[c] += delta(static_cast<Eigen::Index>(c));
      const Eigen::Vector2d rn = residual_vec(model, xn);
      if (rn.norm() < r.norm()) {
        x = xn;
        r = rn;
        step_norm = delta.norm();
        mu = std::max(mu / 3.0, 1e-300);
        accepted = true;
      } else {
        mu *= 4.0;
      }
    }
    if (!accepted || step_norm < 1e-15 * (1.0 + x.norm())) break;
  }
  out.x = x;
  out.residual = r.norm();
  out.converged = out.residual < opt.tol;
  if (!out.converged)
    out.message = "NoConvergence: seed stalled at |Disc| = " + std::to_string(out.residual);
  return out;
}

double axis_distance(double a, double b, bool periodic) {
  const double d = a - b;
  return periodic ? std::abs(wrap_angle(d)) : std::abs(d);
}

}  // namespace

NodeSearch find_nodes(const BlochModel& model, const Region& region, const FindOptions& opt) {
  if (model.dim() != 3) throw Error(ErrorKind::InvalidArgument, "node search needs a 3D model");
  if (opt.coarse < 8) throw Error(ErrorKind::InvalidArgument, "coarse grid needs at least 8 points per axis");
  const std::size_t n = opt.coarse;
  std::array<bool, 3> periodic{};
  std::array<std::vector<double>, 3> axis;
  for (std::size_t a = 0; a < 3; ++a) {
    if (!(region.hi[a] > region.lo[a])) throw Error(ErrorKind::InvalidArgument, "empty region");
    periodic[a] = model.periodic(a) && region.hi[a] - region.lo[a] >= kTwoPi - 1e-12;
    const double span = region.hi[a] - region.lo[a];
    for (std::size_t i = 0; i < n; ++i)
      axis[a].push_back(region.lo[a] + span * static_cast<double>(i) / static_cast<double>(periodic[a] ? n : n - 1));
  }

  const std::size_t total = n * n * n;
  std::vector<double> value(total, std::numeric_limits<double>::infinity());
  auto point = [&](std::size_t i, std::size_t j, std::size_t l) { return Momentum{axis[0][i], axis[1][j], axis[2][l]}; };
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) {
        const Momentum k = point(i, j, l);
        if (!region.excluded(k)) value[(i * n + j) * n + l] = std::abs(discriminant(model(k)));
      }
  });

  std::vector<Momentum> seeds;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) {
        const std::size_t idx = (i * n + j) * n + l;
        const double v = value[idx];
        if (!(v < opt.seed_threshold)) continue;
        bool minimum = true;
        const std::array<std::size_t, 3> c{i, j, l};
        for (int di = -1; di <= 1 && minimum; ++di)
          for (int dj = -1; dj <= 1 && minimum; ++dj)
            for (int dl = -1; dl <= 1 && minimum; ++dl) {
              if (di == 0 && dj == 0 && dl == 0) continue;
              const std::array<int, 3> d{di, dj, dl};
              std::array<std::size_t, 3> nb{};
              bool inside = true;
              for (std::size_t a = 0; a < 3; ++a) {
                long q = static_cast<long>(c[a]) + d[a];
                if (periodic[a])
                  q = (q + static_cast<long>(n)) % static_cast<long>(n);
                else if (q < 0 || q >= static_cast<long>(n))
                  inside = false;
                nb[a] = static_cast<std::size_t>(q);
              }
              if (!inside) continue;
              const std::size_t nidx = (nb[0] * n + nb[1]) * n + nb[2];
              // Ties go to the lower index so flat minima seed once.
              if (value[nidx] < v || (value[nidx] == v && nidx < idx)) minimum = false;
            }
        if (minimum) seeds.push_back(point(i, j, l));
      }

  std::vector<Refined> refined(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t s) { refined[s] = refine(model, seeds[s], opt); });

  NodeSearch out;
  out.seeds = seeds.size();
  for (std::size_t s = 0; s < refined.size(); ++s) {
    const Refined& r = refined[s];
    if (!r.converged) {
      out.failures.push_back("seed " + std::to_string(s) + ": " + r.message);
      continue;
    }
    Momentum k = r.x;
    for (std::size_t a = 0; a < 3; ++a)
      if (periodic[a]) k[a] = wrap_angle(k[a]);
    Momentum probe = k;
    for (std::size_t a = 0; a < 3; ++a)
      if (periodic[a]) probe[a] = region.lo[a];  // periodic axes never bound the region
    if (!region.contains(probe, 1e-9)) continue;
    bool duplicate = false;
    for (const auto& existing : out.nodes) {
      double d2 = 0.0;
      for (std::size_t a = 0; a < 3; ++a) {
        const double d = axis_distance(existing.position[a], k[a], periodic[a]);
        d2 += d * d;
      }
      if (std::sqrt(d2) < opt.dedup_distance) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    NodeReport rep;
    rep.position = k;
    rep.residual = r.residual;
    out.nodes.push_back(rep);
  }
  std::sort(out.nodes.begin(), out.nodes.end(), [](const NodeReport& a, const NodeReport& b) {
    for (std::size_t c = 0; c < 3; ++c)
      if (a.position[c] != b.position[c]) return a.position[c] < b.position[c];
    return false;
  });
  return out;
}

std::vector<int> chern_sphere(const BlochModel& model, const Momentum& center, double radius,
                              const SphereOptions& options) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "sphere radius must be positive");
  if (options.n_theta < 5 || options.n_phi < 8) throw Error(ErrorKind::InvalidArgument, "sphere grid too coarse");
  const std::size_t nt = options.n_theta;
  auto at = [&](double theta, double phi) {
    return Momentum{center[0] + radius * std::sin(theta) * std::cos(phi),
                    center[1] + radius * std::sin(theta) * std::sin(phi), center[2] + radius * std::cos(theta)};
  };
  auto theta_of = [&](std::size_t i) { return kPi * static_cast<double>(i) / static_cast<double>(nt - 1); };

  // Meridians from the north pole fix a global band order; slots[i][a] is the
  // canonical index of band a on latitude i.
  auto meridian = [&](double phi) {
    return track(model, Path{[&, phi](double t) { return at(kPi * t, phi); }, false}, nt, options.track);
  };
  const BandPath m0 = meridian(0.0);
  const BandPath m1 = meridian(kPi);
  const std::size_t bands = m0.frames.front().size();
  if (m0.strand_motion() != m1.strand_motion())
    throw Error(ErrorKind::SeamInconsistent, "band order tracked along two meridians disagrees at the south pole");

  const auto ts = uniform_parameters(nt);
  std::vector<Permutation> slots(nt, Permutation::identity(bands));
  {
    std::size_t f = 1;
    for (std::size_t i = 1; i < nt; ++i) {
      while (f < m0.params.size() && m0.params[f] != ts[i]) ++f;
      if (f == m0.params.size()) throw Error(ErrorKind::SeamInconsistent, "meridian sample missing");
      slots[i] = m0.assignment[f - 1];
    }
  }

  std::vector<std::vector<WilsonEigen>> lat(nt);
  parallel_for(nt - 2, [&](std::size_t q) {
    const std::size_t i = q + 1;
    const double theta = theta_of(i);
    lat[i] = wilson_loop(model, Path{[&, theta](double t) { return at(theta, kTwoPi * t); }, true}, options.n_phi + 1,
                         options.track);
  });

  std::vector<int> chern(bands);
  for (std::size_t a = 0; a < bands; ++a) {
    double unwrapped = 0.0;
    double prev = 0.0;
    for (std::size_t i = 1; i + 1 < nt; ++i) {
      const double g = lat[i][static_cast<std::size_t>(slots[i](static_cast<int>(a)))].phase;
      const double step = wrap_angle(g - prev);
      if (!(std::abs(step) < 0.5 * kPi))
        throw Error(ErrorKind::RoundingResidue, "Berry phase jumps by " + std::to_string(step) +
                                                    " between latitudes; increase n_theta");
      unwrapped += step;
      prev = g;
    }
    const double c = unwrapped / kTwoPi;
    const double rounded = std::round(c);
    if (std::abs(c - rounded) >= options.max_residue)
      throw Error(ErrorKind::RoundingResidue, "band " + std::to_string(a) + " flux " + std::to_string(c) +
                                                  " is not close to an integer");
    chern[a] = static_cast<int>(rounded);
  }
  return chern;
}

NodeReport classify_node(const BlochModel& model, const Momentum& position, double probe_radius,
                         const SphereOptions& options) {
  if (!(probe_radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "probe radius must be positive");
  NodeReport rep;
  rep.position = position;
  rep.probe_radius = probe_radius;
  rep.residual = std::abs(discriminant(model(position)));

  const std::array<std::array<std::size_t, 2>, 3> planes{{{0, 1}, {1, 2}, {2, 0}}};
  BraidOptions bopt;
  bopt.track = options.track;
  std::size_t usable = 0;
  for (const auto& pl : planes) {
    try {
      const BraidInvariant b =
          braid_along_loop(model, circle_loop(position, probe_radius, pl[0], pl[1]), options.n_phi, bopt);
      ++usable;
      if (!b.permutation.is_identity()) {
        rep.kind = NodeKind::ExceptionalCrossing;
        return rep;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateOnPath && e.kind() != ErrorKind::RefinementExhausted &&
          e.kind() != ErrorKind::ProjectionDegenerate)
        throw;
    }
  }
  if (usable == 0) throw Error(ErrorKind::ProbeDegenerate, "every probe circle meets a degeneracy; shrink the radius");
  try {
    rep.chirality = chern_sphere(model, position, probe_radius, options).front();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DegenerateOnPath || e.kind() == ErrorKind::RefinementExhausted ||
        e.kind() == ErrorKind::WindingAlongLoop)
      throw Error(ErrorKind::ProbeDegenerate, std::string("probe sphere is not gapped: ") + e.what());
    throw;
  }
  rep.kind = NodeKind::WeylPoint;
  return rep;
}

void write_nodes_json(std::ostream& out, const std::vector<NodeReport>& nodes) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& n : nodes) {
    nlohmann::json j;
    j["position"] = {n.position[0], n.position[1], n.position[2]};
    j["kind"] = std::string(to_string(n.kind));
    j["chirality"] = n.chirality ? nlohmann::json(*n.chirality) : nlohmann::json(nullptr);
    j["residual"] = n.residual;
    arr.push_back(j);
  }
  out << arr.dump(2) << '\n';
}

}  // namespace nhtopo
