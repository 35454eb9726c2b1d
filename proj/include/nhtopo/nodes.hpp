#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nhtopo/models.hpp"
#include "nhtopo/spectra.hpp"

namespace nhtopo {

enum class NodeKind { Unclassified, WeylPoint, ExceptionalCrossing };

std::string_view to_string(NodeKind kind);

struct NodeReport {
  Momentum position;
  NodeKind kind = NodeKind::Unclassified;
  std::optional<int> chirality;
  /// |Disc H| at the refined position.
  double residual = 0.0;
  double probe_radius = 0.0;
};

/// Axis-aligned box, optionally minus a cylindrical tube parallel to one axis.
struct Region {
  std::array<double, 3> lo{-kPi, -kPi, -kPi};
  std::array<double, 3> hi{kPi, kPi, kPi};
  double tube_radius = 0.0;
  std::size_t tube_axis = 2;
  /// Tube centre in the two remaining coordinates (in increasing axis order).
  std::array<double, 2> tube_center{0.0, 0.0};

  static Region brillouin_zone() { return {}; }
  bool excluded(const Momentum& k) const;
  bool contains(const Momentum& k, double slack = 0.0) const;
};

struct FindOptions {
  std::size_t coarse = 32;
  double tol = 1e-10;
  double seed_threshold = 1e-2;
  double fd_step = 1e-6;
  int max_iterations = 400;
  double dedup_distance = 1e-4;
};

struct NodeSearch {
  std::vector<NodeReport> nodes;
  /// One message per seed whose refinement did not reach tol.
  std::vector<std::string> failures;
  std::size_t seeds = 0;
};

/// Discriminant zeros in the region, sorted lexicographically. Axes that are
/// periodic in the model and spanned over a full period by the region are
/// treated periodically (coordinates reported in (−π, π]).
NodeSearch find_nodes(const BlochModel& model, const Region& region, const FindOptions& options = {});

struct SphereOptions {
  std::size_t n_theta = 201;
  std::size_t n_phi = 201;
  double max_residue = 0.05;
  TrackOptions track;
};

/// Chern number of each band (in the canonical order at the north pole) on the
/// sphere of given radius around `center`.
///
/// Points are center + r(sin θ cos φ, sin θ sin φ, cos θ). For each latitude the
/// biorthogonal Berry phase arg ∏⟨L(k_{j+1})|R(k_j)⟩ is taken with φ increasing,
/// unwrapped in θ from the north pole, and the Chern number is the total change
/// divided by 2π. The lower band of the Hermitian Weyl Hamiltonian +k·σ gets +1.
std::vector<int> chern_sphere(const BlochModel& model, const Momentum& center, double radius,
                              const SphereOptions& options = {});

/// Weyl point (with chirality of the first band) or exceptional-line crossing,
/// decided by eigenvalue braids on three small axis-aligned circles.
NodeReport classify_node(const BlochModel& model, const Momentum& position, double probe_radius,
                         const SphereOptions& options = {});

/// JSON array of {position, kind, chirality, residual}.
void write_nodes_json(std::ostream& out, const std::vector<NodeReport>& nodes);

}  // namespace nhtopo
