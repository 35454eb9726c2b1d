#pragma once

#include <complex>
#include <cstddef>
#include <ostream>
#include <vector>

#include "nhtopo/models.hpp"
#include "nhtopo/path.hpp"
#include "nhtopo/spectra.hpp"

namespace nhtopo {

struct WilsonEigen {
  double phase = 0.0;  ///< in (−π, π]
  double modulus = 1.0;
};

/// Per-band biorthogonal overlap products ∏_j ⟨L_a(k_{j+1}) | R_a(k_j)⟩ over
/// consecutive frames; frames.back() must describe the same point as frames.front().
/// Invariant under R_a ↦ c R_a, L_a ↦ L_a / c̄ at every point.
std::vector<std::complex<double>> band_holonomies(const std::vector<EigenFrame>& frames);

/// Wilson-loop eigenvalues of a closed loop, one per band in tracked order
/// (canonical order at the loop's start). Throws WindingAlongLoop if the bands
/// are permuted around the loop.
std::vector<WilsonEigen> wilson_loop(const BlochModel& model, const Path& loop, std::size_t resolution,
                                     const TrackOptions& options = {});

/// θ-circles (k_x, k_y) = center + radius (cos θ, sin θ) at fixed k_z, sliced in
/// k_z over [kz0, kz0 + 2π).
struct CylinderSpec {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 1.0;
  std::size_t loop_samples = 401;
  std::size_t flow_samples = 401;
  double theta0 = 0.0;
  double kz0 = -kPi;
};

/// Loops through the Brillouin zone along `loop_axis`, sliced along `flow_axis`
/// at fixed value of the remaining axis. With `diagonal`, the loop also advances
/// 2π along the flow axis, for tori where both primitive directions wind.
struct TorusSpec {
  std::size_t loop_axis = 0;
  std::size_t flow_axis = 2;
  double fixed = 0.0;
  bool diagonal = false;
  std::size_t loop_samples = 401;
  std::size_t flow_samples = 401;
  double flow0 = -kPi;
};

struct WilsonFlow {
  std::vector<double> slice_params;
  std::vector<std::vector<double>> phases;
  std::vector<std::vector<double>> moduli;
  /// unwrapped[a] follows the band that starts as band a of the first slice,
  /// connected between slices by eigenvalue continuity at the loop base point;
  /// it has one entry per slice plus the periodic closure.
  std::vector<std::vector<double>> unwrapped;
  double modulus_drift = 0.0;
  /// max over slices of |Σ phases mod 2π|
  double phase_sum_residual = 0.0;
};

struct CrossingReport {
  int n_zero = 0;
  int n_pi = 0;
  int nu = 0;
  double modulus_drift = 0.0;
  double phase_sum_residual = 0.0;
};

WilsonFlow wilson_flow(const BlochModel& model, const CylinderSpec& spec, const TrackOptions& options = {});
WilsonFlow wilson_flow(const BlochModel& model, const TorusSpec& spec, const TrackOptions& options = {});

/// Counts passages of unwrapped strand 0 through multiples of π; even multiples
/// count as crossings at 0, odd ones at π. nu = n_pi mod 2. A strand touching a
/// multiple of π (within `tangency_tol`) without passing it raises NonTransversal.
CrossingReport count_crossings(const WilsonFlow& flow, double tangency_tol = 1e-9);

/// CSV with header kz,phi1,phi2,mod1,mod2 (two-band flows).
void write_flow_csv(std::ostream& out, const WilsonFlow& flow);

}  // namespace nhtopo
