#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "nhtopo/models.hpp"
#include "nhtopo/path.hpp"
#include "nhtopo/permutation.hpp"

namespace nhtopo {

/// Eigenvalues with biorthonormal right/left eigenvectors at one momentum.
///
/// Columns of `right` are unit right eigenvectors; columns of `left` satisfy
/// left† · right = I. `condition` is the largest eigenvalue condition number
/// ‖l_j‖‖r_j‖/|l_j† r_j|, which diverges at exceptional points.
struct EigenFrame {
  std::vector<std::complex<double>> values;
  CMatrix right;
  CMatrix left;
  double residual = 0.0;
  double condition = 1.0;

  std::size_t size() const noexcept { return values.size(); }
  /// Column j of the result is column order[j] of this frame.
  EigenFrame reordered(const std::vector<int>& order) const;
  double min_gap() const;
};

/// Eigen-decomposition in canonical (Re, Im)-lexicographic order.
/// 2×2 input is solved in closed form. Throws Defective when an eigenvalue
/// condition number exceeds 1/tol.
EigenFrame decompose(const CMatrix& h, double tol = 1e-8);

/// ∏_{i<j} (λ_i − λ_j)²; for 2×2 this is tr² − 4 det.
std::complex<double> discriminant(const CMatrix& h);

struct TrackOptions {
  double gap_ratio = 0.5;
  int max_depth = 20;
  /// Relative eigenvalue gap below which a sample counts as degenerate.
  double degeneracy_tol = 1e-8;
  double defective_tol = 1e-8;
};

/// Eigen-frames along a path with bands ordered by continuity.
///
/// frames[i] holds the strands in tracked order: strand j starts as the j-th
/// canonical eigenvalue at t = 0. assignment[i] maps strand j at sample i to
/// the canonical index it was matched to at sample i + 1.
struct BandPath {
  std::vector<double> params;
  std::vector<EigenFrame> frames;
  std::vector<Permutation> assignment;
  std::vector<bool> refined;

  /// Canonical index at the final sample of the strand starting at canonical index j.
  Permutation strand_motion() const;
  /// Composite exchange of a closed path: image of slot p is the starting slot of
  /// the band that occupies slot p at the end (inverse of strand_motion()).
  Permutation composite() const;
};

/// Tracks eigenvalues along `path` sampled at `samples` uniform parameters,
/// bisecting steps where the matching is ambiguous. For closed paths the last
/// sample reuses the first frame.
BandPath track(const BlochModel& model, const Path& path, std::size_t samples,
               const TrackOptions& options = {});

/// Same as above for an explicit list of momenta (piecewise-linear in between).
BandPath track(const BlochModel& model, const std::vector<Momentum>& points,
               const TrackOptions& options = {});

/// Decomposes H(k) and rejects degenerate or defective points with DegenerateOnPath.
EigenFrame gapped_frame(const BlochModel& model, const Momentum& k, const TrackOptions& options);

/// Minimum-total-distance matching of `from` onto `to`; result[j] is the index in
/// `to` assigned to entry j of `from`. Exhaustive for N ≤ 8, greedy above.
std::vector<int> match_eigenvalues(const std::vector<std::complex<double>>& from,
                                   const std::vector<std::complex<double>>& to);

}  // namespace nhtopo
