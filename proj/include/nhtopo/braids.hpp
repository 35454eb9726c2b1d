#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nhtopo/algebra.hpp"
#include "nhtopo/models.hpp"
#include "nhtopo/path.hpp"
#include "nhtopo/permutation.hpp"
#include "nhtopo/spectra.hpp"

namespace nhtopo {

/// Word in the Artin generators of B_N: entry +i is σ_i, −i is σ_i⁻¹ (1-based).
struct BraidWord {
  std::size_t strands = 0;
  std::vector<int> generators;

  int exponent_sum() const;
  void validate() const;
  /// Concatenation (this first, then other).
  BraidWord then(const BraidWord& other) const;
};

struct BraidInvariant {
  BraidWord word;
  Permutation permutation;
  long exponent_sum = 0;
  /// (1/π)·Δarg(λ₁ − λ₂) around the loop; only for two bands.
  std::optional<long> half_twists;
  /// Resolution actually used after any automatic doubling.
  std::size_t resolution = 0;
};

struct BraidOptions {
  TrackOptions track;
  int max_doublings = 6;
  /// Relative |Im λ_i − Im λ_j| at a Re-crossing below which the projection is degenerate.
  double projection_tol = 1e-9;
};

/// Braid traced by the eigenvalues along a closed loop.
///
/// Eigenvalues are ordered by (Re, Im); each time two neighbours exchange real
/// parts a generator σ_i is emitted, i being the left slot. The sign is that of
/// Im λ_right − Im λ_left at the crossing (right/left as before the crossing),
/// i.e. positive when the strand moving leftwards passes with larger imaginary
/// part. With this convention half_twists equals the exponent sum.
BraidInvariant braid_along_loop(const BlochModel& model, const Path& loop, std::size_t resolution,
                                const BraidOptions& options = {});

/// s_{i₁} ∘ s_{i₂} ∘ … for the word σ_{i₁}^{±1} σ_{i₂}^{±1} …; maps the final
/// slot of each strand to its starting slot.
Permutation braid_to_perm(const BraidWord& word);

/// Action of the word's permutation on the Chern lattice Z^{N−1} in the basis
/// {e_i − e_{i+1}}.
IntMatrix action_on_chern(const BraidWord& word, std::size_t n);

}  // namespace nhtopo
