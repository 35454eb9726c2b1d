#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nhtopo/grid.hpp"
#include "nhtopo/momentum.hpp"

namespace nhtopo {

using CMatrix = Eigen::MatrixXcd;

enum class ModelKind { LatticeMain, LatticeSupp, KpExceptional, KpBase, Grid, Function };

/// Phase offset of the lattice model: π/3 (Main) or π/4 (Supp).
enum class LatticeVariant { Main, Supp };

struct ModelParams {
  double m = 0.0;
  double alpha = 0.0;
  bool include_perturbation = false;
};

/// e^{ik_z/2}[cos(k_z/2 − c) sin k_x σ_x + cos(k_z/2 + c) sin k_y σ_y
///            + (sin k_z cos(k_z/2) − 2m sin(k_z/2)) σ_z]
/// with c = π/3 (Main) or π/4 (Supp). Exactly 2π-periodic in each component.
CMatrix eval_lattice(const Momentum& k, double m, LatticeVariant variant);

/// ½(σ₊ + k₊σ₋) + k_zσ_z, optionally plus
/// (k₋ + e^{−iα})(k₊ + e^{−iα})σ₊ + (k₊ + e^{iα})(k₋ + e^{iα})k₊σ₋,
/// with σ± = σ_x ± iσ_y.
CMatrix eval_kp(const Momentum& k, double alpha, bool include_perturbation);

/// In-plane Weyl points of the perturbed k·p model: k₊ = e^{±iφ}/√2, k_z = 0,
/// cos φ = −√2 cos α. Empty unless α ∈ (π/4, 3π/4).
std::vector<Momentum> kp_weyl_positions(double alpha);

/// Immutable evaluator k ↦ H(k).
class BlochModel {
 public:
  using Evaluator = std::function<CMatrix(const Momentum&)>;

  static BlochModel lattice(LatticeVariant variant, double m);
  static BlochModel kp(double alpha);
  static BlochModel kp_base();
  static BlochModel grid(std::shared_ptr<const GridModel> grid);
  /// Arbitrary evaluator; periodic axes have period 2π.
  static BlochModel function(std::size_t bands, std::size_t dim, std::array<bool, 3> periodic,
                             Evaluator eval);

  ModelKind kind() const noexcept { return kind_; }
  std::size_t bands() const noexcept { return bands_; }
  std::size_t dim() const noexcept { return dim_; }
  bool periodic(std::size_t axis) const noexcept { return periodic_[axis]; }
  const ModelParams& params() const noexcept { return params_; }
  const GridModel* grid_data() const noexcept { return grid_.get(); }

  CMatrix operator()(const Momentum& k) const;

  std::string describe() const;

 private:
  BlochModel() = default;

  ModelKind kind_ = ModelKind::Function;
  std::size_t bands_ = 2;
  std::size_t dim_ = 3;
  std::array<bool, 3> periodic_{false, false, false};
  ModelParams params_;
  std::shared_ptr<const GridModel> grid_;
  Evaluator eval_;
};

/// Samples a model on a grid with the given node counts; ranges default to
/// [0, 2π) per axis.
GridModel sample_grid(const BlochModel& model, const std::vector<std::size_t>& counts,
                      const std::vector<double>& lo = {}, const std::vector<double>& hi = {});

}  // namespace nhtopo
