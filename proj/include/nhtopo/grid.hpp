#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nhtopo/momentum.hpp"

namespace nhtopo {

/// Dense table of N×N matrices sampled on a rectilinear momentum grid.
///
/// Node j on a periodic axis sits at lo + (hi − lo)·j/n (hi ≡ lo is not
/// stored); on an open axis at lo + (hi − lo)·j/(n − 1). Nodes are stored
/// in row-major axis order (last axis fastest), each matrix row-major.
struct GridModel {
  std::size_t bands = 0;
  std::vector<std::size_t> counts;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<bool> periodic;
  std::vector<std::complex<double>> data;

  std::size_t dim() const noexcept { return counts.size(); }
  std::size_t node_count() const noexcept;
  double coordinate(std::size_t axis, std::size_t index) const;
  Momentum node_momentum(std::size_t flat) const;

  /// Flat index of the node at k, if k lies on a node (periodic axes wrap).
  std::optional<std::size_t> node_index(const Momentum& k) const;

  /// Stored matrix at k. Throws GridAlignment when k is not a grid node.
  Eigen::MatrixXcd eval(const Momentum& k) const;
  Eigen::MatrixXcd matrix_at(std::size_t flat) const;

  void validate() const;
};

GridModel load_grid_model(std::istream& source);
void save_grid_model(std::ostream& sink, const GridModel& grid);

}  // namespace nhtopo
