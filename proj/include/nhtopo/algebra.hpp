#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "nhtopo/permutation.hpp"

namespace nhtopo {

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  mpz_class& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const mpz_class& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix transpose() const;
  /// [A | B]
  IntMatrix hconcat(const IntMatrix& right) const;
  bool is_zero() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpz_class> data_;
};

/// Exact determinant (fraction-free elimination).
mpz_class determinant(const IntMatrix& m);

/// Matrix of e_i ↦ e_σ(i) restricted to the sum-zero sublattice of Z^N,
/// in the basis {e_i − e_{i+1}}; column j is the image of e_j − e_{j+1}.
IntMatrix reduced_perm_matrix(const Permutation& sigma);

/// U·M·V = D with U, V unimodular and D diagonal, d₁ | d₂ | …, zeros last.
struct SNFResult {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  /// The min(rows, cols) diagonal entries of D, nonnegative.
  std::vector<mpz_class> divisors;
};

SNFResult snf(const IntMatrix& m);

/// Finite abelian group Z_{t₁} × … × Z_{t_k} × Z^r with t₁ | … | t_k, t_i ≥ 2.
struct ClassGroup {
  std::vector<mpz_class> torsion;
  std::size_t free_rank = 0;

  /// e.g. "Z", "Z_2", "Z_2 x Z", "Z^2"; the trivial group renders as "0".
  std::string to_string() const;
  friend bool operator==(const ClassGroup&, const ClassGroup&) = default;
};

/// Z^{N−1} / ⟨columns of (1 − σ₁), (1 − σ₂)⟩ for the permutation action on
/// the sum-zero lattice of N band Chern numbers.
ClassGroup classification_group(const Permutation& sigma1, const Permutation& sigma2);

/// Quotient Z^rows / (column lattice of m).
ClassGroup cokernel(const IntMatrix& m);

}  // namespace nhtopo
