#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nhtopo {

/// Bijection on {0, …, N−1}. Text I/O uses 1-based cycle notation, e.g. "(1 2)(3 4 5)".
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images);

  static Permutation identity(std::size_t n);
  static Permutation transposition(std::size_t n, int i, int j);
  /// Parses cycle notation; the empty string (or "()") is the identity.
  static Permutation from_cycles(std::string_view text, std::size_t n);

  std::size_t size() const noexcept { return images_.size(); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const noexcept { return images_; }

  Permutation inverse() const;
  /// (*this ∘ inner)(i) = (*this)(inner(i)).
  Permutation compose(const Permutation& inner) const;

  bool is_identity() const noexcept;
  /// +1 for even, −1 for odd permutations.
  int sign() const;
  std::string to_cycles() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> images_;
};

}  // namespace nhtopo
