#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>

#include "nhtopo/error.hpp"

namespace nhtopo {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Point in momentum space with 1 to 3 real components.
class Momentum {
 public:
  Momentum() = default;
  Momentum(std::initializer_list<double> values) {
    if (values.size() < 1 || values.size() > 3)
      throw Error(ErrorKind::InvalidArgument, "momentum dimension must be 1..3");
    dim_ = values.size();
    std::size_t i = 0;
    for (double v : values) c_[i++] = v;
  }
  static Momentum of_dim(std::size_t dim) {
    if (dim < 1 || dim > 3)
      throw Error(ErrorKind::InvalidArgument, "momentum dimension must be 1..3");
    Momentum k;
    k.dim_ = dim;
    return k;
  }

  std::size_t dim() const noexcept { return dim_; }
  double operator[](std::size_t i) const noexcept { return c_[i]; }
  double& operator[](std::size_t i) noexcept { return c_[i]; }

  double x() const noexcept { return c_[0]; }
  double y() const noexcept { return c_[1]; }
  double z() const noexcept { return c_[2]; }

  /// k₊ = k_x + i k_y
  std::complex<double> k_plus() const noexcept { return {c_[0], c_[1]}; }
  /// k₋ = k_x − i k_y
  std::complex<double> k_minus() const noexcept { return {c_[0], -c_[1]}; }

  double norm() const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += c_[i] * c_[i];
    return std::sqrt(s);
  }

  friend Momentum operator+(Momentum a, const Momentum& b) noexcept {
    for (std::size_t i = 0; i < a.dim_; ++i) a.c_[i] += b.c_[i];
    return a;
  }
  friend Momentum operator-(Momentum a, const Momentum& b) noexcept {
    for (std::size_t i = 0; i < a.dim_; ++i) a.c_[i] -= b.c_[i];
    return a;
  }
  friend Momentum operator*(double s, Momentum a) noexcept {
    for (std::size_t i = 0; i < a.dim_; ++i) a.c_[i] *= s;
    return a;
  }
  friend bool operator==(const Momentum& a, const Momentum& b) noexcept {
    if (a.dim_ != b.dim_) return false;
    for (std::size_t i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }

 private:
  std::array<double, 3> c_{0.0, 0.0, 0.0};
  std::size_t dim_ = 3;
};

/// Wraps an angle into (−π, π].
inline double wrap_angle(double a) noexcept {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

}  // namespace nhtopo
