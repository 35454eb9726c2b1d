#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nhtopo {

/// Failure categories raised by the numerical and I/O layers.
enum class ErrorKind {
  InvalidArgument,
  SizeMismatch,
  Defective,
  DegenerateOnPath,
  RefinementExhausted,
  ProjectionDegenerate,
  WindingAlongLoop,
  NonTransversal,
  NoConvergence,
  ProbeDegenerate,
  SeamInconsistent,
  RoundingResidue,
  GridFormat,
  GridAlignment,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed grid file; carries the byte offset at which parsing failed.
class GridFormatError : public Error {
 public:
  GridFormatError(std::size_t offset, const std::string& what)
      : Error(ErrorKind::GridFormat, what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace nhtopo
