#include "nhtopo/permutation.hpp"

#include <cctype>
#include <numeric>
#include <sstream>

#include "nhtopo/error.hpp"

namespace nhtopo {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (int v : images_) {
    if (v < 0 || static_cast<std::size_t>(v) >= images_.size() || seen[static_cast<std::size_t>(v)])
      throw Error(ErrorKind::InvalidArgument, "not a permutation");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<int> images(n);
  std::iota(images.begin(), images.end(), 0);
  return Permutation(std::move(images));
}

Permutation Permutation::transposition(std::size_t n, int i, int j) {
  auto p = identity(n);
  if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(j) >= n)
    throw Error(ErrorKind::InvalidArgument, "transposition index out of range");
  std::swap(p.images_[static_cast<std::size_t>(i)], p.images_[static_cast<std::size_t>(j)]);
  return p;
}

Permutation Permutation::from_cycles(std::string_view text, std::size_t n) {
  auto p = identity(n);
  std::vector<bool> used(n, false);
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_space();
  while (pos < text.size()) {
    if (text[pos] != '(') throw Error(ErrorKind::InvalidArgument, "cycle notation: expected '('");
    ++pos;
    std::vector<int> cycle;
    for (;;) {
      skip_space();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < text.size() && text[pos] == ')') {
        ++pos;
        break;
      }
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (start == pos) throw Error(ErrorKind::InvalidArgument, "cycle notation: expected a number");
      const int value = std::stoi(std::string(text.substr(start, pos - start)));
      if (value < 1 || static_cast<std::size_t>(value) > n)
        throw Error(ErrorKind::InvalidArgument, "cycle entry out of range 1.." + std::to_string(n));
      if (used[static_cast<std::size_t>(value - 1)])
        throw Error(ErrorKind::InvalidArgument, "cycle entries must be distinct");
      used[static_cast<std::size_t>(value - 1)] = true;
      cycle.push_back(value - 1);
    }
    for (std::size_t i = 0; i < cycle.size(); ++i)
      p.images_[static_cast<std::size_t>(cycle[i])] = cycle[(i + 1) % cycle.size()];
    skip_space();
  }
  return p;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) inv[static_cast<std::size_t>(images_[i])] = static_cast<int>(i);
  return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& inner) const {
  if (inner.size() != size()) throw Error(ErrorKind::SizeMismatch, "composing permutations of different size");
  std::vector<int> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = images_[static_cast<std::size_t>(inner.images_[i])];
  return Permutation(std::move(out));
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != static_cast<int>(i)) return false;
  return true;
}

int Permutation::sign() const {
  std::vector<bool> seen(size(), false);
  int s = 1;
  for (std::size_t i = 0; i < size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(images_[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) s = -s;
  }
  return s;
}

std::string Permutation::to_cycles() const {
  std::ostringstream out;
  std::vector<bool> seen(size(), false);
  for (std::size_t i = 0; i < size(); ++i) {
    if (seen[i] || images_[i] == static_cast<int>(i)) continue;
    out << "(";
    bool first = true;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(images_[j])) {
      seen[j] = true;
      out << (first ? "" : " ") << j + 1;
      first = false;
    }
    out << ")";
  }
  return out.str();
}

}  // namespace nhtopo
