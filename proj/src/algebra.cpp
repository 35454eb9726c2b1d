#include "nhtopo/algebra.hpp"

#include <sstream>
#include <utility>

#include "nhtopo/error.hpp"

namespace nhtopo {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::SizeMismatch, "ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::hconcat(const IntMatrix& right) const {
  if (right.rows_ != rows_) throw Error(ErrorKind::SizeMismatch, "hconcat: row counts differ");
  IntMatrix out(rows_, cols_ + right.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < right.cols_; ++j) out(i, cols_ + j) = right(i, j);
  }
  return out;
}

bool IntMatrix::is_zero() const {
  for (const auto& v : data_)
    if (v != 0) return false;
  return true;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorKind::SizeMismatch, "matrix product shape mismatch");
  IntMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::SizeMismatch, "matrix difference shape mismatch");
  IntMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

mpz_class determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::SizeMismatch, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = t;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

IntMatrix reduced_perm_matrix(const Permutation& sigma) {
  const std::size_t n = sigma.size();
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "empty permutation");
  IntMatrix r(n - 1, n - 1);
  std::vector<long> image(n);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    std::fill(image.begin(), image.end(), 0);
    image[static_cast<std::size_t>(sigma(static_cast<int>(j)))] += 1;
    image[static_cast<std::size_t>(sigma(static_cast<int>(j + 1)))] -= 1;
    // Coefficients on e_i − e_{i+1} are the partial sums of the coordinates.
    long partial = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      partial += image[i];
      r(i, j) = partial;
    }
  }
  return r;
}

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
// row_dst -= q * row_src
void sub_row(IntMatrix& m, std::size_t dst, std::size_t src, const mpz_class& q) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) -= q * m(src, j);
}
void sub_col(IntMatrix& m, std::size_t dst, std::size_t src, const mpz_class& q) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) -= q * m(i, src);
}

}  // namespace

SNFResult snf(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  SNFResult res{IntMatrix::identity(rows), m, IntMatrix::identity(cols), {}};
  IntMatrix& d = res.D;
  const std::size_t steps = std::min(rows, cols);
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // Pivot on the smallest nonzero magnitude in the trailing block.
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (d(i, j) != 0 && (pi == rows || mpz_cmpabs(d(i, j).get_mpz_t(), d(pi, pj).get_mpz_t()) < 0)) {
            pi = i;
            pj = j;
          }
      if (pi == rows) break;
      swap_rows(d, t, pi);
      swap_rows(res.U, t, pi);
      swap_cols(d, t, pj);
      swap_cols(res.V, t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d(i, t) == 0) continue;
        const mpz_class q = d(i, t) / d(t, t);
        sub_row(d, i, t, q);
        sub_row(res.U, i, t, q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d(t, j) == 0) continue;
        const mpz_class q = d(t, j) / d(t, t);
        sub_col(d, j, t, q);
        sub_col(res.V, j, t, q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Enforce d_t | every remaining entry by folding an offending row in.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
            sub_row(d, t, i, -1);
            sub_row(res.U, t, i, -1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (d(t, t) < 0) {
      for (std::size_t j = 0; j < cols; ++j) d(t, j) = -d(t, j);
      for (std::size_t j = 0; j < rows; ++j) res.U(t, j) = -res.U(t, j);
    }
  }
  for (std::size_t t = 0; t < steps; ++t) res.divisors.push_back(d(t, t));
  return res;
}

ClassGroup cokernel(const IntMatrix& m) {
  const SNFResult s = snf(m);
  ClassGroup g;
  std::size_t rank = 0;
  for (const auto& dv : s.divisors) {
    if (dv == 0) continue;
    ++rank;
    if (dv > 1) g.torsion.push_back(dv);
  }
  g.free_rank = m.rows() - rank;
  return g;
}

ClassGroup classification_group(const Permutation& sigma1, const Permutation& sigma2) {
  if (sigma1.size() != sigma2.size())
    throw Error(ErrorKind::SizeMismatch, "permutations act on different numbers of bands");
  if (sigma1.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two bands");
  const IntMatrix id = IntMatrix::identity(sigma1.size() - 1);
  return cokernel((id - reduced_perm_matrix(sigma1)).hconcat(id - reduced_perm_matrix(sigma2)));
}

std::string ClassGroup::to_string() const {
  std::string out;
  for (const auto& t : torsion) {
    if (!out.empty()) out += " x ";
    out += "Z_" + t.get_str();
  }
  if (free_rank > 0) {
    if (!out.empty()) out += " x ";
    out += free_rank == 1 ? std::string("Z") : "Z^" + std::to_string(free_rank);
  }
  return out.empty() ? "0" : out;
}

}  // namespace nhtopo
