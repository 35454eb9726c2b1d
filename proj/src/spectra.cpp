#include "nhtopo/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace nhtopo {

namespace {

using cd = std::complex<double>;

bool canonical_less(const cd& a, const cd& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

void fix_gauge(CMatrix& v) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      if (std::abs(v(i, j)) > best * (1.0 + 1e-12)) {
        best = std::abs(v(i, j));
        arg = i;
      }
    }
    if (best > 0.0) v.col(j) *= std::conj(v(arg, j)) / best;
  }
}

bool all_finite(const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  return true;
}

// Right eigenvector of a 2×2 matrix for eigenvalue λ: the larger of the two
// null-space candidates built from the rows of H − λ.
Eigen::Vector2cd right_vector_2x2(const CMatrix& h, cd lambda, double scale, int fallback) {
  const Eigen::Vector2cd from_row0(h(0, 1), lambda - h(0, 0));
  const Eigen::Vector2cd from_row1(lambda - h(1, 1), h(1, 0));
  const Eigen::Vector2cd& v = from_row0.norm() >= from_row1.norm() ? from_row0 : from_row1;
  if (v.norm() <= 1e-14 * scale) {
    Eigen::Vector2cd e = Eigen::Vector2cd::Zero();
    e(fallback) = 1.0;
    return e;
  }
  return v.normalized();
}

}  // namespace

EigenFrame EigenFrame::reordered(const std::vector<int>& order) const {
  EigenFrame out;
  out.residual = residual;
  out.condition = condition;
  const auto n = static_cast<Eigen::Index>(values.size());
  out.values.resize(values.size());
  out.right.resize(n, n);
  out.left.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto src = static_cast<Eigen::Index>(order[static_cast<std::size_t>(j)]);
    out.values[static_cast<std::size_t>(j)] = values[static_cast<std::size_t>(src)];
    out.right.col(j) = right.col(src);
    out.left.col(j) = left.col(src);
  }
  return out;
}

double EigenFrame::min_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j) gap = std::min(gap, std::abs(values[i] - values[j]));
  return gap;
}

EigenFrame decompose(const CMatrix& h, double tol) {
  if (h.rows() != h.cols() || h.rows() == 0) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
  if (!all_finite(h)) throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");
  const Eigen::Index n = h.rows();
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());

  std::vector<cd> values;
  CMatrix right(n, n);
  if (n == 1) {
    values = {h(0, 0)};
    right(0, 0) = 1.0;
  } else if (n == 2) {
    const cd tr = h(0, 0) + h(1, 1);
    const cd diff = h(0, 0) - h(1, 1);
    const cd root = std::sqrt(diff * diff + 4.0 * h(0, 1) * h(1, 0));
    values = {0.5 * (tr - root), 0.5 * (tr + root)};
    if (canonical_less(values[1], values[0])) std::swap(values[0], values[1]);
    right.col(0) = right_vector_2x2(h, values[0], scale, 0);
    right.col(1) = right_vector_2x2(h, values[1], scale, 1);
  } else {
    Eigen::ComplexEigenSolver<CMatrix> solver(h, true);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::Defective, "eigen-solver failed to converge");
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const auto& ev = solver.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int a, int b) { return canonical_less(ev(a), ev(b)); });
    values.resize(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
      values[static_cast<std::size_t>(j)] = ev(order[static_cast<std::size_t>(j)]);
      right.col(j) = solver.eigenvectors().col(order[static_cast<std::size_t>(j)]).normalized();
    }
  }
  fix_gauge(right);

  Eigen::FullPivLU<CMatrix> lu(right);
  CMatrix left;
  bool ok = lu.rank() == n;
  if (ok) {
    left = lu.inverse().adjoint();
    ok = all_finite(left);
  }
  double condition = std::numeric_limits<double>::infinity();
  if (ok) {
    condition = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) condition = std::max(condition, left.col(j).norm());
  }
  if (!ok || condition > 1.0 / tol)
    throw Error(ErrorKind::Defective, "matrix is within tolerance of an exceptional point (condition " +
                                          std::to_string(condition) + ")");

  EigenFrame frame;
  frame.values = std::move(values);
  frame.right = std::move(right);
  frame.left = std::move(left);
  frame.condition = condition;
  double residual = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const cd lambda = frame.values[static_cast<std::size_t>(j)];
    residual = std::max(residual, (h * frame.right.col(j) - lambda * frame.right.col(j)).norm());
    residual = std::max(residual, (frame.left.col(j).adjoint() * h -
                                   lambda * frame.left.col(j).adjoint()).norm() / frame.left.col(j).norm());
  }
  frame.residual = residual / scale;
  return frame;
}

std::complex<double> discriminant(const CMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
  const Eigen::Index n = h.rows();
  if (n == 1) return 1.0;
  if (n == 2) {
    const cd tr = h(0, 0) + h(1, 1);
    const cd det = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
    return tr * tr - 4.0 * det;
  }
  Eigen::ComplexEigenSolver<CMatrix> solver(h, false);
  const auto& ev = solver.eigenvalues();
  cd d = 1.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d *= (ev(i) - ev(j)) * (ev(i) - ev(j));
  return d;
}

std::vector<int> match_eigenvalues(const std::vector<cd>& from, const std::vector<cd>& to) {
  const std::size_t n = from.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  if (n <= 8) {
    std::vector<int> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
      double cost = 0.0;
      for (std::size_t j = 0; j < n && cost < best_cost; ++j)
        cost += std::abs(from[j] - to[static_cast<std::size_t>(perm[j])]);
      if (cost < best_cost) {
        best_cost = cost;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  // Greedy: repeatedly take the globally closest unmatched pair.
  std::vector<bool> used_from(n, false), used_to(n, false);
  for (std::size_t round = 0; round < n; ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used_from[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (used_to[j]) continue;
        const double d = std::abs(from[i] - to[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    used_from[bi] = used_to[bj] = true;
    perm[bi] = static_cast<int>(bj);
  }
  return perm;
}

EigenFrame gapped_frame(const BlochModel& model, const Momentum& k, const TrackOptions& options) {
  const CMatrix h = model(k);
  EigenFrame frame;
  try {
    frame = decompose(h, options.defective_tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Defective) throw;
    throw Error(ErrorKind::DegenerateOnPath, std::string("exceptional point on path: ") + e.what());
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (frame.size() > 1 && frame.min_gap() < options.degeneracy_tol * scale)
    throw Error(ErrorKind::DegenerateOnPath, "band degeneracy on path (gap " + std::to_string(frame.min_gap()) + ")");
  return frame;
}

namespace {

struct Tracker {
  const BlochModel& model;
  const Path& path;
  const TrackOptions& options;
  BandPath out;

  // Accepts the step if every strand moves by less than gap_ratio times its
  // distance to the nearest other eigenvalue at the start of the step.
  bool unambiguous(const EigenFrame& from, const EigenFrame& to, const std::vector<int>& match) const {
    const std::size_t n = from.size();
    for (std::size_t j = 0; j < n; ++j) {
      double gap = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i)
        if (i != j) gap = std::min(gap, std::abs(from.values[i] - from.values[j]));
      const double move = std::abs(from.values[j] - to.values[static_cast<std::size_t>(match[j])]);
      if (!(move < options.gap_ratio * gap)) return false;
    }
    return true;
  }

  void step(double ta, const EigenFrame& strands_a, double tb, const EigenFrame& raw_b, int depth, bool refined) {
    const auto match = match_eigenvalues(strands_a.values, raw_b.values);
    if (strands_a.size() == 1 || unambiguous(strands_a, raw_b, match)) {
      out.assignment.emplace_back(match);
      out.params.push_back(tb);
      out.frames.push_back(raw_b.reordered(match));
      out.refined.push_back(refined);
      return;
    }
    if (depth >= options.max_depth)
      throw Error(ErrorKind::RefinementExhausted,
                  "eigenvalue matching still ambiguous after " + std::to_string(depth) + " bisections near t=" +
                      std::to_string(ta));
    const double tm = 0.5 * (ta + tb);
    const EigenFrame raw_m = gapped_frame(model, path.at(tm), options);
    step(ta, strands_a, tm, raw_m, depth + 1, true);
    const EigenFrame strands_m = out.frames.back();
    step(tm, strands_m, tb, raw_b, depth + 1, true);
  }
};

}  // namespace

BandPath track(const BlochModel& model, const Path& path, std::size_t samples, const TrackOptions& options) {
  const auto ts = uniform_parameters(samples);
  Tracker tracker{model, path, options, {}};
  const EigenFrame first = gapped_frame(model, path.at(ts.front()), options);
  tracker.out.params.push_back(ts.front());
  tracker.out.frames.push_back(first);
  tracker.out.refined.push_back(false);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const bool last = i + 1 == ts.size();
    const EigenFrame raw = (last && path.closed) ? first : gapped_frame(model, path.at(ts[i]), options);
    const EigenFrame strands = tracker.out.frames.back();
    tracker.step(ts[i - 1], strands, ts[i], raw, 0, false);
  }
  return std::move(tracker.out);
}

BandPath track(const BlochModel& model, const std::vector<Momentum>& points, const TrackOptions& options) {
  if (points.size() < 2) throw Error(ErrorKind::InvalidArgument, "path needs at least two points");
  return track(model, polyline(points), points.size(), options);
}

Permutation BandPath::strand_motion() const {
  // Strands keep their column across frames, so the last step's assignment
  // already gives each strand's canonical slot at the end.
  if (assignment.empty()) return Permutation::identity(frames.front().size());
  return assignment.back();
}

Permutation BandPath::composite() const { return strand_motion().inverse(); }

}  // namespace nhtopo
