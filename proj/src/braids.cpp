#include "nhtopo/braids.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nhtopo {

namespace {

using cd = std::complex<double>;

bool key_less(const cd& a, const cd& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

struct Crossing {
  double at;
  int a;
  int b;
  double im_diff;  // Im λ_b − Im λ_a at the crossing
};

// Outcome of one attempt; `retry` asks for a finer resolution.
struct Attempt {
  bool retry = false;
  std::string reason;
  BraidInvariant result;
};

Attempt attempt(const BlochModel& model, const Path& loop, std::size_t resolution, const BraidOptions& options) {
  Attempt out;
  const BandPath bp = track(model, loop, resolution, options.track);
  const std::size_t n = bp.frames.front().size();

  double scale = 0.0;
  for (const auto& f : bp.frames)
    for (const auto& v : f.values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  const double coincide = options.projection_tol * scale;

  BraidWord word;
  word.strands = n;
  // arrangement[p] = strand occupying slot p.
  std::vector<int> arrangement(n);
  std::iota(arrangement.begin(), arrangement.end(), 0);
  std::sort(arrangement.begin(), arrangement.end(), [&](int a, int b) {
    return key_less(bp.frames.front().values[static_cast<std::size_t>(a)],
                    bp.frames.front().values[static_cast<std::size_t>(b)]);
  });

  for (std::size_t s = 0; s + 1 < bp.frames.size(); ++s) {
    const auto& v0 = bp.frames[s].values;
    const auto& v1 = bp.frames[s + 1].values;
    std::vector<Crossing> events;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        if (key_less(v0[a], v0[b]) == key_less(v1[a], v1[b])) continue;
        const double d0 = v0[a].real() - v0[b].real();
        const double d1 = v1[a].real() - v1[b].real();
        if (d0 == d1) {
          out.retry = true;
          out.reason = "eigenvalues exchange order with equal real parts";
          return out;
        }
        const double f = std::clamp(d0 / (d0 - d1), 0.0, 1.0);
        const double im = (1.0 - f) * (v0[b].imag() - v0[a].imag()) + f * (v1[b].imag() - v1[a].imag());
        if (std::abs(im) < coincide) {
          out.retry = true;
          out.reason = "coincident crossing in the Re projection";
          return out;
        }
        events.push_back({f, static_cast<int>(a), static_cast<int>(b), im});
      }
    std::sort(events.begin(), events.end(), [](const Crossing& x, const Crossing& y) { return x.at < y.at; });
    for (const auto& e : events) {
      const auto pa = std::find(arrangement.begin(), arrangement.end(), e.a) - arrangement.begin();
      const auto pb = std::find(arrangement.begin(), arrangement.end(), e.b) - arrangement.begin();
      if (std::abs(pa - pb) != 1) {
        out.retry = true;
        out.reason = "non-adjacent strands cross within one step";
        return out;
      }
      const auto left = std::min(pa, pb);
      // im_diff is Im b − Im a; orient it as Im right − Im left.
      const double right_minus_left = (pa == left) ? e.im_diff : -e.im_diff;
      const int gen = static_cast<int>(left) + 1;
      word.generators.push_back(right_minus_left > 0 ? gen : -gen);
      std::swap(arrangement[static_cast<std::size_t>(pa)], arrangement[static_cast<std::size_t>(pb)]);
    }
    std::vector<int> expected(n);
    std::iota(expected.begin(), expected.end(), 0);
    std::sort(expected.begin(), expected.end(), [&](int a, int b) {
      return key_less(v1[static_cast<std::size_t>(a)], v1[static_cast<std::size_t>(b)]);
    });
    if (expected != arrangement) {
      out.retry = true;
      out.reason = "crossing sequence inconsistent with eigenvalue order";
      return out;
    }
  }

  BraidInvariant& inv = out.result;
  inv.word = word;
  inv.exponent_sum = word.exponent_sum();
  inv.permutation = bp.composite();
  inv.resolution = resolution;
  if (braid_to_perm(word) != inv.permutation) {
    out.retry = true;
    out.reason = "braid word disagrees with tracked permutation";
    return out;
  }

  if (n == 2) {
    double total = 0.0;
    cd prev = bp.frames.front().values[0] - bp.frames.front().values[1];
    for (std::size_t s = 1; s < bp.frames.size(); ++s) {
      const cd cur = bp.frames[s].values[0] - bp.frames[s].values[1];
      const double step = std::arg(cur / prev);
      if (!(std::abs(step) < 0.5 * kPi)) {
        out.retry = true;
        out.reason = "eigenvalue difference turns by more than pi/2 in one step";
        return out;
      }
      total += step;
      prev = cur;
    }
    const double turns = total / kPi;
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) >= 1e-3) {
      out.retry = true;
      out.reason = "half-twist count not integral";
      return out;
    }
    inv.half_twists = static_cast<long>(rounded);
    if (*inv.half_twists != inv.exponent_sum) {
      out.retry = true;
      out.reason = "half-twist count disagrees with braid exponent sum";
      return out;
    }
  }
  return out;
}

}  // namespace

int BraidWord::exponent_sum() const {
  int s = 0;
  for (int g : generators) s += g > 0 ? 1 : -1;
  return s;
}

void BraidWord::validate() const {
  if (strands < 1) throw Error(ErrorKind::InvalidArgument, "braid needs at least one strand");
  for (int g : generators)
    if (g == 0 || static_cast<std::size_t>(std::abs(g)) >= strands)
      throw Error(ErrorKind::InvalidArgument, "generator index " + std::to_string(g) + " out of range for " +
                                                  std::to_string(strands) + " strands");
}

BraidWord BraidWord::then(const BraidWord& other) const {
  if (other.strands != strands) throw Error(ErrorKind::SizeMismatch, "braids on different strand counts");
  BraidWord w = *this;
  w.generators.insert(w.generators.end(), other.generators.begin(), other.generators.end());
  return w;
}

BraidInvariant braid_along_loop(const BlochModel& model, const Path& loop, std::size_t resolution,
                                const BraidOptions& options) {
  if (!loop.closed) throw Error(ErrorKind::InvalidArgument, "braid requires a closed loop");
  if (resolution < 3) throw Error(ErrorKind::InvalidArgument, "resolution must be at least 3");
  std::string reason;
  for (int d = 0; d <= options.max_doublings; ++d) {
    Attempt a = attempt(model, loop, resolution, options);
    if (!a.retry) return a.result;
    reason = a.reason;
    resolution = 2 * (resolution - 1) + 1;
  }
  throw Error(ErrorKind::ProjectionDegenerate, reason + " after " + std::to_string(options.max_doublings) +
                                                   " resolution doublings");
}

Permutation braid_to_perm(const BraidWord& word) {
  word.validate();
  Permutation p = Permutation::identity(word.strands);
  for (int g : word.generators) {
    const int i = std::abs(g) - 1;
    p = p.compose(Permutation::transposition(word.strands, i, i + 1));
  }
  return p;
}

IntMatrix action_on_chern(const BraidWord& word, std::size_t n) {
  if (word.strands != n) throw Error(ErrorKind::SizeMismatch, "braid strand count differs from band count");
  return reduced_perm_matrix(braid_to_perm(word));
}

}  // namespace nhtopo
