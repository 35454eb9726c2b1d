#include <doctest.h>

#include <random>

#include "nhtopo/path.hpp"
#include "nhtopo/spectra.hpp"
#include "oracles.hpp"

using namespace nhtopo;
using cd = std::complex<double>;

namespace {

CMatrix random_matrix(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cd(g(rng), g(rng));
  return m;
}

oracle::CMat to_oracle(const CMatrix& h) {
  oracle::CMat a(static_cast<std::size_t>(h.rows()), std::vector<cd>(static_cast<std::size_t>(h.cols())));
  for (Eigen::Index r = 0; r < h.rows(); ++r)
    for (Eigen::Index c = 0; c < h.cols(); ++c) a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = h(r, c);
  return a;
}

// Final-to-initial slot map of a closed path by brute-force nearest matching on
// a much finer sampling, with eigenvalues from the polynomial-root oracle.
Permutation dense_composite(const BlochModel& model, const Path& path, int samples) {
  auto canon = [](std::vector<cd> v) {
    std::sort(v.begin(), v.end(), [](cd a, cd b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    return v;
  };
  std::vector<cd> strands = canon(oracle::poly_roots(oracle::char_poly(to_oracle(model(path.at(0.0))))));
  for (int s = 1; s <= samples; ++s) {
    const auto next = oracle::poly_roots(oracle::char_poly(to_oracle(model(path.at(static_cast<double>(s) / samples)))));
    std::vector<bool> used(next.size(), false);
    for (auto& v : strands) {
      std::size_t best = 0;
      double bd = 1e300;
      for (std::size_t j = 0; j < next.size(); ++j)
        if (!used[j] && std::abs(next[j] - v) < bd) {
          bd = std::abs(next[j] - v);
          best = j;
        }
      used[best] = true;
      v = next[best];
    }
  }
  // Slot p at the end holds the strand that started in slot image[p].
  const auto end = canon(strands);
  std::vector<int> image(end.size());
  for (std::size_t p = 0; p < end.size(); ++p)
    for (std::size_t a = 0; a < strands.size(); ++a)
      if (strands[a] == end[p]) image[p] = static_cast<int>(a);
  return Permutation(image);
}

}  // namespace

TEST_CASE("decompose sigma_z") {
  CMatrix sz(2, 2);
  sz << 1, 0, 0, -1;
  const EigenFrame f = decompose(sz);
  CHECK(f.values[0] == cd(-1, 0));
  CHECK(f.values[1] == cd(1, 0));
  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK((f.right - swap).norm() < 1e-15);
  CHECK((f.left - swap).norm() < 1e-15);
}

TEST_CASE("decompose rejects a Jordan block") {
  try {
    decompose(eval_kp({0, 0, 0}, kPi / 2, true));
    FAIL("expected Defective");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Defective);
  }
}

TEST_CASE("decompose matches polynomial roots of random matrices") {
  std::mt19937_64 rng(17);
  for (Eigen::Index n : {2, 3, 4, 5}) {
    for (int t = 0; t < 50; ++t) {
      const CMatrix h = random_matrix(rng, n);
      const EigenFrame f = decompose(h);
      const auto roots = oracle::poly_roots(oracle::char_poly(to_oracle(h)));
      for (const cd& r : roots) {
        double best = 1e9;
        for (const cd& v : f.values) best = std::min(best, std::abs(v - r));
        CHECK(best < 1e-8);
      }
      for (std::size_t j = 1; j < f.values.size(); ++j) {
        const bool ordered = f.values[j - 1].real() < f.values[j].real() ||
                             (f.values[j - 1].real() == f.values[j].real() && f.values[j - 1].imag() <= f.values[j].imag());
        CHECK(ordered);
      }
    }
  }
}

TEST_CASE("discriminant examples") {
  CMatrix sz(2, 2);
  sz << 1, 0, 0, -1;
  CHECK(discriminant(sz) == cd(4, 0));
  for (double a = 0.0; a < kTwoPi; a += 0.37) CHECK(std::abs(discriminant(eval_kp({0, 0, 0}, a, true))) < 1e-14);
}

TEST_CASE("discriminant matches eigenvalue product and resultant") {
  std::mt19937_64 rng(23);
  for (Eigen::Index n : {2, 3, 4}) {
    for (int t = 0; t < 50; ++t) {
      const CMatrix h = random_matrix(rng, n);
      const cd d = discriminant(h);
      const auto v = decompose(h).values;
      cd prod = 1.0;
      for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) prod *= (v[i] - v[j]) * (v[i] - v[j]);
      const cd res = oracle::discriminant_by_resultant(to_oracle(h));
      CHECK(std::abs(d - prod) < 1e-8 * std::max(1.0, std::abs(d)));
      CHECK(std::abs(d - res) < 1e-8 * std::max(1.0, std::abs(d)));
    }
  }
}

TEST_CASE("property: biorthonormality and reconstruction at random gapped points") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-kPi, kPi), uk(-1, 1);
  const std::vector<std::pair<BlochModel, bool>> models{{BlochModel::lattice(LatticeVariant::Main, 2), true},
                                                        {BlochModel::lattice(LatticeVariant::Supp, 0.25), true},
                                                        {BlochModel::kp(kPi / 2), false},
                                                        {BlochModel::kp_base(), false}};
  for (const auto& [model, lattice] : models) {
    int tested = 0;
    while (tested < 1000) {
      const Momentum k = lattice ? Momentum{u(rng), u(rng), u(rng)} : Momentum{uk(rng), uk(rng), uk(rng)};
      const CMatrix h = model(k);
      if (std::abs(discriminant(h)) < 1e-6) continue;
      const EigenFrame f = decompose(h);
      ++tested;
      const CMatrix eye = CMatrix::Identity(2, 2);
      REQUIRE((f.left.adjoint() * f.right - eye).cwiseAbs().maxCoeff() < 1e-10);
      CMatrix diag = CMatrix::Zero(2, 2);
      for (Eigen::Index j = 0; j < 2; ++j) diag(j, j) = f.values[static_cast<std::size_t>(j)];
      REQUIRE((f.right * diag * f.left.adjoint() - h).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  for (int t = 0; t < 200; ++t) {
    const CMatrix h = random_matrix(rng, 4);
    const EigenFrame f = decompose(h);
    CHECK((f.left.adjoint() * f.right - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("property: discriminant is similarity invariant") {
  std::mt19937_64 rng(31);
  for (Eigen::Index n : {2, 3}) {
    for (int t = 0; t < 100; ++t) {
      const CMatrix h = random_matrix(rng, n);
      const CMatrix p = random_matrix(rng, n);
      const cd a = discriminant(h), b = discriminant(p * h * p.inverse());
      CHECK(std::abs(a - b) < 1e-8 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("tracking a constant gapped matrix gives identity steps") {
  CMatrix h(2, 2);
  h << 0.3, 0.1, 0.2, -0.5;
  const BlochModel model = BlochModel::function(2, 3, {false, false, false}, [h](const Momentum&) { return h; });
  const BandPath bp = track(model, std::vector<Momentum>{{0, 0, 0}, {0.5, 0, 0}, {1, 1, 0}, {2, 0, 1}});
  for (const auto& a : bp.assignment) CHECK(a.is_identity());
  CHECK(bp.composite().is_identity());
}

TEST_CASE("kz loop of the pi/3 lattice model exchanges the bands") {
  const BlochModel model = BlochModel::lattice(LatticeVariant::Main, 2.0);
  const Path loop = axis_loop({kPi / 2, kPi / 2, 0}, 2);
  const BandPath bp = track(model, loop, 401);
  CHECK(bp.composite() == Permutation::from_cycles("(1 2)", 2));
  CHECK(dense_composite(model, loop, 4010) == bp.composite());
  for (const auto& f : bp.frames) CHECK(f.size() == 2);
}

TEST_CASE("property: tracked composite is resolution stable") {
  const BlochModel main = BlochModel::lattice(LatticeVariant::Main, 2.0);
  const BlochModel supp = BlochModel::lattice(LatticeVariant::Supp, 0.25);
  const std::vector<std::pair<const BlochModel*, Path>> cases{
      {&main, axis_loop({kPi / 2, kPi / 2, 0}, 2)}, {&main, axis_loop({0, kPi / 2, kPi / 2}, 0)},
      {&supp, axis_loop({kPi / 2, kPi / 2, 0}, 2)}, {&supp, axis_loop({0, kPi / 2, kPi / 2}, 0)},
      {&supp, axis_loop({kPi / 2, 0, kPi / 2}, 1)}, {&main, circle_loop({0, 0, 0.5}, 1.0, 0, 1)}};
  for (const auto& [model, path] : cases) CHECK(track(*model, path, 401).composite() == track(*model, path, 4001).composite());
}

TEST_CASE("tracking through a degeneracy fails") {
  const BlochModel model = BlochModel::lattice(LatticeVariant::Main, 2.0);
  try {
    track(model, axis_loop({0, 0, 0}, 2), 401);
    FAIL("expected DegenerateOnPath");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateOnPath);
  }
}

TEST_CASE("bisection refines steps that are ambiguous") {
  // Eigenvalues ±e^{iπt}·(1 + 5t) move fast relative to their gap near t = 0.
  const BlochModel model = BlochModel::function(2, 1, {false, false, false}, [](const Momentum& k) {
    const cd lam = std::polar(1.0 + 5 * k[0], kPi * k[0]);
    CMatrix h(2, 2);
    h << lam, 0, 0, -lam;
    return h;
  });
  const BandPath bp = track(model, Path{[](double t) { return Momentum{t}; }, false}, 3);
  CHECK(std::count(bp.refined.begin(), bp.refined.end(), true) > 0);
  for (std::size_t s = 0; s + 1 < bp.frames.size(); ++s) {
    const auto& a = bp.frames[s].values;
    const auto& b = bp.frames[s + 1].values;
    for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(b[j] - a[j]) < 0.5 * std::abs(a[0] - a[1]));
  }
  CHECK(bp.composite() == Permutation::from_cycles("(1 2)", 2));
}

TEST_CASE("optimal matching") {
  const std::vector<cd> from{{0, 0}, {1, 0}, {2, 0}};
  const std::vector<cd> to{{2.1, 0}, {-0.1, 0}, {1.1, 0}};
  CHECK(match_eigenvalues(from, to) == std::vector<int>{1, 2, 0});
}
