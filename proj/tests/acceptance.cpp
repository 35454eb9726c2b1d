// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "nhtopo/algebra.hpp"
#include "nhtopo/braids.hpp"
#include "nhtopo/nodes.hpp"
#include "nhtopo/wilson.hpp"
#include "oracles.hpp"

using namespace nhtopo;
using cd = std::complex<double>;

namespace {

// Collects the reasons a criterion failed.
struct Check {
  std::vector<std::string> problems;
  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

double periodic_distance(const Momentum& a, const Momentum& b) {
  double s = 0;
  for (std::size_t i = 0; i < 3; ++i) s += std::pow(wrap_angle(a[i] - b[i]), 2);
  return std::sqrt(s);
}

bool matches(const std::vector<Momentum>& found, const std::vector<Momentum>& expected, double tol) {
  if (found.size() != expected.size()) return false;
  for (const auto& e : expected) {
    int hits = 0;
    for (const auto& f : found)
      if (periodic_distance(f, e) < tol) ++hits;
    if (hits != 1) return false;
  }
  return true;
}

std::vector<Momentum> positions(const std::vector<NodeReport>& nodes) {
  std::vector<Momentum> out;
  for (const auto& n : nodes) out.push_back(n.position);
  return out;
}

Permutation random_perm(std::size_t n, std::mt19937& rng) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 0);
  std::shuffle(img.begin(), img.end(), rng);
  return Permutation(img);
}

Permutation cycle(std::size_t n) {
  std::vector<int> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<int>((i + 1) % n);
  return Permutation(img);
}

// Difference-basis relations f_j − σ·f_j from partial sums of e_σ(j) − e_σ(j+1).
oracle::IMat relations(const Permutation& s) {
  const std::size_t n = s.size();
  oracle::IMat rel;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    std::vector<long long> v(n, 0);
    v[static_cast<std::size_t>(s(static_cast<int>(j)))] += 1;
    v[static_cast<std::size_t>(s(static_cast<int>(j + 1)))] -= 1;
    std::vector<long long> r(n - 1);
    long long acc = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      acc += v[i];
      r[i] = (i == j ? 1 : 0) - acc;
    }
    rel.push_back(r);
  }
  return rel;
}

std::vector<long long> to_ll(const std::vector<mpz_class>& v) {
  std::vector<long long> out;
  for (const auto& x : v) out.push_back(x.get_si());
  return out;
}

CrossingReport cylinder_report(double cx, double cy, std::size_t samples, double theta0 = 0.0, double kz0 = -kPi) {
  CylinderSpec s;
  s.cx = cx;
  s.cy = cy;
  s.radius = 1.0;
  s.loop_samples = samples;
  s.flow_samples = samples;
  s.theta0 = theta0;
  s.kz0 = kz0;
  return count_crossings(wilson_flow(BlochModel::lattice(LatticeVariant::Main, 2.0), s));
}

Region kp_slab() {
  Region r;
  r.lo = {-1, -1, -0.1};
  r.hi = {1, 1, 0.1};
  r.tube_radius = 0.1;
  return r;
}

std::vector<Momentum> kp_weyl_nodes(double alpha) {
  const BlochModel model = BlochModel::kp(alpha);
  FindOptions opt;
  opt.coarse = 65;
  std::vector<Momentum> out;
  for (const auto& n : find_nodes(model, kp_slab(), opt).nodes) {
    if (n.position.norm() > 1.0) continue;
    try {
      if (classify_node(model, n.position, 0.1).kind == NodeKind::WeylPoint) out.push_back(n.position);
    } catch (const Error&) {
    }
  }
  return out;
}

void criterion1(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  const CrossingReport a = cylinder_report(0, 0, 401);
  const CrossingReport b = cylinder_report(1.2, 1.2, 401);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(a.n_zero == 2 && a.n_pi == 1 && a.nu == 1,
           "center (0,0) gave (" + std::to_string(a.n_zero) + "," + std::to_string(a.n_pi) + "," +
               std::to_string(a.nu) + ")");
  c.expect(b.n_zero == 3 && b.n_pi == 0 && b.nu == 0,
           "center (1.2,1.2) gave (" + std::to_string(b.n_zero) + "," + std::to_string(b.n_pi) + "," +
               std::to_string(b.nu) + ")");
  c.expect(a.phase_sum_residual < 1e-3 && b.phase_sum_residual < 1e-3,
           "phase-sum residual " + fmt(std::max(a.phase_sum_residual, b.phase_sum_residual)));
  c.expect(seconds < 30, "took " + fmt(seconds) + " s");
}

void criterion2(Check& c) {
  const auto main = find_nodes(BlochModel::lattice(LatticeVariant::Main, 2.0), Region::brillouin_zone());
  c.expect(matches(positions(main.nodes), {{0, 0, 0}, {kPi, 0, 0}, {0, kPi, 0}, {kPi, kPi, 0}}, 1e-6),
           "pi/3 model found " + std::to_string(main.nodes.size()) + " nodes");
  const double kz = 2 * std::asin(std::sqrt(0.75));
  std::vector<Momentum> expected;
  for (double x : {0.0, kPi})
    for (double y : {0.0, kPi})
      for (double z : {-kz, 0.0, kz}) expected.push_back({x, y, z});
  const auto supp = find_nodes(BlochModel::lattice(LatticeVariant::Supp, 0.25), Region::brillouin_zone());
  c.expect(matches(positions(supp.nodes), expected, 1e-6),
           "pi/4 model found " + std::to_string(supp.nodes.size()) + " nodes");
}

void criterion3(Check& c) {
  for (auto [m, expected] : {std::pair{-0.5, std::vector<int>{1, -1}}, std::pair{2.0, std::vector<int>{-1, 1}}}) {
    const auto ch = chern_sphere(BlochModel::lattice(LatticeVariant::Supp, m), {0, 0, 0}, 0.3);
    c.expect(ch == expected, "m = " + fmt(m) + " gave (" + std::to_string(ch[0]) + "," + std::to_string(ch[1]) + ")");
    c.expect(ch[0] + ch[1] == 0, "band sum nonzero at m = " + fmt(m));
  }
}

void criterion4(Check& c) {
  for (double alpha : {0.9, kPi / 2, 2.2}) {
    const double phi = std::acos(-std::sqrt(2.0) * std::cos(alpha));
    const double r = 1 / std::sqrt(2.0);
    const std::vector<Momentum> expected{{r * std::cos(phi), r * std::sin(phi), 0},
                                         {r * std::cos(phi), -r * std::sin(phi), 0}};
    const auto found = kp_weyl_nodes(alpha);
    c.expect(matches(found, expected, 1e-6),
             "alpha = " + fmt(alpha) + ": " + std::to_string(found.size()) + " Weyl nodes, expected 2 at the locus");
  }
  for (double alpha : {0.5, 2.5}) {
    const auto found = kp_weyl_nodes(alpha);
    c.expect(found.empty(), "alpha = " + fmt(alpha) + ": " + std::to_string(found.size()) + " Weyl nodes");
  }
  const NodeReport ep = classify_node(BlochModel::kp(kPi / 2), {0, 0, 0}, 0.1);
  c.expect(ep.kind == NodeKind::ExceptionalCrossing, "origin classified as " + std::string(to_string(ep.kind)));
}

void criterion5(Check& c) {
  const BlochModel model = BlochModel::lattice(LatticeVariant::Supp, 0.25);
  const Path kz = axis_loop({kPi / 2, kPi / 2, 0}, 2);
  const BraidInvariant b = braid_along_loop(model, kz, 401);
  c.expect(b.half_twists == 1, "kz loop half twists " + std::to_string(b.half_twists.value_or(-99)));
  c.expect(b.permutation == Permutation::from_cycles("(1 2)", 2), "kz loop permutation " + b.permutation.to_cycles());
  double winding = 0;
  cd prev = model(kz.at(0)).determinant();
  for (int s = 1; s <= 401; ++s) {
    const cd d = model(kz.at(s / 401.0)).determinant();
    winding += std::arg(d / prev);
    prev = d;
  }
  c.expect(std::abs(winding - kTwoPi) < 1e-4, "arg det winding " + fmt(winding));
  for (std::size_t axis : {0u, 1u}) {
    Momentum base{kPi / 2, kPi / 2, kPi / 2};
    const BraidInvariant o = braid_along_loop(model, axis_loop(base, axis), 401);
    c.expect(o.half_twists == 0 && o.permutation.is_identity(),
             "axis " + std::to_string(axis) + " loop is braided");
  }
}

void criterion6(Check& c) {
  const auto id = Permutation::identity(2);
  const auto sw = Permutation::transposition(2, 0, 1);
  c.expect(classification_group(id, id).to_string() == "Z", "even/even is not Z");
  for (auto [a, b] : {std::pair{sw, id}, std::pair{id, sw}, std::pair{sw, sw}})
    c.expect(classification_group(a, b).to_string() == "Z_2", "odd parity case is not Z_2");
  for (std::size_t n = 2; n <= 6; ++n) {
    const ClassGroup g = classification_group(cycle(n), Permutation::identity(n));
    c.expect(g.free_rank == 0 && g.torsion == std::vector<mpz_class>{static_cast<long>(n)},
             "N = " + std::to_string(n) + " gave " + g.to_string());
    std::vector<mpz_class> d(n - 1, 1);
    d.back() = static_cast<long>(n);
    c.expect(snf(IntMatrix::identity(n - 1) - reduced_perm_matrix(cycle(n))).divisors == d,
             "N = " + std::to_string(n) + " divisors");
  }
}

void criterion7(Check& c) {
  std::mt19937 rng(77);
  int group_mismatch = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + rng() % 3;
    const Permutation a = random_perm(n, rng), b = random_perm(n, rng);
    oracle::IMat rel = relations(a);
    for (const auto& r : relations(b)) rel.push_back(r);
    const oracle::Group expected = oracle::quotient_group(rel, n - 1);
    const ClassGroup g = classification_group(a, b);
    if (to_ll(g.torsion) != expected.torsion || g.free_rank != expected.free_rank) ++group_mismatch;
  }
  c.expect(group_mismatch == 0, std::to_string(group_mismatch) + " group mismatches");
  std::uniform_int_distribution<int> entry(-9, 9);
  int snf_mismatch = 0;
  for (int t = 0; t < 200; ++t) {
    IntMatrix m(4, 6);
    oracle::IMat o(4, std::vector<long long>(6));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        const int v = entry(rng);
        m(i, j) = v;
        o[i][j] = v;
      }
    if (to_ll(snf(m).divisors) != oracle::divisors_by_minors(o)) ++snf_mismatch;
  }
  c.expect(snf_mismatch == 0, std::to_string(snf_mismatch) + " SNF mismatches");
}

void criterion8(Check& c) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-kPi, kPi);

  double bio = 0;
  for (auto variant : {LatticeVariant::Main, LatticeVariant::Supp}) {
    const BlochModel model = BlochModel::lattice(variant, 0.25);
    for (int t = 0; t < 1000; ++t) {
      const CMatrix h = model({u(rng), u(rng), u(rng)});
      if (std::abs(discriminant(h)) < 1e-6) continue;
      const EigenFrame f = decompose(h);
      bio = std::max(bio, (f.left.adjoint() * f.right - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff());
    }
  }
  c.expect(bio < 1e-10, "biorthogonality error " + fmt(bio));

  const BlochModel main = BlochModel::lattice(LatticeVariant::Main, 2.0);
  double gauge = 0;
  for (double kz : {-2.5, 0.9}) {
    const BandPath bp = track(main, circle_loop({0.4, -0.2, kz}, 1.0, 0, 1), 401);
    const auto before = band_holonomies(bp.frames);
    std::vector<EigenFrame> frames = bp.frames;
    std::uniform_real_distribution<double> mod(0.2, 3.0);
    std::vector<std::array<cd, 2>> scale(frames.size());
    for (auto& s : scale) s = {std::polar(mod(rng), u(rng)), std::polar(mod(rng), u(rng))};
    scale.back() = scale.front();
    for (std::size_t j = 0; j < frames.size(); ++j)
      for (int a = 0; a < 2; ++a) {
        frames[j].right.col(a) *= scale[j][static_cast<std::size_t>(a)];
        frames[j].left.col(a) /= std::conj(scale[j][static_cast<std::size_t>(a)]);
      }
    const auto after = band_holonomies(frames);
    for (std::size_t a = 0; a < 2; ++a) gauge = std::max(gauge, std::abs(wrap_angle(std::arg(after[a]) - std::arg(before[a]))));
  }
  c.expect(gauge < 1e-10, "gauge phase change " + fmt(gauge));

  c.expect(cylinder_report(0, 0, 801).nu == 1 && cylinder_report(1.2, 1.2, 801).nu == 0, "nu changed at doubled resolution");

  int hom_fail = 0;
  std::uniform_int_distribution<int> len(0, 8), sign(0, 1);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 4);
    std::uniform_int_distribution<int> gen(1, static_cast<int>(n) - 1);
    auto word = [&] {
      BraidWord w{n, {}};
      const int l = len(rng);
      for (int i = 0; i < l; ++i) w.generators.push_back(sign(rng) ? gen(rng) : -gen(rng));
      return w;
    };
    const BraidWord a = word(), b = word();
    if (action_on_chern(a.then(b), n) != action_on_chern(a, n) * action_on_chern(b, n)) ++hom_fail;
  }
  c.expect(hom_fail == 0, std::to_string(hom_fail) + " homomorphism failures");

  for (double m : {-0.5, 0.25, 2.0}) {
    const auto found = find_nodes(BlochModel::lattice(LatticeVariant::Supp, m), Region::brillouin_zone());
    int column = 0;
    for (const auto& n : found.nodes)
      if (std::abs(n.position[0]) < 1e-6 && std::abs(n.position[1]) < 1e-6) ++column;
    c.expect(column % 2 == 1, "m = " + fmt(m) + ": " + std::to_string(column) + " nodes on the Gamma column");
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"Wilson-loop crossing counts on the two cylinders", criterion1},
      {"Weyl point inventories of both lattice variants", criterion2},
      {"chirality flip across m = 1", criterion3},
      {"k.p Weyl locus and exceptional crossing", criterion4},
      {"braid and determinant winding along lattice loops", criterion5},
      {"classification table", criterion6},
      {"oracle equivalence for groups and Smith forms", criterion7},
      {"property suites", criterion8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.problems.push_back(std::string("exception: ") + e.what());
    }
    std::string detail;
    for (const auto& p : c.problems) detail += (detail.empty() ? " [" : "; ") + p;
    if (!detail.empty()) detail += "]";
    std::printf("%s criterion %zu: %s%s\n", c.problems.empty() ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                detail.c_str());
    if (!c.problems.empty()) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
