#include "nhtopo/models.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace nhtopo {

namespace {

using cd = std::complex<double>;

CMatrix from_pauli(cd hx, cd hy, cd hz) {
  CMatrix h(2, 2);
  const cd i(0.0, 1.0);
  h(0, 0) = hz;
  h(0, 1) = hx - i * hy;
  h(1, 0) = hx + i * hy;
  h(1, 1) = -hz;
  return h;
}

void require_dim3(const Momentum& k) {
  if (k.dim() != 3) throw Error(ErrorKind::InvalidArgument, "model expects a 3-component momentum");
}

}  // namespace

CMatrix eval_lattice(const Momentum& k, double m, LatticeVariant variant) {
  require_dim3(k);
  const double c = variant == LatticeVariant::Main ? kPi / 3.0 : kPi / 4.0;
  // Reducing each component first makes H(k + 2πe_i) and H(k) evaluate the
  // same floating-point expression whenever k + 2π is representable.
  const double kx = wrap_angle(k.x());
  const double ky = wrap_angle(k.y());
  const double kz = wrap_angle(k.z());
  const double half = 0.5 * kz;
  const double hx = std::cos(half - c) * std::sin(kx);
  const double hy = std::cos(half + c) * std::sin(ky);
  const double hz = std::sin(kz) * std::cos(half) - 2.0 * m * std::sin(half);
  const cd phase = std::polar(1.0, half);
  return phase * from_pauli(hx, hy, hz);
}

CMatrix eval_kp(const Momentum& k, double alpha, bool include_perturbation) {
  require_dim3(k);
  const cd kp = k.k_plus();
  const cd km = k.k_minus();
  // H = h₊σ₊ + h₋σ₋ + h_zσ_z with σ₊ = [[0,2],[0,0]], σ₋ = [[0,0],[2,0]].
  cd h_plus = 0.5;
  cd h_minus = 0.5 * kp;
  if (include_perturbation) {
    const cd em = std::polar(1.0, -alpha);
    const cd ep = std::polar(1.0, alpha);
    h_plus += (km + em) * (kp + em);
    h_minus += (kp + ep) * (km + ep) * kp;
  }
  CMatrix h(2, 2);
  h(0, 0) = k.z();
  h(0, 1) = 2.0 * h_plus;
  h(1, 0) = 2.0 * h_minus;
  h(1, 1) = -k.z();
  return h;
}

std::vector<Momentum> kp_weyl_positions(double alpha) {
  // Positions depend on α only through cos α, so the window is symmetric in ±α.
  const double a = std::abs(wrap_angle(alpha));
  if (!(a > kPi / 4.0 && a < 3.0 * kPi / 4.0)) return {};
  const double r = 1.0 / std::sqrt(2.0);
  const double phi = std::acos(-std::sqrt(2.0) * std::cos(a));
  return {Momentum{r * std::cos(phi), r * std::sin(phi), 0.0},
          Momentum{r * std::cos(phi), -r * std::sin(phi), 0.0}};
}

BlochModel BlochModel::lattice(LatticeVariant variant, double m) {
  BlochModel model;
  model.kind_ = variant == LatticeVariant::Main ? ModelKind::LatticeMain : ModelKind::LatticeSupp;
  model.bands_ = 2;
  model.dim_ = 3;
  model.periodic_ = {true, true, true};
  model.params_.m = m;
  model.eval_ = [m, variant](const Momentum& k) { return eval_lattice(k, m, variant); };
  return model;
}

BlochModel BlochModel::kp(double alpha) {
  BlochModel model;
  model.kind_ = ModelKind::KpExceptional;
  model.params_.alpha = alpha;
  model.params_.include_perturbation = true;
  model.eval_ = [alpha](const Momentum& k) { return eval_kp(k, alpha, true); };
  return model;
}

BlochModel BlochModel::kp_base() {
  BlochModel model;
  model.kind_ = ModelKind::KpBase;
  model.eval_ = [](const Momentum& k) { return eval_kp(k, 0.0, false); };
  return model;
}

BlochModel BlochModel::grid(std::shared_ptr<const GridModel> grid) {
  if (!grid) throw Error(ErrorKind::InvalidArgument, "null grid");
  grid->validate();
  if (grid->dim() > 3) throw Error(ErrorKind::InvalidArgument, "grid dimension above 3");
  BlochModel model;
  model.kind_ = ModelKind::Grid;
  model.bands_ = grid->bands;
  model.dim_ = grid->dim();
  for (std::size_t a = 0; a < grid->dim(); ++a) model.periodic_[a] = grid->periodic[a];
  model.grid_ = grid;
  const GridModel* raw = grid.get();
  model.eval_ = [raw](const Momentum& k) { return raw->eval(k); };
  return model;
}

BlochModel BlochModel::function(std::size_t bands, std::size_t dim, std::array<bool, 3> periodic,
                                Evaluator eval) {
  if (bands == 0 || dim == 0 || dim > 3 || !eval)
    throw Error(ErrorKind::InvalidArgument, "invalid function model");
  BlochModel model;
  model.kind_ = ModelKind::Function;
  model.bands_ = bands;
  model.dim_ = dim;
  model.periodic_ = periodic;
  model.eval_ = std::move(eval);
  return model;
}

CMatrix BlochModel::operator()(const Momentum& k) const {
  if (k.dim() != dim_) throw Error(ErrorKind::InvalidArgument, "momentum dimension mismatch");
  return eval_(k);
}

std::string BlochModel::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case ModelKind::LatticeMain: out << "lattice-main(m=" << params_.m << ")"; break;
    case ModelKind::LatticeSupp: out << "lattice-supp(m=" << params_.m << ")"; break;
    case ModelKind::KpExceptional: out << "kp(alpha=" << params_.alpha << ")"; break;
    case ModelKind::KpBase: out << "kp-base"; break;
    case ModelKind::Grid: out << "grid(N=" << bands_ << ", D=" << dim_ << ")"; break;
    case ModelKind::Function: out << "function(N=" << bands_ << ", D=" << dim_ << ")"; break;
  }
  return out.str();
}

GridModel sample_grid(const BlochModel& model, const std::vector<std::size_t>& counts,
                      const std::vector<double>& lo, const std::vector<double>& hi) {
  if (counts.size() != model.dim())
    throw Error(ErrorKind::SizeMismatch, "axis count does not match model dimension");
  GridModel grid;
  grid.bands = model.bands();
  grid.counts = counts;
  grid.lo = lo.empty() ? std::vector<double>(counts.size(), 0.0) : lo;
  grid.hi = hi.empty() ? std::vector<double>(counts.size(), kTwoPi) : hi;
  for (std::size_t a = 0; a < counts.size(); ++a) grid.periodic.push_back(model.periodic(a));
  const std::size_t n = grid.node_count();
  const std::size_t nn = grid.bands * grid.bands;
  grid.data.resize(n * nn);
  for (std::size_t flat = 0; flat < n; ++flat) {
    const CMatrix h = model(grid.node_momentum(flat));
    for (std::size_t r = 0; r < grid.bands; ++r)
      for (std::size_t c = 0; c < grid.bands; ++c)
        grid.data[flat * nn + r * grid.bands + c] = h(static_cast<Eigen::Index>(r),
                                                      static_cast<Eigen::Index>(c));
  }
  grid.validate();
  return grid;
}

}  // namespace nhtopo
