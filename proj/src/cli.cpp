#include "nhtopo/cli.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nhtopo/algebra.hpp"
#include "nhtopo/braids.hpp"
#include "nhtopo/grid.hpp"
#include "nhtopo/nodes.hpp"
#include "nhtopo/parallel.hpp"
#include "nhtopo/wilson.hpp"

namespace nhtopo::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("bad number for " + what + ": '" + s + "'");
  }
}

std::vector<double> parse_list(const std::string& s, std::size_t expected, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
  if (expected != 0 && out.size() != expected)
    throw UsageError(what + " needs " + std::to_string(expected) + " comma-separated values");
  return out;
}

std::map<std::string, std::string> parse_keys(const std::vector<std::string>& tokens) {
  std::map<std::string, std::string> kv;
  for (const auto& t : tokens) {
    std::stringstream ss(t);
    std::string part;
    while (ss >> part) {
      const auto eq = part.find('=');
      if (eq == std::string::npos) throw UsageError("expected key=value, got '" + part + "'");
      kv[part.substr(0, eq)] = part.substr(eq + 1);
    }
  }
  return kv;
}

std::size_t axis_index(const std::string& s) {
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  throw UsageError("axis must be x, y or z");
}

std::array<double, 2> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("range must look like lo:hi");
  return {parse_double(s.substr(0, colon), "range"), parse_double(s.substr(colon + 1), "range")};
}

Region parse_region(const std::string& s) {
  Region r;
  if (s == "bz") return r;
  std::stringstream ss(s);
  std::string item;
  std::size_t a = 0;
  while (std::getline(ss, item, ',')) {
    if (a == 3) throw UsageError("region has more than three axes");
    const auto lh = parse_range(item);
    r.lo[a] = lh[0];
    r.hi[a] = lh[1];
    ++a;
  }
  if (a != 3) throw UsageError("region must be 'bz' or x0:x1,y0:y1,z0:z1");
  return r;
}

json perm_json(const Permutation& p) {
  json images = json::array();
  for (int v : p.images()) images.push_back(v + 1);
  return images;
}

int cmd_braid(const BlochModel& model, const std::vector<std::string>& loop_tokens, std::size_t resolution,
              std::ostream& out) {
  const auto kv = parse_keys(loop_tokens);
  Path loop;
  if (kv.count("axis")) {
    const std::size_t axis = axis_index(kv.at("axis"));
    if (!kv.count("at")) throw UsageError("axis loop needs at=<a,b>");
    const auto at = parse_list(kv.at("at"), 2, "at");
    Momentum base{0.0, 0.0, 0.0};
    std::size_t j = 0;
    for (std::size_t a = 0; a < 3; ++a)
      if (a != axis) base[a] = at[j++];
    const double start = kv.count("start") ? parse_double(kv.at("start"), "start") : 0.0;
    loop = axis_loop(base, axis, start);
  } else if (kv.count("center")) {
    const auto c = parse_list(kv.at("center"), 3, "center");
    if (!kv.count("radius")) throw UsageError("circle loop needs radius=<r>");
    const double r = parse_double(kv.at("radius"), "radius");
    const std::string plane = kv.count("plane") ? kv.at("plane") : "xy";
    if (plane.size() != 2) throw UsageError("plane must be two axes, e.g. xy");
    loop = circle_loop(Momentum{c[0], c[1], c[2]}, r, axis_index(plane.substr(0, 1)), axis_index(plane.substr(1, 1)));
  } else {
    throw UsageError("--loop needs axis=<x|y|z> at=<a,b> or center=<x,y,z> radius=<r>");
  }
  const BraidInvariant b = braid_along_loop(model, loop, resolution);
  json j;
  j["strands"] = b.word.strands;
  j["word"] = b.word.generators;
  j["permutation"] = b.permutation.to_cycles();
  j["permutation_images"] = perm_json(b.permutation);
  j["exponent_sum"] = b.exponent_sum;
  j["half_twists"] = b.half_twists ? json(*b.half_twists) : json(nullptr);
  j["resolution"] = b.resolution;
  out << j.dump() << '\n';
  return kOk;
}

json crossing_json(const CrossingReport& r) {
  json j;
  j["n_zero"] = r.n_zero;
  j["n_pi"] = r.n_pi;
  j["nu"] = r.nu;
  j["modulus_drift"] = r.modulus_drift;
  j["phase_sum_residual"] = r.phase_sum_residual;
  return j;
}

void check_samples(std::size_t v, const char* what) {
  if (v < 32 || v > 100000) throw UsageError(std::string(what) + " must be in [32, 100000]");
}

}  // namespace

BlochModel parse_model(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "grid") {
    if (rest.empty()) throw UsageError("grid model needs a file: grid:<path>");
    std::ifstream in(rest, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open grid file " + rest);
    return BlochModel::grid(std::make_shared<const GridModel>(load_grid_model(in)));
  }
  std::map<std::string, std::string> kv;
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("model parameter must be key=value: '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  auto need = [&](const std::string& key) {
    if (!kv.count(key)) throw UsageError("model " + kind + " needs " + key + "=<value>");
    return parse_double(kv.at(key), key);
  };
  if (kind == "lattice-main") return BlochModel::lattice(LatticeVariant::Main, need("m"));
  if (kind == "lattice-supp") return BlochModel::lattice(LatticeVariant::Supp, need("m"));
  if (kind == "kp") return BlochModel::kp(need("alpha"));
  if (kind == "kp-base") return BlochModel::kp_base();
  throw UsageError("unknown model '" + kind + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topological invariants of non-Hermitian Bloch Hamiltonians", "nhtopo"};
  app.require_subcommand(1);
  std::size_t threads = 1;
  app.add_option("--threads", threads, "Worker threads (NHB_THREADS overrides)")->check(CLI::Range(1, 256));

  std::string model_spec;
  auto add_model = [&](CLI::App* sub) { sub->add_option("--model", model_spec, "Model, e.g. lattice-main:m=2 or grid:<file>")->required(); };

  auto* braid = app.add_subcommand("braid", "Braid invariant of the eigenvalues along a closed loop");
  add_model(braid);
  std::vector<std::string> loop_tokens;
  std::size_t resolution = 401;
  braid->add_option("--loop", loop_tokens, "axis=<x|y|z> at=<a,b> [start=<s>] | center=<x,y,z> radius=<r> [plane=xy]")
      ->required()
      ->expected(1, 4);
  braid->add_option("--resolution", resolution, "Samples along the loop")->check(CLI::Range(3, 1000000));

  auto* flow = app.add_subcommand("wilson-flow", "Wilson-loop eigenphase flow on a cylinder");
  add_model(flow);
  std::string center2, out_path;
  double radius = 1.0, theta0 = 0.0, kz0 = -kPi;
  std::size_t loop_samples = 401, flow_samples = 401;
  flow->add_option("--center", center2, "cx,cy")->required();
  flow->add_option("--radius", radius, "Cylinder radius")->required();
  flow->add_option("--loop-samples", loop_samples);
  flow->add_option("--flow-samples", flow_samples);
  flow->add_option("--theta0", theta0, "Starting angle of each circle");
  flow->add_option("--kz0", kz0, "Start of the k_z window");
  flow->add_option("--out", out_path, "CSV output file");

  auto* nodes = app.add_subcommand("nodes", "Locate and classify band degeneracies");
  add_model(nodes);
  std::string region_spec = "bz";
  std::size_t coarse = 32;
  double probe = 0.3, tube = 0.0, tol = 1e-10;
  std::string tube_axis = "z";
  nodes->add_option("--region", region_spec, "bz or x0:x1,y0:y1,z0:z1");
  nodes->add_option("--coarse", coarse, "Coarse grid points per axis")->check(CLI::Range(8, 1024));
  nodes->add_option("--probe-radius", probe, "Classification probe radius");
  nodes->add_option("--tube", tube, "Exclude a tube of this radius around an axis");
  nodes->add_option("--tube-axis", tube_axis, "Axis of the excluded tube");
  nodes->add_option("--tol", tol, "Residual tolerance");

  auto* chern = app.add_subcommand("chern", "Chern numbers on a sphere");
  add_model(chern);
  std::string center3;
  double sphere_radius = 0.3;
  std::size_t n_theta = 201, n_phi = 201;
  chern->add_option("--center", center3, "kx,ky,kz")->required();
  chern->add_option("--radius", sphere_radius, "Sphere radius");
  chern->add_option("--n-theta", n_theta)->check(CLI::Range(5, 100000));
  chern->add_option("--n-phi", n_phi)->check(CLI::Range(8, 100000));

  auto* classify = app.add_subcommand("classify", "Classification group for a pair of band permutations");
  std::size_t n_bands = 2;
  std::string sigma1, sigma2;
  classify->add_option("--n", n_bands, "Number of bands")->required()->check(CLI::Range(2, 64));
  classify->add_option("--sigma1", sigma1, "Cycle notation, e.g. \"(1 2)\"")->required();
  classify->add_option("--sigma2", sigma2, "Cycle notation; empty for identity")->required();

  auto* kpw = app.add_subcommand("kp-weyl", "In-plane Weyl points of the perturbed k.p model");
  double alpha = 0.0;
  kpw->add_option("--alpha", alpha)->required();

  auto* sample = app.add_subcommand("sample-grid", "Write a model sampled on a grid to a grid file");
  add_model(sample);
  std::string counts_spec, ranges_spec;
  sample->add_option("--counts", counts_spec, "n1,n2,n3")->required();
  sample->add_option("--ranges", ranges_spec, "lo:hi,... (default 0:2pi per axis)");
  sample->add_option("--out", out_path, "Grid file")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run with --help for the grammar\n";
    return kUsage;
  }
  set_thread_count(threads);

  try {
    if (*classify) {
      const Permutation s1 = Permutation::from_cycles(sigma1, n_bands);
      const Permutation s2 = Permutation::from_cycles(sigma2, n_bands);
      const ClassGroup g = classification_group(s1, s2);
      json j;
      j["group"] = g.to_string();
      j["torsion"] = json::array();
      for (const auto& t : g.torsion) j["torsion"].push_back(t.get_si());
      j["free_rank"] = g.free_rank;
      out << g.to_string() << '\n' << j.dump() << '\n';
      return kOk;
    }
    if (*kpw) {
      json j;
      j["alpha"] = alpha;
      j["points"] = json::array();
      for (const auto& p : kp_weyl_positions(alpha)) j["points"].push_back({p[0], p[1], p[2]});
      out << j.dump() << '\n';
      return kOk;
    }

    const BlochModel model = parse_model(model_spec);
    if (*braid) return cmd_braid(model, loop_tokens, resolution, out);
    if (*flow) {
      check_samples(loop_samples, "--loop-samples");
      check_samples(flow_samples, "--flow-samples");
      const auto c = parse_list(center2, 2, "--center");
      CylinderSpec spec{c[0], c[1], radius, loop_samples, flow_samples, theta0, kz0};
      const WilsonFlow f = wilson_flow(model, spec);
      if (!out_path.empty()) {
        std::ofstream csv(out_path);
        if (!csv) throw Error(ErrorKind::Io, "cannot write " + out_path);
        write_flow_csv(csv, f);
        if (!csv) throw Error(ErrorKind::Io, "write failed for " + out_path);
      }
      out << crossing_json(count_crossings(f)).dump() << '\n';
      return kOk;
    }
    if (*nodes) {
      Region region = parse_region(region_spec);
      region.tube_radius = tube;
      region.tube_axis = axis_index(tube_axis);
      FindOptions fo;
      fo.coarse = coarse;
      fo.tol = tol;
      const NodeSearch found = find_nodes(model, region, fo);
      for (const auto& f : found.failures) err << "warning: " << f << '\n';
      std::vector<NodeReport> reports;
      for (const auto& n : found.nodes) {
        try {
          NodeReport r = classify_node(model, n.position, probe);
          r.residual = n.residual;
          reports.push_back(r);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::ProbeDegenerate && e.kind() != ErrorKind::SeamInconsistent &&
              e.kind() != ErrorKind::RoundingResidue)
            throw;
          err << "warning: node left unclassified: " << e.what() << '\n';
          reports.push_back(n);
        }
      }
      write_nodes_json(out, reports);
      return kOk;
    }
    if (*chern) {
      const auto c = parse_list(center3, 3, "--center");
      SphereOptions so;
      so.n_theta = n_theta;
      so.n_phi = n_phi;
      const auto ch = chern_sphere(model, Momentum{c[0], c[1], c[2]}, sphere_radius, so);
      json j;
      j["chern"] = ch;
      out << j.dump() << '\n';
      return kOk;
    }
    if (*sample) {
      std::vector<std::size_t> counts;
      for (double v : parse_list(counts_spec, model.dim(), "--counts")) {
        if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) throw UsageError("counts must be positive integers");
        counts.push_back(static_cast<std::size_t>(v));
      }
      std::vector<double> lo, hi;
      if (!ranges_spec.empty()) {
        std::stringstream ss(ranges_spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const auto lh = parse_range(item);
          lo.push_back(lh[0]);
          hi.push_back(lh[1]);
        }
        if (lo.size() != counts.size()) throw UsageError("--ranges needs one lo:hi per axis");
      }
      const GridModel g = sample_grid(model, counts, lo, hi);
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw Error(ErrorKind::Io, "cannot write " + out_path);
      save_grid_model(file, g);
      if (!file) throw Error(ErrorKind::Io, "write failed for " + out_path);
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::InvalidArgument:
      case ErrorKind::SizeMismatch:
      case ErrorKind::GridAlignment:
        return kUsage;
      case ErrorKind::GridFormat:
      case ErrorKind::Io:
        return kIo;
      default:
        return kNumerical;
    }
  }
  return kUsage;
}

}  // namespace nhtopo::cli
