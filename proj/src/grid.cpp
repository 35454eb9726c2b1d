#include "nhtopo/grid.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

namespace nhtopo {

namespace {

constexpr std::string_view kMagic = "NHGRID1";
constexpr std::size_t kMaxHeader = 4096;

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
}

void put_double(std::ostream& out, double d) {
  const std::uint64_t le = to_little(std::bit_cast<std::uint64_t>(d));
  char bytes[8];
  std::memcpy(bytes, &le, 8);
  out.write(bytes, 8);
}

double get_double(const char* p) {
  std::uint64_t le;
  std::memcpy(&le, p, 8);
  return std::bit_cast<double>(to_little(le));
}

template <typename T>
std::vector<T> parse_list(std::string_view text, std::size_t offset) {
  std::vector<T> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view item = text.substr(start, comma - start);
    T value{};
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size() || item.empty())
      throw GridFormatError(offset + start, "malformed list entry '" + std::string(item) + "'");
    out.push_back(value);
    start = comma + 1;
  }
  return out;
}

std::vector<std::pair<double, double>> parse_ranges(std::string_view text, std::size_t offset) {
  std::vector<std::pair<double, double>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item(text.substr(start, comma - start));
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw GridFormatError(offset + start, "range entry must be lo:hi");
    try {
      std::size_t used_lo = 0, used_hi = 0;
      const double lo = std::stod(item.substr(0, colon), &used_lo);
      const double hi = std::stod(item.substr(colon + 1), &used_hi);
      if (used_lo != colon || used_hi != item.size() - colon - 1) throw std::invalid_argument("");
      out.emplace_back(lo, hi);
    } catch (const std::exception&) {
      throw GridFormatError(offset + start, "malformed range '" + item + "'");
    }
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::size_t GridModel::node_count() const noexcept {
  if (counts.empty()) return 0;
  std::size_t n = 1;
  for (std::size_t c : counts) n *= c;
  return n;
}

double GridModel::coordinate(std::size_t axis, std::size_t index) const {
  const double span = hi[axis] - lo[axis];
  if (periodic[axis])
    return lo[axis] + span * static_cast<double>(index) / static_cast<double>(counts[axis]);
  if (counts[axis] == 1) return lo[axis];
  return lo[axis] + span * static_cast<double>(index) / static_cast<double>(counts[axis] - 1);
}

Momentum GridModel::node_momentum(std::size_t flat) const {
  Momentum k = Momentum::of_dim(dim());
  for (std::size_t a = dim(); a-- > 0;) {
    k[a] = coordinate(a, flat % counts[a]);
    flat /= counts[a];
  }
  return k;
}

std::optional<std::size_t> GridModel::node_index(const Momentum& k) const {
  if (k.dim() != dim()) return std::nullopt;
  std::size_t flat = 0;
  for (std::size_t a = 0; a < dim(); ++a) {
    const double span = hi[a] - lo[a];
    double x = k[a] - lo[a];
    double steps;
    if (periodic[a]) {
      x = x - span * std::floor(x / span);
      steps = x / span * static_cast<double>(counts[a]);
    } else {
      steps = counts[a] == 1 ? 0.0 : x / span * static_cast<double>(counts[a] - 1);
    }
    const double nearest = std::round(steps);
    if (std::abs(steps - nearest) > 1e-9) return std::nullopt;
    auto idx = static_cast<long long>(nearest);
    if (periodic[a]) {
      idx %= static_cast<long long>(counts[a]);
    } else if (idx < 0 || idx >= static_cast<long long>(counts[a])) {
      return std::nullopt;
    }
    flat = flat * counts[a] + static_cast<std::size_t>(idx);
  }
  return flat;
}

Eigen::MatrixXcd GridModel::matrix_at(std::size_t flat) const {
  const std::size_t nn = bands * bands;
  Eigen::MatrixXcd h(static_cast<Eigen::Index>(bands), static_cast<Eigen::Index>(bands));
  for (std::size_t r = 0; r < bands; ++r)
    for (std::size_t c = 0; c < bands; ++c)
      h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data[flat * nn + r * bands + c];
  return h;
}

Eigen::MatrixXcd GridModel::eval(const Momentum& k) const {
  const auto flat = node_index(k);
  if (!flat) {
    std::ostringstream msg;
    msg << "momentum (";
    for (std::size_t a = 0; a < k.dim(); ++a) msg << (a ? ", " : "") << k[a];
    msg << ") is not a grid node; grid models are not interpolated";
    throw Error(ErrorKind::GridAlignment, msg.str());
  }
  return matrix_at(*flat);
}

void GridModel::validate() const {
  if (bands == 0) throw Error(ErrorKind::InvalidArgument, "grid has zero bands");
  if (counts.empty()) throw Error(ErrorKind::InvalidArgument, "grid has no axes");
  if (lo.size() != counts.size() || hi.size() != counts.size() || periodic.size() != counts.size())
    throw Error(ErrorKind::SizeMismatch, "grid axis metadata lengths differ");
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (counts[a] == 0) throw Error(ErrorKind::InvalidArgument, "grid axis with zero nodes");
    if (!(hi[a] > lo[a])) throw Error(ErrorKind::InvalidArgument, "grid axis range is empty");
  }
  if (data.size() != node_count() * bands * bands)
    throw Error(ErrorKind::SizeMismatch, "grid data length does not match node count");
  for (const auto& z : data)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorKind::InvalidArgument, "grid holds a non-finite entry");
}

void save_grid_model(std::ostream& sink, const GridModel& grid) {
  grid.validate();
  std::ostringstream header;
  header << kMagic << " N=" << grid.bands << " D=" << grid.dim() << " AXES=";
  for (std::size_t a = 0; a < grid.dim(); ++a) header << (a ? "," : "") << grid.counts[a];
  header << " PERIODIC=";
  for (std::size_t a = 0; a < grid.dim(); ++a) header << (a ? "," : "") << (grid.periodic[a] ? 1 : 0);
  bool default_ranges = true;
  for (std::size_t a = 0; a < grid.dim(); ++a)
    default_ranges = default_ranges && grid.lo[a] == 0.0 && grid.hi[a] == kTwoPi;
  if (!default_ranges) {
    header << " RANGES=" << std::setprecision(17);
    for (std::size_t a = 0; a < grid.dim(); ++a)
      header << (a ? "," : "") << grid.lo[a] << ":" << grid.hi[a];
  }
  header << "\n";
  const std::string h = header.str();
  sink.write(h.data(), static_cast<std::streamsize>(h.size()));
  for (const auto& z : grid.data) {
    put_double(sink, z.real());
    put_double(sink, z.imag());
  }
  if (!sink) throw Error(ErrorKind::Io, "failed writing grid data");
}

GridModel load_grid_model(std::istream& source) {
  std::string header;
  for (char ch; header.size() < kMaxHeader && source.get(ch);) {
    if (ch == '\n') break;
    header.push_back(ch);
  }
  if (header.size() >= kMaxHeader) throw GridFormatError(kMaxHeader, "header line too long");
  if (!source) throw GridFormatError(header.size(), "missing header terminator");
  const std::size_t data_start = header.size() + 1;

  if (header.compare(0, kMagic.size(), kMagic) != 0) throw GridFormatError(0, "bad magic");

  GridModel grid;
  std::size_t declared_dim = 0;
  bool have_n = false, have_d = false, have_axes = false, have_periodic = false;
  std::vector<int> periodic_flags;
  std::vector<std::pair<double, double>> ranges;

  std::size_t pos = kMagic.size();
  while (pos < header.size()) {
    if (header[pos] == ' ') {
      ++pos;
      continue;
    }
    const std::size_t end = std::min(header.find(' ', pos), header.size());
    const std::string_view token(header.data() + pos, end - pos);
    const std::size_t eq = token.find('=');
    if (eq == std::string_view::npos) throw GridFormatError(pos, "expected KEY=VALUE");
    const std::string_view key = token.substr(0, eq);
    const std::string_view value = token.substr(eq + 1);
    const std::size_t value_offset = pos + eq + 1;
    if (key == "N") {
      const auto v = parse_list<std::size_t>(value, value_offset);
      if (v.size() != 1 || v[0] == 0) throw GridFormatError(value_offset, "N must be a positive integer");
      grid.bands = v[0];
      have_n = true;
    } else if (key == "D") {
      const auto v = parse_list<std::size_t>(value, value_offset);
      if (v.size() != 1 || v[0] == 0 || v[0] > 3) throw GridFormatError(value_offset, "D must be 1..3");
      declared_dim = v[0];
      have_d = true;
    } else if (key == "AXES") {
      grid.counts = parse_list<std::size_t>(value, value_offset);
      have_axes = true;
    } else if (key == "PERIODIC") {
      periodic_flags = parse_list<int>(value, value_offset);
      for (int f : periodic_flags)
        if (f != 0 && f != 1) throw GridFormatError(value_offset, "PERIODIC flags must be 0 or 1");
      have_periodic = true;
    } else if (key == "RANGES") {
      ranges = parse_ranges(value, value_offset);
    } else {
      throw GridFormatError(pos, "unknown header key '" + std::string(key) + "'");
    }
    pos = end;
  }
  if (!have_n || !have_d || !have_axes || !have_periodic)
    throw GridFormatError(header.size(), "header requires N, D, AXES and PERIODIC");
  if (grid.counts.size() != declared_dim)
    throw GridFormatError(header.find("AXES="), "AXES length does not match D");
  if (periodic_flags.size() != declared_dim)
    throw GridFormatError(header.find("PERIODIC="), "PERIODIC length does not match D");
  if (!ranges.empty() && ranges.size() != declared_dim)
    throw GridFormatError(header.find("RANGES="), "RANGES length does not match D");
  for (std::size_t c : grid.counts)
    if (c == 0) throw GridFormatError(header.find("AXES="), "axis with zero nodes");

  for (std::size_t a = 0; a < declared_dim; ++a) {
    grid.periodic.push_back(periodic_flags[a] == 1);
    grid.lo.push_back(ranges.empty() ? 0.0 : ranges[a].first);
    grid.hi.push_back(ranges.empty() ? kTwoPi : ranges[a].second);
    if (!(grid.hi[a] > grid.lo[a])) throw GridFormatError(header.find("RANGES="), "empty axis range");
  }

  const std::string payload((std::istreambuf_iterator<char>(source)), std::istreambuf_iterator<char>());
  const std::size_t entries = grid.node_count() * grid.bands * grid.bands;
  const std::size_t expected = entries * 16;
  if (payload.size() != expected) {
    std::ostringstream msg;
    msg << "dimension mismatch: header implies " << grid.node_count() << " matrices (" << expected
        << " bytes) but payload holds " << payload.size() << " bytes";
    throw GridFormatError(data_start + std::min(payload.size(), expected), msg.str());
  }
  grid.data.resize(entries);
  for (std::size_t e = 0; e < entries; ++e) {
    const double re = get_double(payload.data() + 16 * e);
    const double im = get_double(payload.data() + 16 * e + 8);
    if (!std::isfinite(re)) throw GridFormatError(data_start + 16 * e, "non-finite entry");
    if (!std::isfinite(im)) throw GridFormatError(data_start + 16 * e + 8, "non-finite entry");
    grid.data[e] = {re, im};
  }
  return grid;
}

}  // namespace nhtopo
