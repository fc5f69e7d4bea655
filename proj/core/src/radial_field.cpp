#include "wavelab/radial_field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace wavelab {

Grid Grid::from_extent(double t_max, std::size_t t_cells, double r_max, std::size_t r_cells) {
  if (t_cells == 0 || r_cells == 0) throw std::invalid_argument("Grid: cell counts must be positive");
  if (!(t_max > 0.0) || !(r_max > 0.0)) throw std::invalid_argument("Grid: extents must be positive");
  return {t_cells + 1, r_cells + 1, t_max / static_cast<double>(t_cells), r_max / static_cast<double>(r_cells)};
}

void Grid::validate() const {
  if (nt < 2 || nr < 2) throw std::invalid_argument("Grid: need at least two nodes per axis");
  if (!(dt > 0.0) || !(dr > 0.0)) throw std::invalid_argument("Grid: steps must be positive");
}

RadialField::RadialField(Grid grid, double fill) : grid_(grid), values_(grid.size(), fill) {
  grid_.validate();
}

RadialField::RadialField(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.size()) throw std::invalid_argument("RadialField: value count does not match grid");
}

RadialField RadialField::sample(const Grid& grid, const std::function<double(double, double)>& fn) {
  RadialField f(grid);
  for (std::size_t i = 0; i < grid.nt; ++i)
    for (std::size_t j = 0; j < grid.nr; ++j) f(i, j) = fn(grid.t(i), grid.r(j));
  return f;
}

double RadialField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

RadialField& RadialField::operator+=(const RadialField& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("RadialField: grid mismatch");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

RadialField& RadialField::operator-=(const RadialField& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("RadialField: grid mismatch");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

RadialField& RadialField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void write_csv(std::ostream& os, const RadialField& field) {
  const Grid& g = field.grid();
  os << "t,r,value\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < g.nt; ++i)
    for (std::size_t j = 0; j < g.nr; ++j) os << g.t(i) << ',' << g.r(j) << ',' << field(i, j) << '\n';
}

void write_csv(const std::filesystem::path& path, const RadialField& field) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  write_csv(os, field);
}

namespace {

static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw std::runtime_error("binary field: truncated input");
  return v;
}

}  // namespace

void write_binary(std::ostream& os, const RadialField& field, int n) {
  const Grid& g = field.grid();
  os.write(kBinaryMagic, 4);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(n));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.nt));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.nr));
  put<double>(os, g.dt);
  put<double>(os, g.dr);
  auto v = field.values();
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void write_binary(const std::filesystem::path& path, const RadialField& field, int n) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  write_binary(os, field, n);
}

BinaryField read_binary(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kBinaryMagic, 4) != 0)
    throw std::runtime_error("binary field: bad magic");
  BinaryField out;
  out.n = static_cast<int>(get<std::uint32_t>(is));
  Grid g;
  g.nt = get<std::uint32_t>(is);
  g.nr = get<std::uint32_t>(is);
  g.dt = get<double>(is);
  g.dr = get<double>(is);
  std::vector<double> values(g.nt * g.nr);
  if (!is.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double))))
    throw std::runtime_error("binary field: truncated payload");
  out.field = RadialField(g, std::move(values));
  return out;
}

BinaryField read_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_binary(is);
}

}  // namespace wavelab
