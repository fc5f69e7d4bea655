#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace wavelab {

// Uniform space-time grid t_i = i*dt (i < nt), r_j = j*dr (j < nr).
struct Grid {
  std::size_t nt = 0;
  std::size_t nr = 0;
  double dt = 0.0;
  double dr = 0.0;

  // nt = round(t_max/dt)+1 style constructor from extents and cell counts.
  static Grid from_extent(double t_max, std::size_t t_cells, double r_max, std::size_t r_cells);

  [[nodiscard]] double t(std::size_t i) const { return static_cast<double>(i) * dt; }
  [[nodiscard]] double r(std::size_t j) const { return static_cast<double>(j) * dr; }
  [[nodiscard]] double t_max() const { return t(nt - 1); }
  [[nodiscard]] double r_max() const { return r(nr - 1); }
  [[nodiscard]] std::size_t size() const { return nt * nr; }

  // Throws std::invalid_argument unless steps are positive and both axes have >= 2 nodes.
  void validate() const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

// Sampled radial function u(t_i, r_j), row-major in t.
class RadialField {
 public:
  RadialField() = default;
  explicit RadialField(Grid grid, double fill = 0.0);
  RadialField(Grid grid, std::vector<double> values);

  static RadialField sample(const Grid& grid, const std::function<double(double, double)>& fn);

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return values_[i * grid_.nr + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * grid_.nr + j]; }

  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * grid_.nr, grid_.nr};
  }
  std::span<double> row(std::size_t i) { return {values_.data() + i * grid_.nr, grid_.nr}; }

  [[nodiscard]] std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  // Support radius carried with propagated fields: u = 0 for r > t + R - 1.
  [[nodiscard]] double support_radius() const { return support_radius_; }
  void set_support_radius(double R) { support_radius_ = R; }

  [[nodiscard]] double max_abs() const;

  RadialField& operator+=(const RadialField& other);
  RadialField& operator-=(const RadialField& other);
  RadialField& operator*=(double s);

  friend RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
  friend RadialField operator-(RadialField a, const RadialField& b) { return a -= b; }
  friend RadialField operator*(double s, RadialField a) { return a *= s; }

 private:
  Grid grid_;
  std::vector<double> values_;
  double support_radius_ = 0.0;
};

// CSV with header "t,r,value", one row per node, t-major.
void write_csv(std::ostream& os, const RadialField& field);
void write_csv(const std::filesystem::path& path, const RadialField& field);

// Binary dump: 16-byte header {char magic[4] = "WVLB", uint32 n, uint32 nt,
// uint32 nr}, then float64 dt, dr and nt*nr float64 values, little-endian.
inline constexpr char kBinaryMagic[4] = {'W', 'V', 'L', 'B'};

void write_binary(std::ostream& os, const RadialField& field, int n);
void write_binary(const std::filesystem::path& path, const RadialField& field, int n);

struct BinaryField {
  int n = 0;
  RadialField field;
};
BinaryField read_binary(std::istream& is);
BinaryField read_binary(const std::filesystem::path& path);

}  // namespace wavelab
