#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fpattern {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// The rotation generator L = [[0, -1], [1, 0]].
inline Vec2 apply_L(Vec2 v) { return {-v.y, v.x}; }

struct Bounds {
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Uniform node-centred tensor grid. Node (i, j) sits at
/// (xmin + i*hx, ymin + j*hy); storage is row-major with i fastest.
class Grid2D {
 public:
  Grid2D() = default;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  const Bounds& bounds() const { return bounds_; }
  double xmin() const { return bounds_.xmin; }
  double xmax() const { return bounds_.xmax; }
  double ymin() const { return bounds_.ymin; }
  double ymax() const { return bounds_.ymax; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double h() const { return std::max(hx_, hy_); }

  double x(int i) const { return bounds_.xmin + i * hx_; }
  double y(int j) const { return bounds_.ymin + j * hy_; }
  Vec2 node(int i, int j) const { return {x(i), y(j)}; }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * nx_ + i;
  }
  bool on_boundary(int i, int j) const {
    return i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1;
  }
  bool contains(Vec2 p) const {
    return p.x >= bounds_.xmin && p.x <= bounds_.xmax && p.y >= bounds_.ymin &&
           p.y <= bounds_.ymax;
  }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

 private:
  friend Grid2D make_grid(int nx, int ny, Bounds bounds);
  int nx_ = 0;
  int ny_ = 0;
  Bounds bounds_{};
  double hx_ = 0.0;
  double hy_ = 0.0;
};

/// Throws ConfigError naming the offending field when nx/ny < 4 or the
/// bounds are degenerate.
Grid2D make_grid(int nx, int ny, Bounds bounds);

class ScalarField2D {
 public:
  ScalarField2D() = default;
  explicit ScalarField2D(const Grid2D& grid, double fill = 0.0)
      : grid_(grid), values_(grid.size(), fill) {}

  static ScalarField2D from_function(const Grid2D& grid,
                                     const std::function<double(double, double)>& f);

  const Grid2D& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
  double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double min() const;
  double max() const;
  bool all_finite() const;

  friend bool operator==(const ScalarField2D&, const ScalarField2D&) = default;

 private:
  Grid2D grid_{};
  std::vector<double> values_;
};

struct VectorField2D {
  ScalarField2D x;
  ScalarField2D y;

  VectorField2D() = default;
  explicit VectorField2D(const Grid2D& grid) : x(grid), y(grid) {}
  VectorField2D(ScalarField2D cx, ScalarField2D cy);

  const Grid2D& grid() const { return x.grid(); }
  Vec2 at(int i, int j) const { return {x(i, j), y(i, j)}; }
  void set(int i, int j, Vec2 v) {
    x(i, j) = v.x;
    y(i, j) = v.y;
  }
};

/// Boolean node mask (1 = set).
class Mask2D {
 public:
  Mask2D() = default;
  explicit Mask2D(const Grid2D& grid, bool fill = false)
      : grid_(grid), bits_(grid.size(), fill ? 1 : 0) {}

  const Grid2D& grid() const { return grid_; }
  bool operator()(int i, int j) const { return bits_[grid_.index(i, j)] != 0; }
  void set(int i, int j, bool v) { bits_[grid_.index(i, j)] = v ? 1 : 0; }
  std::size_t count() const;
  bool empty() const { return bits_.empty(); }

 private:
  Grid2D grid_{};
  std::vector<std::uint8_t> bits_;
};

/// Mask of the outermost node ring.
Mask2D boundary_ring(const Grid2D& grid);

}  // namespace fpattern
