/*
 * Copyright 2026 The SSCC Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#ifndef SSCC_SPATIAL_HPP
#define SSCC_SPATIAL_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <type_traits>
#include <span>
#include <vector>

#include "sscc/rng.hpp"

namespace sscc {

enum class EdgeMode { kBorderCrop, kTorus };

struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangle [x0, x1) x [y0, y1).
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  bool contains(const Point2D& p) const { return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1; }
  double area() const { return (x1 - x0) * (y1 - y0); }
  Rect dilated(double r) const { return {x0 - r, y0 - r, x1 + r, y1 + r}; }
};

/// Square observation window [0, L)^2 with a centred evaluation sub-square.
class Window {
 public:
  /// `eval_fraction` is the side of the evaluation square relative to L.
  explicit Window(double side_length, EdgeMode mode = EdgeMode::kBorderCrop,
                  double eval_fraction = 1.0 / 3.0);

  double side() const { return side_; }
  double area() const { return side_ * side_; }
  EdgeMode edge_mode() const { return mode_; }
  double eval_fraction() const { return eval_fraction_; }
  Rect bounds() const { return {0.0, 0.0, side_, side_}; }
  const Rect& evaluation_region() const { return eval_; }

 private:
  double side_;
  EdgeMode mode_;
  double eval_fraction_;
  Rect eval_;
};

/// A node with the per-item exclusion mark and thinning weight.
struct MarkedPoint {
  Point2D location;
  double mark = 0.0;    // exclusion radius, >= 0
  double weight = 0.0;  // priority in [0, 1); lower wins
};

/// Immutable-after-construction finite point set in a window.
class PointPattern {
 public:
  PointPattern(Window window, std::vector<MarkedPoint> points);

  const Window& window() const { return window_; }
  std::span<const MarkedPoint> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const MarkedPoint& operator[](std::size_t i) const { return points_[i]; }

  /// Copy with replaced marks and weights; sizes must match.
  PointPattern with_marks(std::span<const double> marks, std::span<const double> weights) const;

  /// Indices of points located inside `region`.
  std::vector<std::size_t> indices_in(const Rect& region) const;

 private:
  Window window_;
  std::vector<MarkedPoint> points_;
};

/// Homogeneous PPP of intensity `intensity` in `window`; marks and weights are zero.
PointPattern sample_ppp(double intensity, const Window& window, RngStream& rng);

/// `count` i.i.d. uniform locations inside `region`.
std::vector<Point2D> sample_uniform(const Rect& region, std::size_t count, RngStream& rng);

/// Euclidean distance, or the minimal wrapped distance on the torus.
double distance(const Point2D& a, const Point2D& b, const Window& window);

/// Area of the intersection of a disk of radius r with a disk of radius delta
/// whose centre lies at distance r from the first centre.
double lens_area(double r, double delta);

/// Uniform-grid bucket index over a subset of locations, torus aware.
class SpatialIndex {
 public:
  SpatialIndex(const Window& window, std::span<const Point2D> locations, double cell_size);
  SpatialIndex(const PointPattern& pattern, double cell_size);
  /// Index over `pattern` restricted to `subset` (original indices are reported).
  SpatialIndex(const PointPattern& pattern, std::span<const std::size_t> subset, double cell_size);

  /// Calls fn(index, distance) for every indexed point within `radius` of `centre`.
  template <class Fn>
  void for_each_within(const Point2D& centre, double radius, Fn&& fn) const;

  /// Nearest indexed point within `max_radius`, if any.
  struct Hit {
    std::size_t index;
    double distance;
  };
  std::optional<Hit> nearest(const Point2D& centre, double max_radius) const;

  std::size_t size() const { return ids_.size(); }

 private:
  void build(const Window& window, std::span<const Point2D> locations,
             std::span<const std::size_t> ids, double cell_size);
  int cell_of(double coord) const;

  double side_ = 0.0;
  bool torus_ = false;
  int cells_ = 1;
  double cell_width_ = 1.0;
  std::vector<std::uint32_t> start_;  // CSR offsets, cells_*cells_ + 1
  std::vector<Point2D> pts_;          // sorted by cell
  std::vector<std::size_t> ids_;      // original indices, sorted by cell
};

template <class Fn>
void SpatialIndex::for_each_within(const Point2D& c, double radius, Fn&& fn) const {
  if (ids_.empty() || radius < 0.0) return;
  const double r2 = radius * radius;
  const int reach = static_cast<int>(std::ceil(radius / cell_width_));
  const int cx = cell_of(c.x);
  const int cy = cell_of(c.y);
  int lo_x = cx - reach, hi_x = cx + reach, lo_y = cy - reach, hi_y = cy + reach;
  if (torus_) {
    if (2 * reach + 1 >= cells_) {
      lo_x = lo_y = 0;
      hi_x = hi_y = cells_ - 1;
    }
  } else {
    lo_x = std::max(lo_x, 0);
    lo_y = std::max(lo_y, 0);
    hi_x = std::min(hi_x, cells_ - 1);
    hi_y = std::min(hi_y, cells_ - 1);
  }
  const double half = 0.5 * side_;
  for (int gy = lo_y; gy <= hi_y; ++gy) {
    const int wy = torus_ ? ((gy % cells_) + cells_) % cells_ : gy;
    for (int gx = lo_x; gx <= hi_x; ++gx) {
      const int wx = torus_ ? ((gx % cells_) + cells_) % cells_ : gx;
      const std::size_t cell = static_cast<std::size_t>(wy) * cells_ + wx;
      for (std::uint32_t k = start_[cell]; k < start_[cell + 1]; ++k) {
        double dx = std::abs(pts_[k].x - c.x);
        double dy = std::abs(pts_[k].y - c.y);
        if (torus_) {
          if (dx > half) dx = side_ - dx;
          if (dy > half) dy = side_ - dy;
        }
        const double d2 = dx * dx + dy * dy;
        if (d2 > r2) continue;
        if constexpr (std::is_same_v<std::invoke_result_t<Fn&, std::size_t, double>, bool>) {
          if (!fn(ids_[k], std::sqrt(d2))) return;
        } else {
          fn(ids_[k], std::sqrt(d2));
        }
      }
    }
  }
}

}  // namespace sscc

#endif  // SSCC_SPATIAL_HPP
