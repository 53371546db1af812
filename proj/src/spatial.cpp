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


#include "sscc/spatial.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <random>

#include "sscc/error.hpp"

namespace sscc {

Window::Window(double side_length, EdgeMode mode, double eval_fraction)
    : side_(side_length), mode_(mode), eval_fraction_(eval_fraction) {
  if (!(side_length > 0.0) || !std::isfinite(side_length))
    throw InvalidArgument("window side length must be positive and finite");
  if (!(eval_fraction > 0.0 && eval_fraction <= 1.0))
    throw InvalidArgument("evaluation fraction must lie in (0, 1]");
  const double half = 0.5 * side_ * eval_fraction_;
  const double mid = 0.5 * side_;
  eval_ = {mid - half, mid - half, mid + half, mid + half};
}

PointPattern::PointPattern(Window window, std::vector<MarkedPoint> points)
    : window_(std::move(window)), points_(std::move(points)) {
  const Rect b = window_.bounds();
  for (const auto& p : points_) {
    if (!b.contains(p.location)) throw InvalidArgument("point outside window");
    if (!(p.mark >= 0.0)) throw InvalidArgument("marks must be nonnegative");
    if (!(p.weight >= 0.0 && p.weight <= 1.0)) throw InvalidArgument("weights must lie in [0, 1]");
  }
}

PointPattern PointPattern::with_marks(std::span<const double> marks,
                                      std::span<const double> weights) const {
  if (marks.size() != points_.size() || weights.size() != points_.size())
    throw InvalidArgument("mark/weight vectors must match the pattern size");
  std::vector<MarkedPoint> pts(points_.begin(), points_.end());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i].mark = marks[i];
    pts[i].weight = weights[i];
  }
  return PointPattern(window_, std::move(pts));
}

std::vector<std::size_t> PointPattern::indices_in(const Rect& region) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (region.contains(points_[i].location)) out.push_back(i);
  return out;
}

PointPattern sample_ppp(double intensity, const Window& window, RngStream& rng) {
  if (!(intensity > 0.0) || !std::isfinite(intensity))
    throw InvalidArgument("intensity must be positive and finite");
  std::poisson_distribution<long long> count_dist(intensity * window.area());
  const auto n = static_cast<std::size_t>(count_dist(rng));
  std::vector<MarkedPoint> pts(n);
  const double side = window.side();
  for (auto& p : pts) {
    // uniform() < 1, so side * uniform() < side up to rounding; clamp the rare edge case.
    p.location.x = std::min(side * rng.uniform(), std::nextafter(side, 0.0));
    p.location.y = std::min(side * rng.uniform(), std::nextafter(side, 0.0));
  }
  return PointPattern(window, std::move(pts));
}

std::vector<Point2D> sample_uniform(const Rect& region, std::size_t count, RngStream& rng) {
  std::vector<Point2D> out(count);
  const double w = region.x1 - region.x0;
  const double h = region.y1 - region.y0;
  for (auto& p : out) {
    p.x = region.x0 + w * rng.uniform();
    p.y = region.y0 + h * rng.uniform();
  }
  return out;
}

double distance(const Point2D& a, const Point2D& b, const Window& window) {
  double dx = std::abs(a.x - b.x);
  double dy = std::abs(a.y - b.y);
  if (window.edge_mode() == EdgeMode::kTorus) {
    const double side = window.side();
    dx = std::min(dx, side - dx);
    dy = std::min(dy, side - dy);
  }
  return std::hypot(dx, dy);
}

double lens_area(double r, double delta) {
  if (!(r >= 0.0) || !(delta >= 0.0)) throw InvalidArgument("lens_area: negative radius");
  if (r == 0.0 || delta == 0.0) return 0.0;
  if (delta >= 2.0 * r) return std::numbers::pi * r * r;
  // acos(1 - d^2 / 2r^2) written as 2 asin(d / 2r), which stays accurate for d << r.
  const double a1 = 2.0 * r * r * std::asin(std::min(1.0, delta / (2.0 * r)));
  const double a2 = delta * delta * std::acos(std::clamp(delta / (2.0 * r), -1.0, 1.0));
  const double tri = 0.5 * delta * std::sqrt(std::max(0.0, 4.0 * r * r - delta * delta));
  return std::clamp(a1 + a2 - tri, 0.0, std::numbers::pi * std::min(r * r, delta * delta));
}

// ---------------------------------------------------------------------------
// SpatialIndex

SpatialIndex::SpatialIndex(const Window& window, std::span<const Point2D> locations,
                           double cell_size) {
  std::vector<std::size_t> ids(locations.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  build(window, locations, ids, cell_size);
}

SpatialIndex::SpatialIndex(const PointPattern& pattern, double cell_size) {
  std::vector<Point2D> locs(pattern.size());
  std::vector<std::size_t> ids(pattern.size());
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    locs[i] = pattern[i].location;
    ids[i] = i;
  }
  build(pattern.window(), locs, ids, cell_size);
}

SpatialIndex::SpatialIndex(const PointPattern& pattern, std::span<const std::size_t> subset,
                           double cell_size) {
  std::vector<Point2D> locs;
  locs.reserve(subset.size());
  for (auto i : subset) locs.push_back(pattern[i].location);
  build(pattern.window(), locs, subset, cell_size);
}

int SpatialIndex::cell_of(double coord) const {
  const int c = static_cast<int>(coord / cell_width_);
  return std::clamp(c, 0, cells_ - 1);
}

void SpatialIndex::build(const Window& window, std::span<const Point2D> locations,
                         std::span<const std::size_t> ids, double cell_size) {
  side_ = window.side();
  torus_ = window.edge_mode() == EdgeMode::kTorus;
  if (!(cell_size > 0.0)) cell_size = side_;
  // Cap the grid so tiny interaction ranges do not allocate huge tables.
  const double max_cells = std::max(1.0, std::min(512.0, std::sqrt(static_cast<double>(locations.size())) * 2.0));
  cells_ = static_cast<int>(std::clamp(std::floor(side_ / cell_size), 1.0, max_cells));
  cell_width_ = side_ / cells_;

  const std::size_t ncell = static_cast<std::size_t>(cells_) * cells_;
  std::vector<std::uint32_t> cell_id(locations.size());
  start_.assign(ncell + 1, 0);
  for (std::size_t k = 0; k < locations.size(); ++k) {
    cell_id[k] = static_cast<std::uint32_t>(cell_of(locations[k].y) * cells_ + cell_of(locations[k].x));
    ++start_[cell_id[k] + 1];
  }
  std::partial_sum(start_.begin(), start_.end(), start_.begin());
  pts_.resize(locations.size());
  ids_.resize(locations.size());
  std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t k = 0; k < locations.size(); ++k) {
    const auto slot = fill[cell_id[k]]++;
    pts_[slot] = locations[k];
    ids_[slot] = ids[k];
  }
}

std::optional<SpatialIndex::Hit> SpatialIndex::nearest(const Point2D& centre,
                                                       double max_radius) const {
  std::optional<Hit> best;
  for_each_within(centre, max_radius, [&](std::size_t idx, double d) {
    if (!best || d < best->distance || (d == best->distance && idx < best->index))
      best = Hit{idx, d};
  });
  return best;
}

}  // namespace sscc
