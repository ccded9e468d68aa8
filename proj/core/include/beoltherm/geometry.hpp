// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace beoltherm {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Integer point in database units (layout coordinates).
struct IVec2 {
  std::int32_t x = 0;
  std::int32_t y = 0;
  friend bool operator==(const IVec2&, const IVec2&) = default;
};

/// Closed simple polygon stored as an open ring: the duplicated closing point
/// is never stored. Vertex order may be either orientation.
struct Polygon {
  std::vector<Vec2> points;
  friend bool operator==(const Polygon&, const Polygon&) = default;
};

/// Same, in integer database units.
struct IPolygon {
  std::vector<IVec2> points;
  friend bool operator==(const IPolygon&, const IPolygon&) = default;
};

/// Axis-aligned rectangle, low corner inclusive notionally; degenerate
/// rectangles (x0 == x1) have zero area.
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  bool contains(Vec2 p) const { return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1; }

  static Rect bounding(const Polygon& poly);
  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Signed shoelace area (positive for counterclockwise rings).
double signed_area(const Polygon& poly);
inline double area(const Polygon& poly) {
  const double s = signed_area(poly);
  return s < 0 ? -s : s;
}

/// Twice the signed area in exact integer arithmetic. Coordinates must stay
/// within +/-2^30 so the accumulator cannot overflow.
long long twice_signed_area(const IPolygon& poly);

/// Even-odd ray-crossing membership test. Points exactly on an edge follow
/// the half-open convention of the crossing rule (deterministic, and abutting
/// polygons never double-count a point).
bool point_in_polygon(Vec2 p, const Polygon& poly);

bool is_rectilinear(const Polygon& poly);

/// True when the polygon is a plain axis-aligned rectangle (4 rectilinear
/// vertices); fills `out` with the normalized corners.
bool as_rectangle(const Polygon& poly, Rect& out);

Polygon to_polygon(const Rect& r);

/// Exact decomposition of a simple rectilinear polygon into non-overlapping
/// axis-aligned rectangles by horizontal-strip sweep. A plain rectangle
/// decomposes into itself.
std::vector<Rect> decompose_rectilinear(const Polygon& poly);

/// Clips a convex polygon against the window by iterative half-plane
/// (Sutherland-Hodgman) clipping. Returns an empty polygon when the
/// intersection is empty or degenerate.
Polygon clip_convex(const Polygon& poly, const Rect& window);

/// Clips a simple polygon to an axis-aligned window. Rectilinear concave
/// inputs are decomposed into monotone convex pieces first, so every output
/// piece is itself simple; the result may therefore hold several polygons per
/// input. Pieces with area below `min_area` are dropped.
std::vector<Polygon> clip_to_window(const Polygon& poly, const Rect& window, double min_area = 0.0);

/// Validates that an integer polygon is simple: >= 3 distinct vertices,
/// nonzero area, and no two non-adjacent edges intersecting or touching.
/// Returns an empty string when valid, else a description of the defect.
std::string validate_simple_polygon(const IPolygon& poly);

} // namespace beoltherm
