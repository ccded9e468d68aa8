// SPDX-License-Identifier: Apache-2.0
#include "beoltherm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace beoltherm {

Rect Rect::bounding(const Polygon& poly) {
  Rect r{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
         std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  for (const Vec2& p : poly.points) {
    r.x0 = std::min(r.x0, p.x);
    r.y0 = std::min(r.y0, p.y);
    r.x1 = std::max(r.x1, p.x);
    r.y1 = std::max(r.y1, p.y);
  }
  return r;
}

double signed_area(const Polygon& poly) {
  const auto& p = poly.points;
  const std::size_t n = p.size();
  double twice = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    twice += p[j].x * p[i].y - p[i].x * p[j].y;
  return 0.5 * twice;
}

long long twice_signed_area(const IPolygon& poly) {
  const auto& p = poly.points;
  const std::size_t n = p.size();
  long long twice = 0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    twice += static_cast<long long>(p[j].x) * p[i].y - static_cast<long long>(p[i].x) * p[j].y;
  return twice;
}

bool point_in_polygon(Vec2 q, const Polygon& poly) {
  const auto& p = poly.points;
  const std::size_t n = p.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((p[i].y > q.y) != (p[j].y > q.y) &&
        q.x < (p[j].x - p[i].x) * (q.y - p[i].y) / (p[j].y - p[i].y) + p[i].x)
      inside = !inside;
  }
  return inside;
}

bool is_rectilinear(const Polygon& poly) {
  const auto& p = poly.points;
  const std::size_t n = p.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    if (p[i].x != p[j].x && p[i].y != p[j].y) return false;
  return true;
}

bool as_rectangle(const Polygon& poly, Rect& out) {
  if (poly.points.size() != 4 || !is_rectilinear(poly)) return false;
  Rect bb = Rect::bounding(poly);
  // The four vertices must be exactly the four corners of the bounding box.
  for (const Vec2& p : poly.points) {
    if ((p.x != bb.x0 && p.x != bb.x1) || (p.y != bb.y0 && p.y != bb.y1)) return false;
  }
  if (bb.empty()) return false;
  out = bb;
  return true;
}

Polygon to_polygon(const Rect& r) {
  return Polygon{{{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}}};
}

std::vector<Rect> decompose_rectilinear(const Polygon& poly) {
  const auto& pts = poly.points;
  const std::size_t n = pts.size();

  std::vector<double> ys;
  ys.reserve(n);
  for (const Vec2& p : pts) ys.push_back(p.y);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  std::vector<Rect> out;
  for (std::size_t s = 0; s + 1 < ys.size(); ++s) {
    const double ylo = ys[s], yhi = ys[s + 1];
    // Vertical edges spanning this strip, by x.
    std::vector<double> xs;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      if (pts[i].x != pts[j].x) continue; // horizontal edge
      const double e0 = std::min(pts[i].y, pts[j].y);
      const double e1 = std::max(pts[i].y, pts[j].y);
      if (e0 <= ylo && e1 >= yhi) xs.push_back(pts[i].x);
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2)
      out.push_back(Rect{xs[k], ylo, xs[k + 1], yhi});
  }
  // Merge vertically adjacent strips with identical x-extent so a plain
  // rectangle round-trips as one piece.
  std::vector<Rect> merged;
  for (const Rect& r : out) {
    bool fused = false;
    for (Rect& m : merged) {
      if (m.x0 == r.x0 && m.x1 == r.x1 && m.y1 == r.y0) {
        m.y1 = r.y1;
        fused = true;
        break;
      }
    }
    if (!fused) merged.push_back(r);
  }
  return merged;
}

namespace {

Polygon clip_half_plane(const Polygon& poly, int axis, double c, int keep_sign) {
  // keep_sign=+1 keeps coord >= c, keep_sign=-1 keeps coord <= c.
  Polygon out;
  const auto& p = poly.points;
  const std::size_t n = p.size();
  if (n == 0) return out;
  auto coord = [axis](const Vec2& v) { return axis == 0 ? v.x : v.y; };
  auto inside = [&](const Vec2& v) {
    return keep_sign > 0 ? coord(v) >= c : coord(v) <= c;
  };
  auto intersect = [&](const Vec2& a, const Vec2& b) {
    const double t = (c - coord(a)) / (coord(b) - coord(a));
    return axis == 0 ? Vec2{c, a.y + t * (b.y - a.y)} : Vec2{a.x + t * (b.x - a.x), c};
  };
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = p[j];
    const Vec2& b = p[i];
    const bool ia = inside(a), ib = inside(b);
    if (ia && ib) {
      out.points.push_back(b);
    } else if (ia && !ib) {
      out.points.push_back(intersect(a, b));
    } else if (!ia && ib) {
      out.points.push_back(intersect(a, b));
      out.points.push_back(b);
    }
  }
  // Drop consecutive duplicates introduced by vertices on the clip line.
  Polygon dedup;
  for (const Vec2& v : out.points) {
    if (dedup.points.empty() || !(dedup.points.back() == v)) dedup.points.push_back(v);
  }
  while (dedup.points.size() > 1 && dedup.points.front() == dedup.points.back())
    dedup.points.pop_back();
  return dedup;
}

} // namespace

Polygon clip_convex(const Polygon& poly, const Rect& window) {
  Polygon cur = poly;
  cur = clip_half_plane(cur, 0, window.x0, +1);
  cur = clip_half_plane(cur, 0, window.x1, -1);
  cur = clip_half_plane(cur, 1, window.y0, +1);
  cur = clip_half_plane(cur, 1, window.y1, -1);
  if (cur.points.size() < 3 || area(cur) == 0.0) return Polygon{};
  return cur;
}

std::vector<Polygon> clip_to_window(const Polygon& poly, const Rect& window, double min_area) {
  std::vector<Polygon> out;
  Rect bb = Rect::bounding(poly);
  if (bb.x1 <= window.x0 || bb.x0 >= window.x1 || bb.y1 <= window.y0 || bb.y0 >= window.y1)
    return out;

  Rect as_rect;
  if (as_rectangle(poly, as_rect)) {
    Rect c{std::max(as_rect.x0, window.x0), std::max(as_rect.y0, window.y0),
           std::min(as_rect.x1, window.x1), std::min(as_rect.y1, window.y1)};
    if (!c.empty() && c.area() > min_area) out.push_back(to_polygon(c));
    return out;
  }

  if (is_rectilinear(poly)) {
    for (const Rect& piece : decompose_rectilinear(poly)) {
      Rect c{std::max(piece.x0, window.x0), std::max(piece.y0, window.y0),
             std::min(piece.x1, window.x1), std::min(piece.y1, window.y1)};
      if (!c.empty() && c.area() > min_area) out.push_back(to_polygon(c));
    }
    return out;
  }

  // Non-rectilinear input is outside the supported geometry subset; clip it
  // directly and accept that concave shapes may come back as one bridged ring.
  Polygon c = clip_convex(poly, window);
  if (!c.points.empty() && area(c) > min_area) out.push_back(c);
  return out;
}

namespace {

int orient(const IVec2& a, const IVec2& b, const IVec2& c) {
  const long long v = static_cast<long long>(b.x - a.x) * (c.y - a.y) -
                      static_cast<long long>(b.y - a.y) * (c.x - a.x);
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

bool on_segment(const IVec2& a, const IVec2& b, const IVec2& p) {
  return orient(a, b, p) == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_touch(const IVec2& a, const IVec2& b, const IVec2& c, const IVec2& d) {
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  return on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b);
}

} // namespace

std::string validate_simple_polygon(const IPolygon& poly) {
  const auto& p = poly.points;
  const std::size_t n = p.size();
  if (n < 3) return "fewer than 3 vertices";
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(p[i].x) > (1 << 30) || std::abs(p[i].y) > (1 << 30))
      return "coordinate magnitude exceeds 2^30 db units";
    if (p[i] == p[(i + 1) % n]) return "repeated consecutive vertex";
  }
  if (twice_signed_area(poly) == 0) return "zero signed area";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Skip adjacent edges (they share one endpoint by construction).
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_touch(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n]))
        return "self-intersection between edges " + std::to_string(i) + " and " + std::to_string(j);
    }
  }
  return {};
}

} // namespace beoltherm
