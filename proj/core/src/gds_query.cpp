// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "beoltherm/errors.hpp"
#include "beoltherm/gds.hpp"

namespace beoltherm {

namespace {

// Rotation/mirror part of a transform, no translation.
IVec2 rotate_only(const OrthoTransform& t, IVec2 p) {
  OrthoTransform r = t;
  r.translate = IVec2{0, 0};
  return r.apply(p);
}

struct QueryContext {
  const LayoutDatabase* db = nullptr;
  int layer = 0;
  int datatype = 0;
  Rect window; // µm
  double um = 1.0;
  std::vector<Polygon>* out = nullptr;
};

bool bbox_misses_window(const QueryContext& q, const Cell& cell, const OrthoTransform& t) {
  if (!cell.has_bbox) return true;
  const IVec2 corners[4] = {cell.bbox_lo,
                            {cell.bbox_hi.x, cell.bbox_lo.y},
                            cell.bbox_hi,
                            {cell.bbox_lo.x, cell.bbox_hi.y}};
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const IVec2& c : corners) {
    const IVec2 p = t.apply(c);
    x0 = std::min(x0, p.x * q.um);
    y0 = std::min(y0, p.y * q.um);
    x1 = std::max(x1, p.x * q.um);
    y1 = std::max(y1, p.y * q.um);
  }
  return x1 <= q.window.x0 || x0 >= q.window.x1 || y1 <= q.window.y0 || y0 >= q.window.y1;
}

void emit_polygon(const QueryContext& q, const Polygon& poly_um) {
  for (Polygon& piece : clip_to_window(poly_um, q.window))
    q.out->push_back(std::move(piece));
}

void emit_path_outline(const QueryContext& q, const Path& path, const OrthoTransform& t) {
  const double hw = 0.5 * path.width * q.um;
  for (std::size_t s = 0; s + 1 < path.points.size(); ++s) {
    const IVec2 a = t.apply(path.points[s]);
    const IVec2 b = t.apply(path.points[s + 1]);
    if (a == b) continue;
    if (a.x != b.x && a.y != b.y)
      throw UnsupportedFeatureError("gds-query", "non-Manhattan PATH segment");
    const double ax = a.x * q.um, ay = a.y * q.um;
    const double bx = b.x * q.um, by = b.y * q.um;
    // Flush (square) end caps: the rectangle ends exactly at the endpoints.
    Rect r{std::min(ax, bx), std::min(ay, by), std::max(ax, bx), std::max(ay, by)};
    if (a.x == b.x) {
      r.x0 -= hw;
      r.x1 += hw;
    } else {
      r.y0 -= hw;
      r.y1 += hw;
    }
    emit_polygon(q, to_polygon(r));
  }
}

void walk_cell(const QueryContext& q, const Cell& cell, const OrthoTransform& t);

// Index range of array instances whose bounding boxes can reach the window.
// Falls back to the full range when a lattice vector is not axis-aligned.
struct InstanceRange {
  std::int64_t c0, c1, r0, r1;
};

InstanceRange prune_array(const QueryContext& q, const StructRef& ref, const Cell& child,
                          const OrthoTransform& base, const OrthoTransform& outer) {
  InstanceRange full{0, ref.cols - 1, 0, ref.rows - 1};
  if (!child.has_bbox) return InstanceRange{0, -1, 0, -1};

  // Lattice steps live in the parent frame; only the outer placement
  // rotates them into global coordinates.
  const IVec2 gc = rotate_only(outer, ref.col_step);
  const IVec2 gr = rotate_only(outer, ref.row_step);

  // Instance (0,0) bounding box in µm.
  double bx0 = 1e300, by0 = 1e300, bx1 = -1e300, by1 = -1e300;
  const IVec2 corners[4] = {child.bbox_lo,
                            {child.bbox_hi.x, child.bbox_lo.y},
                            child.bbox_hi,
                            {child.bbox_lo.x, child.bbox_hi.y}};
  for (const IVec2& c : corners) {
    const IVec2 p = base.apply(c);
    bx0 = std::min(bx0, p.x * q.um);
    by0 = std::min(by0, p.y * q.um);
    bx1 = std::max(bx1, p.x * q.um);
    by1 = std::max(by1, p.y * q.um);
  }

  auto axis_range = [&](double step_c, double step_r, double lo, double hi, bool for_cols,
                        std::int64_t& out_lo, std::int64_t& out_hi) -> bool {
    // Constraint on this axis: lo <= base + c*step_c + r*step_r <= hi, where
    // the instance box spans [bx,by] already. Only solvable independently
    // when exactly one lattice vector moves along this axis.
    const double sc = for_cols ? step_c : step_r;
    const double other = for_cols ? step_r : step_c;
    if (sc == 0.0 || other != 0.0) return false;
    double t0 = lo / sc, t1 = hi / sc;
    if (t0 > t1) std::swap(t0, t1);
    out_lo = static_cast<std::int64_t>(std::floor(t0)) - 1;
    out_hi = static_cast<std::int64_t>(std::ceil(t1)) + 1;
    return true;
  };

  const double gcx = gc.x * q.um, gcy = gc.y * q.um;
  const double grx = gr.x * q.um, gry = gr.y * q.um;
  InstanceRange pruned = full;
  bool c_done = false, r_done = false;

  std::int64_t lo = 0, hi = 0;
  if (axis_range(gcx, grx, q.window.x0 - bx1, q.window.x1 - bx0, true, lo, hi)) {
    pruned.c0 = std::max<std::int64_t>(pruned.c0, lo);
    pruned.c1 = std::min<std::int64_t>(pruned.c1, hi);
    c_done = true;
  }
  if (axis_range(gcy, gry, q.window.y0 - by1, q.window.y1 - by0, true, lo, hi)) {
    pruned.c0 = std::max<std::int64_t>(pruned.c0, lo);
    pruned.c1 = std::min<std::int64_t>(pruned.c1, hi);
    c_done = true;
  }
  if (axis_range(gcx, grx, q.window.x0 - bx1, q.window.x1 - bx0, false, lo, hi)) {
    pruned.r0 = std::max<std::int64_t>(pruned.r0, lo);
    pruned.r1 = std::min<std::int64_t>(pruned.r1, hi);
    r_done = true;
  }
  if (axis_range(gcy, gry, q.window.y0 - by1, q.window.y1 - by0, false, lo, hi)) {
    pruned.r0 = std::max<std::int64_t>(pruned.r0, lo);
    pruned.r1 = std::min<std::int64_t>(pruned.r1, hi);
    r_done = true;
  }
  (void)c_done;
  (void)r_done;
  return pruned;
}

void walk_ref(const QueryContext& q, const StructRef& ref, const OrthoTransform& outer) {
  const Cell* child = q.db->find_cell(ref.target);
  const OrthoTransform base = ref.transform.then_outer(outer);
  if (!ref.is_array) {
    walk_cell(q, *child, base);
    return;
  }
  const InstanceRange range = prune_array(q, ref, *child, base, outer);
  const IVec2 gc = rotate_only(outer, ref.col_step);
  const IVec2 gr = rotate_only(outer, ref.row_step);
  for (std::int64_t c = range.c0; c <= range.c1; ++c) {
    for (std::int64_t r = range.r0; r <= range.r1; ++r) {
      OrthoTransform inst = base;
      inst.translate.x += static_cast<std::int32_t>(c * gc.x + r * gr.x);
      inst.translate.y += static_cast<std::int32_t>(c * gc.y + r * gr.y);
      if (bbox_misses_window(q, *child, inst)) continue;
      walk_cell(q, *child, inst);
    }
  }
}

void walk_cell(const QueryContext& q, const Cell& cell, const OrthoTransform& t) {
  if (bbox_misses_window(q, cell, t)) return;

  const auto key = std::make_pair(q.layer, q.datatype);
  if (auto it = cell.boundaries_by_layer.find(key); it != cell.boundaries_by_layer.end()) {
    for (std::size_t idx : it->second) {
      const Boundary& b = cell.boundaries[idx];
      Polygon poly;
      poly.points.reserve(b.polygon.points.size());
      for (const IVec2& p : b.polygon.points) {
        const IVec2 g = t.apply(p);
        poly.points.push_back(Vec2{g.x * q.um, g.y * q.um});
      }
      emit_polygon(q, poly);
    }
  }
  if (auto it = cell.paths_by_layer.find(key); it != cell.paths_by_layer.end()) {
    for (std::size_t idx : it->second) emit_path_outline(q, cell.paths[idx], t);
  }
  for (const StructRef& ref : cell.refs) walk_ref(q, ref, t);
}

} // namespace

std::vector<Polygon> query_window(const LayoutDatabase& db, int layer, int datatype, const Rect& window_um) {
  if (window_um.empty())
    throw ValidationError("gds-query", "query window must have positive area");
  std::vector<Polygon> out;
  const Cell* top = db.find_cell(db.top_cell);
  if (top == nullptr) return out;
  QueryContext q{&db, layer, datatype, window_um, db.um_per_db_unit(), &out};
  walk_cell(q, *top, OrthoTransform{});
  return out;
}

bool layout_extent(const LayoutDatabase& db, Rect& out_um) {
  const Cell* top = db.find_cell(db.top_cell);
  if (top == nullptr || !top->has_bbox) return false;
  const double um = db.um_per_db_unit();
  out_um = Rect{top->bbox_lo.x * um, top->bbox_lo.y * um, top->bbox_hi.x * um, top->bbox_hi.y * um};
  return true;
}

} // namespace beoltherm
