// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "beoltherm/errors.hpp"
#include "beoltherm/gds.hpp"
#include "gds_records.hpp"

namespace beoltherm {

IVec2 OrthoTransform::apply(IVec2 p) const {
  if (mirror_x) p.y = -p.y;
  switch (rot & 3) {
    case 1: p = IVec2{static_cast<std::int32_t>(-p.y), p.x}; break;
    case 2: p = IVec2{static_cast<std::int32_t>(-p.x), static_cast<std::int32_t>(-p.y)}; break;
    case 3: p = IVec2{p.y, static_cast<std::int32_t>(-p.x)}; break;
    default: break;
  }
  return IVec2{p.x + translate.x, p.y + translate.y};
}

OrthoTransform OrthoTransform::then_outer(const OrthoTransform& outer) const {
  // outer(inner(x)) with M R(theta) = R(-theta) M.
  OrthoTransform c;
  c.mirror_x = outer.mirror_x != mirror_x;
  c.rot = (outer.rot + (outer.mirror_x ? 4 - (rot & 3) : rot)) & 3;
  OrthoTransform rot_only = outer;
  rot_only.translate = IVec2{0, 0};
  c.translate = rot_only.apply(translate);
  c.translate.x += outer.translate.x;
  c.translate.y += outer.translate.y;
  return c;
}

double gds_real64_decode(const unsigned char b[8]) {
  const bool neg = (b[0] & 0x80) != 0;
  const int exp16 = static_cast<int>(b[0] & 0x7F) - 64;
  std::uint64_t m = 0;
  for (int i = 1; i < 8; ++i) m = (m << 8) | b[i];
  if (m == 0) return 0.0;
  const double v = std::ldexp(static_cast<double>(m), 4 * exp16 - 56);
  return neg ? -v : v;
}

void gds_real64_encode(double value, unsigned char b[8]) {
  std::memset(b, 0, 8);
  if (value == 0.0) return;
  const bool neg = value < 0.0;
  double a = neg ? -value : value;
  int e2 = 0;
  const double f = std::frexp(a, &e2); // a = f * 2^e2, f in [0.5, 1)
  int e16 = (e2 + 3) / 4;              // smallest e16 with 4*e16 >= e2
  if (4 * e16 < e2) ++e16;
  const int shift = 56 - (4 * e16 - e2);
  const auto m = static_cast<std::uint64_t>(std::ldexp(f, shift));
  if (e16 + 64 < 0 || e16 + 64 > 127)
    throw ValidationError("gds-write", "real value out of excess-64 range");
  b[0] = static_cast<unsigned char>((neg ? 0x80 : 0x00) | static_cast<unsigned char>(e16 + 64));
  for (int i = 0; i < 7; ++i) b[7 - i] = static_cast<unsigned char>((m >> (8 * i)) & 0xFF);
}

const Cell* LayoutDatabase::find_cell(const std::string& name) const {
  for (const Cell& c : cells)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

struct BBox {
  bool valid = false;
  std::int64_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  void add(std::int64_t x, std::int64_t y) {
    if (!valid) {
      x0 = x1 = x;
      y0 = y1 = y;
      valid = true;
    } else {
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
};

void cell_bbox(LayoutDatabase& db, std::size_t idx, std::vector<int>& state);

BBox ref_bbox(LayoutDatabase& db, const StructRef& ref, std::vector<int>& state) {
  BBox out;
  const Cell* child = db.find_cell(ref.target);
  const std::size_t child_idx = static_cast<std::size_t>(child - db.cells.data());
  cell_bbox(db, child_idx, state);
  const Cell& c = db.cells[child_idx];
  if (!c.has_bbox) return out;
  const IVec2 corners[4] = {c.bbox_lo,
                            {c.bbox_hi.x, c.bbox_lo.y},
                            {c.bbox_hi.x, c.bbox_hi.y},
                            {c.bbox_lo.x, c.bbox_hi.y}};
  const int ncols = ref.is_array ? ref.cols : 1;
  const int nrows = ref.is_array ? ref.rows : 1;
  for (const IVec2& corner : corners) {
    const IVec2 p = ref.transform.apply(corner);
    for (int ci : {0, ncols - 1}) {
      for (int ri : {0, nrows - 1}) {
        out.add(p.x + static_cast<std::int64_t>(ci) * ref.col_step.x + static_cast<std::int64_t>(ri) * ref.row_step.x,
                p.y + static_cast<std::int64_t>(ci) * ref.col_step.y + static_cast<std::int64_t>(ri) * ref.row_step.y);
      }
    }
  }
  return out;
}

void cell_bbox(LayoutDatabase& db, std::size_t idx, std::vector<int>& state) {
  if (state[idx] == 2) return;
  state[idx] = 1;
  Cell& cell = db.cells[idx];
  BBox bb;
  for (const Boundary& b : cell.boundaries)
    for (const IVec2& p : b.polygon.points) bb.add(p.x, p.y);
  for (const Path& p : cell.paths) {
    const std::int64_t hw = (p.width + 1) / 2;
    for (const IVec2& q : p.points) {
      bb.add(q.x - hw, q.y - hw);
      bb.add(q.x + hw, q.y + hw);
    }
  }
  for (const StructRef& r : cell.refs) {
    BBox rb = ref_bbox(db, r, state);
    if (rb.valid) {
      bb.add(rb.x0, rb.y0);
      bb.add(rb.x1, rb.y1);
    }
  }
  cell.has_bbox = bb.valid;
  if (bb.valid) {
    cell.bbox_lo = IVec2{static_cast<std::int32_t>(bb.x0), static_cast<std::int32_t>(bb.y0)};
    cell.bbox_hi = IVec2{static_cast<std::int32_t>(bb.x1), static_cast<std::int32_t>(bb.y1)};
  }
  state[idx] = 2;
}

void check_acyclic(const LayoutDatabase& db) {
  // DFS with an explicit path so a cycle can be reported by name.
  const std::size_t n = db.cells.size();
  std::vector<int> state(n, 0); // 0 unvisited, 1 on path, 2 done
  std::vector<std::string> path;

  struct Frame {
    std::size_t cell;
    std::size_t next_ref;
  };

  for (std::size_t root = 0; root < n; ++root) {
    if (state[root] != 0) continue;
    std::vector<Frame> stack{{root, 0}};
    state[root] = 1;
    path.push_back(db.cells[root].name);
    while (!stack.empty()) {
      Frame& f = stack.back();
      const Cell& cell = db.cells[f.cell];
      if (f.next_ref >= cell.refs.size()) {
        state[f.cell] = 2;
        path.pop_back();
        stack.pop_back();
        continue;
      }
      const StructRef& ref = cell.refs[f.next_ref++];
      const Cell* child = db.find_cell(ref.target);
      if (child == nullptr)
        throw ValidationError("gds-parse", "reference to unknown cell '" + ref.target + "'");
      const auto child_idx = static_cast<std::size_t>(child - db.cells.data());
      if (state[child_idx] == 1) {
        std::ostringstream os;
        os << "cyclic structure references: ";
        bool in_cycle = false;
        for (const std::string& name : path) {
          if (name == child->name) in_cycle = true;
          if (in_cycle) os << name << " -> ";
        }
        os << child->name;
        throw ValidationError("gds-parse", os.str());
      }
      if (state[child_idx] == 0) {
        state[child_idx] = 1;
        path.push_back(child->name);
        stack.push_back({child_idx, 0});
      }
    }
  }
}

} // namespace

void LayoutDatabase::finalize() {
  if (meters_per_db_unit <= 0.0 || user_unit_per_db_unit <= 0.0)
    throw ValidationError("gds-parse", "UNITS values must be positive");

  std::set<std::string> names;
  for (const Cell& c : cells)
    if (!names.insert(c.name).second)
      throw ValidationError("gds-parse", "duplicate cell name '" + c.name + "'");

  check_acyclic(*this);

  // Top cell: keep an explicitly set valid choice, otherwise the first cell
  // in file order that no other cell references.
  if (top_cell.empty() || find_cell(top_cell) == nullptr) {
    std::set<std::string> referenced;
    for (const Cell& c : cells)
      for (const StructRef& r : c.refs) referenced.insert(r.target);
    top_cell.clear();
    for (const Cell& c : cells) {
      if (referenced.find(c.name) == referenced.end()) {
        top_cell = c.name;
        break;
      }
    }
  }

  for (Cell& c : cells) {
    c.boundaries_by_layer.clear();
    c.paths_by_layer.clear();
    for (std::size_t i = 0; i < c.boundaries.size(); ++i)
      c.boundaries_by_layer[{c.boundaries[i].layer, c.boundaries[i].datatype}].push_back(i);
    for (std::size_t i = 0; i < c.paths.size(); ++i)
      c.paths_by_layer[{c.paths[i].layer, c.paths[i].datatype}].push_back(i);
  }
  std::vector<int> state(cells.size(), 0);
  for (std::size_t i = 0; i < cells.size(); ++i) cell_bbox(*this, i, state);
}

namespace {

using Bytes = std::span<const unsigned char>;

struct Record {
  std::size_t offset = 0;
  std::uint8_t type = 0;
  std::uint8_t dtype = 0;
  Bytes payload;
};

class RecordReader {
public:
  explicit RecordReader(Bytes bytes) : bytes_(bytes) {}

  bool next(Record& rec) {
    // Tape-style trailing NUL padding after ENDLIB is tolerated by callers.
    if (pos_ + 4 > bytes_.size()) {
      if (pos_ == bytes_.size()) return false;
      throw ParseError("gds-parse", "truncated record header", pos_);
    }
    const std::size_t len = (static_cast<std::size_t>(bytes_[pos_]) << 8) | bytes_[pos_ + 1];
    if (len < 4 || (len & 1) != 0)
      throw ParseError("gds-parse", "invalid record length " + std::to_string(len), pos_);
    if (pos_ + len > bytes_.size())
      throw ParseError("gds-parse", "truncated record payload", pos_);
    rec.offset = pos_;
    rec.type = bytes_[pos_ + 2];
    rec.dtype = bytes_[pos_ + 3];
    rec.payload = bytes_.subspan(pos_ + 4, len - 4);
    pos_ += len;
    return true;
  }

  bool only_padding_left() const {
    for (std::size_t i = pos_; i < bytes_.size(); ++i)
      if (bytes_[i] != 0) return false;
    return true;
  }

  std::size_t pos() const { return pos_; }

private:
  Bytes bytes_;
  std::size_t pos_ = 0;
};

std::int16_t read_i16(Bytes b, std::size_t i) {
  return static_cast<std::int16_t>((static_cast<std::uint16_t>(b[i]) << 8) | b[i + 1]);
}

std::int32_t read_i32(Bytes b, std::size_t i) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v = (v << 8) | b[i + static_cast<std::size_t>(k)];
  return static_cast<std::int32_t>(v);
}

std::string read_string(Bytes b) {
  std::string s(reinterpret_cast<const char*>(b.data()), b.size());
  while (!s.empty() && s.back() == '\0') s.pop_back();
  return s;
}

double read_real64(const Record& rec, std::size_t index = 0) {
  return gds_real64_decode(rec.payload.data() + 8 * index);
}

std::vector<IVec2> read_points(const Record& rec) {
  if (rec.payload.size() % 8 != 0)
    throw ParseError("gds-parse", "XY payload not a multiple of 8 bytes", rec.offset);
  std::vector<IVec2> pts(rec.payload.size() / 8);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i].x = read_i32(rec.payload, 8 * i);
    pts[i].y = read_i32(rec.payload, 8 * i + 4);
  }
  return pts;
}

void expect_payload(const Record& rec, std::size_t bytes, const char* what) {
  if (rec.payload.size() != bytes)
    throw ParseError("gds-parse", std::string("unexpected payload size for ") + what, rec.offset);
}

enum class ElementKind { None, Boundary, Path, Sref, Aref, Skipped };

struct PendingElement {
  ElementKind kind = ElementKind::None;
  std::size_t begin_offset = 0;
  std::int16_t layer = 0;
  std::int16_t datatype = 0;
  std::int32_t width = 0;
  bool has_width = false;
  std::string sname;
  bool mirror_x = false;
  int rot = 0;
  std::int32_t cols = 0, rows = 0;
  bool has_colrow = false;
  std::vector<IVec2> xy;
  bool has_xy = false;
};

int quarter_turns_from_angle(double degrees, std::size_t offset) {
  double a = std::fmod(degrees, 360.0);
  if (a < 0) a += 360.0;
  const double q = a / 90.0;
  const double qr = std::round(q);
  if (std::abs(q - qr) > 1e-9)
    throw UnsupportedFeatureError(
        "gds-parse", "ANGLE " + std::to_string(degrees) +
                         " not a multiple of 90 degrees (byte offset " + std::to_string(offset) + ")");
  return static_cast<int>(qr) & 3;
}

} // namespace

LayoutDatabase parse_gdsii(Bytes bytes) {
  LayoutDatabase db;
  db.user_unit_per_db_unit = 0.0;
  db.meters_per_db_unit = 0.0;

  RecordReader reader(bytes);
  Record rec;
  bool saw_header = false, saw_units = false, saw_endlib = false;
  bool in_cell = false;
  Cell* cell = nullptr;
  PendingElement el;

  auto commit_element = [&]() {
    switch (el.kind) {
      case ElementKind::Boundary: {
        if (!el.has_xy) throw ParseError("gds-parse", "BOUNDARY without XY", el.begin_offset);
        if (el.xy.size() < 4 || !(el.xy.front() == el.xy.back()))
          throw ParseError("gds-parse", "BOUNDARY polygon not closed (first point must equal last)",
                           el.begin_offset);
        IPolygon poly;
        poly.points.assign(el.xy.begin(), el.xy.end() - 1);
        const std::string defect = validate_simple_polygon(poly);
        if (!defect.empty())
          throw ParseError("gds-parse", "invalid BOUNDARY polygon: " + defect, el.begin_offset);
        cell->boundaries.push_back(Boundary{el.layer, el.datatype, std::move(poly)});
        break;
      }
      case ElementKind::Path: {
        if (!el.has_xy || el.xy.size() < 2)
          throw ParseError("gds-parse", "PATH needs at least 2 points", el.begin_offset);
        if (!el.has_width || el.width <= 0)
          throw ParseError("gds-parse", "PATH width must be positive", el.begin_offset);
        cell->paths.push_back(Path{el.layer, el.datatype, el.width, el.xy});
        break;
      }
      case ElementKind::Sref:
      case ElementKind::Aref: {
        if (el.sname.empty()) throw ParseError("gds-parse", "reference without SNAME", el.begin_offset);
        StructRef ref;
        ref.target = el.sname;
        ref.transform.rot = el.rot;
        ref.transform.mirror_x = el.mirror_x;
        if (el.kind == ElementKind::Sref) {
          if (!el.has_xy || el.xy.size() != 1)
            throw ParseError("gds-parse", "SREF XY must hold exactly 1 point", el.begin_offset);
          ref.transform.translate = el.xy[0];
        } else {
          if (!el.has_colrow || el.cols < 1 || el.rows < 1)
            throw ParseError("gds-parse", "AREF without valid COLROW", el.begin_offset);
          if (!el.has_xy || el.xy.size() != 3)
            throw ParseError("gds-parse", "AREF XY must hold exactly 3 points", el.begin_offset);
          ref.is_array = true;
          ref.cols = el.cols;
          ref.rows = el.rows;
          ref.transform.translate = el.xy[0];
          const std::int32_t cdx = el.xy[1].x - el.xy[0].x, cdy = el.xy[1].y - el.xy[0].y;
          const std::int32_t rdx = el.xy[2].x - el.xy[0].x, rdy = el.xy[2].y - el.xy[0].y;
          if (cdx % el.cols != 0 || cdy % el.cols != 0 || rdx % el.rows != 0 || rdy % el.rows != 0)
            throw UnsupportedFeatureError("gds-parse",
                                          "AREF lattice spacing is not an integer number of db units");
          ref.col_step = IVec2{cdx / el.cols, cdy / el.cols};
          ref.row_step = IVec2{rdx / el.rows, rdy / el.rows};
        }
        cell->refs.push_back(std::move(ref));
        break;
      }
      case ElementKind::Skipped:
      case ElementKind::None:
        break;
    }
    el = PendingElement{};
  };

  while (!saw_endlib && reader.next(rec)) {
    using namespace gdsrec;
    if (el.kind == ElementKind::Skipped && rec.type != ENDEL) {
      ++db.skipped_records;
      continue;
    }

    switch (rec.type) {
      case HEADER:
        saw_header = true;
        break;
      case BGNLIB:
        break;
      case LIBNAME:
        db.library_name = read_string(rec.payload);
        break;
      case UNITS:
        expect_payload(rec, 16, "UNITS");
        db.user_unit_per_db_unit = read_real64(rec, 0);
        db.meters_per_db_unit = read_real64(rec, 1);
        saw_units = true;
        break;
      case BGNSTR:
        if (in_cell) throw ParseError("gds-parse", "BGNSTR inside structure", rec.offset);
        db.cells.emplace_back();
        cell = &db.cells.back();
        in_cell = true;
        break;
      case STRNAME:
        if (!in_cell) throw ParseError("gds-parse", "STRNAME outside structure", rec.offset);
        cell->name = read_string(rec.payload);
        break;
      case ENDSTR:
        if (!in_cell) throw ParseError("gds-parse", "ENDSTR outside structure", rec.offset);
        if (cell->name.empty()) throw ParseError("gds-parse", "structure without STRNAME", rec.offset);
        in_cell = false;
        cell = nullptr;
        break;
      case BOUNDARY:
      case PATH:
      case SREF:
      case AREF:
        if (!in_cell) throw ParseError("gds-parse", "element outside structure", rec.offset);
        if (el.kind != ElementKind::None)
          throw ParseError("gds-parse", "element begun before previous ENDEL", rec.offset);
        el.kind = rec.type == BOUNDARY ? ElementKind::Boundary
                  : rec.type == PATH  ? ElementKind::Path
                  : rec.type == SREF  ? ElementKind::Sref
                                      : ElementKind::Aref;
        el.begin_offset = rec.offset;
        break;
      case TEXT:
      case NODE:
      case BOX:
        if (!in_cell) throw ParseError("gds-parse", "element outside structure", rec.offset);
        el.kind = ElementKind::Skipped;
        ++db.skipped_records;
        break;
      case LAYER:
        expect_payload(rec, 2, "LAYER");
        el.layer = read_i16(rec.payload, 0);
        break;
      case DATATYPE:
        expect_payload(rec, 2, "DATATYPE");
        el.datatype = read_i16(rec.payload, 0);
        break;
      case WIDTH:
        expect_payload(rec, 4, "WIDTH");
        el.width = read_i32(rec.payload, 0);
        el.has_width = true;
        break;
      case PATHTYPE: {
        expect_payload(rec, 2, "PATHTYPE");
        const int pt = read_i16(rec.payload, 0);
        if (pt < 0 || pt > 2)
          throw ParseError("gds-parse", "PATHTYPE out of range", rec.offset);
        break; // validated, otherwise ignored: outlines always use flush caps
      }
      case XY:
        el.xy = read_points(rec);
        el.has_xy = true;
        break;
      case SNAME:
        el.sname = read_string(rec.payload);
        break;
      case STRANS: {
        expect_payload(rec, 2, "STRANS");
        const auto bits = static_cast<std::uint16_t>((rec.payload[0] << 8) | rec.payload[1]);
        el.mirror_x = (bits & 0x8000) != 0;
        if ((bits & 0x0006) != 0)
          throw UnsupportedFeatureError("gds-parse", "absolute magnification/angle flags are not supported");
        break;
      }
      case MAG: {
        expect_payload(rec, 8, "MAG");
        const double mag = read_real64(rec);
        if (mag != 1.0)
          throw UnsupportedFeatureError("gds-parse",
                                        "MAG " + std::to_string(mag) + " unsupported (only 1.0)");
        break;
      }
      case ANGLE:
        expect_payload(rec, 8, "ANGLE");
        el.rot = quarter_turns_from_angle(read_real64(rec), rec.offset);
        break;
      case ENDEL:
        commit_element();
        break;
      case ENDLIB:
        if (in_cell) throw ParseError("gds-parse", "ENDLIB inside structure", rec.offset);
        saw_endlib = true;
        break;
      default:
        ++db.skipped_records;
        break;
    }
  }

  if (!saw_header) throw ParseError("gds-parse", "missing HEADER record", 0);
  if (!saw_endlib) throw ParseError("gds-parse", "missing ENDLIB record", reader.pos());
  if (!saw_units) throw ValidationError("gds-parse", "missing UNITS record");

  db.finalize();
  return db;
}

LayoutDatabase read_gdsii_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot open '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_gdsii(bytes);
}

} // namespace beoltherm
