// SPDX-License-Identifier: Apache-2.0
#include <fstream>

#include "beoltherm/errors.hpp"
#include "beoltherm/gds.hpp"
#include "gds_records.hpp"

namespace beoltherm {

namespace {

class RecordWriter {
public:
  void record(std::uint8_t type, std::uint8_t dtype, const std::vector<unsigned char>& payload = {}) {
    const std::size_t len = payload.size() + 4;
    if (len > 0xFFFF) throw ValidationError("gds-write", "record payload too large");
    out_.push_back(static_cast<unsigned char>(len >> 8));
    out_.push_back(static_cast<unsigned char>(len & 0xFF));
    out_.push_back(type);
    out_.push_back(dtype);
    out_.insert(out_.end(), payload.begin(), payload.end());
  }

  void i16(std::uint8_t type, std::initializer_list<std::int16_t> vals) {
    std::vector<unsigned char> p;
    for (std::int16_t v : vals) {
      p.push_back(static_cast<unsigned char>((static_cast<std::uint16_t>(v) >> 8) & 0xFF));
      p.push_back(static_cast<unsigned char>(static_cast<std::uint16_t>(v) & 0xFF));
    }
    record(type, gdsrec::DT_INT16, p);
  }

  void i32(std::uint8_t type, std::initializer_list<std::int32_t> vals) {
    std::vector<unsigned char> p;
    for (std::int32_t v : vals) append_i32(p, v);
    record(type, gdsrec::DT_INT32, p);
  }

  void points(std::uint8_t type, const std::vector<IVec2>& pts) {
    std::vector<unsigned char> p;
    p.reserve(pts.size() * 8);
    for (const IVec2& q : pts) {
      append_i32(p, q.x);
      append_i32(p, q.y);
    }
    record(type, gdsrec::DT_INT32, p);
  }

  void string(std::uint8_t type, const std::string& s) {
    std::vector<unsigned char> p(s.begin(), s.end());
    if (p.size() & 1) p.push_back('\0');
    record(type, gdsrec::DT_STRING, p);
  }

  void real64(std::uint8_t type, std::initializer_list<double> vals) {
    std::vector<unsigned char> p;
    for (double v : vals) {
      unsigned char b[8];
      gds_real64_encode(v, b);
      p.insert(p.end(), b, b + 8);
    }
    record(type, gdsrec::DT_REAL64, p);
  }

  std::vector<unsigned char> take() { return std::move(out_); }

private:
  static void append_i32(std::vector<unsigned char>& p, std::int32_t v) {
    const auto u = static_cast<std::uint32_t>(v);
    p.push_back(static_cast<unsigned char>((u >> 24) & 0xFF));
    p.push_back(static_cast<unsigned char>((u >> 16) & 0xFF));
    p.push_back(static_cast<unsigned char>((u >> 8) & 0xFF));
    p.push_back(static_cast<unsigned char>(u & 0xFF));
  }

  std::vector<unsigned char> out_;
};

void write_transform(RecordWriter& w, const OrthoTransform& t) {
  if (t.mirror_x) w.i16(gdsrec::STRANS, {static_cast<std::int16_t>(0x8000)});
  if (t.rot != 0) w.real64(gdsrec::ANGLE, {90.0 * t.rot});
}

} // namespace

std::vector<unsigned char> write_gdsii(const LayoutDatabase& db) {
  using namespace gdsrec;
  RecordWriter w;
  const std::int16_t ts[12] = {};

  w.i16(HEADER, {600});
  w.i16(BGNLIB, {ts[0], ts[1], ts[2], ts[3], ts[4], ts[5], ts[6], ts[7], ts[8], ts[9], ts[10], ts[11]});
  w.string(LIBNAME, db.library_name);
  w.real64(UNITS, {db.user_unit_per_db_unit, db.meters_per_db_unit});

  for (const Cell& cell : db.cells) {
    if (cell.name.empty()) throw ValidationError("gds-write", "cell with empty name");
    if (cell.name.size() > 32)
      throw ValidationError("gds-write", "cell name '" + cell.name + "' longer than 32 characters");
    w.i16(BGNSTR, {ts[0], ts[1], ts[2], ts[3], ts[4], ts[5], ts[6], ts[7], ts[8], ts[9], ts[10], ts[11]});
    w.string(STRNAME, cell.name);

    for (const Boundary& b : cell.boundaries) {
      w.record(BOUNDARY, DT_NONE);
      w.i16(LAYER, {b.layer});
      w.i16(DATATYPE, {b.datatype});
      std::vector<IVec2> pts = b.polygon.points;
      pts.push_back(pts.front()); // GDSII closure rule
      w.points(XY, pts);
      w.record(ENDEL, DT_NONE);
    }
    for (const Path& p : cell.paths) {
      w.record(PATH, DT_NONE);
      w.i16(LAYER, {p.layer});
      w.i16(DATATYPE, {p.datatype});
      w.i32(WIDTH, {p.width});
      w.points(XY, p.points);
      w.record(ENDEL, DT_NONE);
    }
    for (const StructRef& r : cell.refs) {
      if (!r.is_array) {
        w.record(SREF, DT_NONE);
        w.string(SNAME, r.target);
        write_transform(w, r.transform);
        w.points(XY, {r.transform.translate});
      } else {
        w.record(AREF, DT_NONE);
        w.string(SNAME, r.target);
        write_transform(w, r.transform);
        w.i16(COLROW, {static_cast<std::int16_t>(r.cols), static_cast<std::int16_t>(r.rows)});
        const IVec2 o = r.transform.translate;
        const IVec2 pc{o.x + r.cols * r.col_step.x, o.y + r.cols * r.col_step.y};
        const IVec2 pr{o.x + r.rows * r.row_step.x, o.y + r.rows * r.row_step.y};
        w.points(XY, {o, pc, pr});
      }
      w.record(ENDEL, DT_NONE);
    }
    w.record(ENDSTR, DT_NONE);
  }
  w.record(ENDLIB, DT_NONE);
  return w.take();
}

void write_gdsii_file(const LayoutDatabase& db, const std::string& path) {
  const std::vector<unsigned char> bytes = write_gdsii(db);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io", "cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("io", "failed writing '" + path + "'");
}

} // namespace beoltherm
