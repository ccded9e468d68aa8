// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "beoltherm/geometry.hpp"

namespace beoltherm {

/// Orthogonal placement transform: mirror about the x axis first (y -> -y),
/// then rotate counterclockwise by `rot` quarter turns, then translate.
struct OrthoTransform {
  int rot = 0; // quarter turns, 0..3
  bool mirror_x = false;
  IVec2 translate{0, 0};

  IVec2 apply(IVec2 p) const;
  /// Composition: (*this) after `inner`.
  OrthoTransform then_outer(const OrthoTransform& outer) const;
  friend bool operator==(const OrthoTransform&, const OrthoTransform&) = default;
};

/// Reference to another cell, optionally arrayed on a lattice.
struct StructRef {
  std::string target;
  OrthoTransform transform;
  bool is_array = false;
  std::int32_t cols = 0, rows = 0;
  IVec2 col_step{0, 0}; // per-instance lattice step in db units, pre-transform frame
  IVec2 row_step{0, 0};
  friend bool operator==(const StructRef&, const StructRef&) = default;
};

struct Boundary {
  std::int16_t layer = 0;
  std::int16_t datatype = 0;
  IPolygon polygon; // stored without the duplicated closing point
  friend bool operator==(const Boundary&, const Boundary&) = default;
};

struct Path {
  std::int16_t layer = 0;
  std::int16_t datatype = 0;
  std::int32_t width = 0; // db units, > 0
  std::vector<IVec2> points;
  friend bool operator==(const Path&, const Path&) = default;
};

struct Cell {
  std::string name;
  std::vector<Boundary> boundaries;
  std::vector<Path> paths;
  std::vector<StructRef> refs;
  friend bool operator==(const Cell& a, const Cell& b) {
    return a.name == b.name && a.boundaries == b.boundaries && a.paths == b.paths && a.refs == b.refs;
  }

  // Derived lookup tables, rebuilt by LayoutDatabase::finalize(); not part of
  // structural equality.
  std::map<std::pair<int, int>, std::vector<std::size_t>> boundaries_by_layer;
  std::map<std::pair<int, int>, std::vector<std::size_t>> paths_by_layer;
  bool has_bbox = false;
  IVec2 bbox_lo{0, 0}, bbox_hi{0, 0}; // valid when has_bbox
};

/// Parsed layout. Immutable after parse; queries are safe to run from many
/// threads concurrently.
struct LayoutDatabase {
  std::string library_name = "LIB";
  double user_unit_per_db_unit = 1e-3;
  double meters_per_db_unit = 1e-9;
  std::vector<Cell> cells;
  std::string top_cell;
  int skipped_records = 0; // unknown record types consumed with a warning count

  double um_per_db_unit() const { return meters_per_db_unit * 1e6; }

  const Cell* find_cell(const std::string& name) const;
  /// Validates invariants, resolves the top cell, checks the reference graph
  /// is acyclic, and rebuilds per-cell lookup tables. Called by parse_gdsii;
  /// call it manually after constructing a database in code.
  void finalize();

  friend bool operator==(const LayoutDatabase& a, const LayoutDatabase& b) {
    return a.library_name == b.library_name && a.user_unit_per_db_unit == b.user_unit_per_db_unit &&
           a.meters_per_db_unit == b.meters_per_db_unit && a.cells == b.cells && a.top_cell == b.top_cell;
  }
};

/// Parses a binary GDSII stream (big-endian records: 2-byte length, 1-byte
/// record type, 1-byte data type). Unknown record types are skipped and
/// counted. Throws ParseError / UnsupportedFeatureError / ValidationError.
LayoutDatabase parse_gdsii(std::span<const unsigned char> bytes);
LayoutDatabase read_gdsii_file(const std::string& path);

/// Serializes a database to a standard-conformant stream that parse_gdsii
/// inverts field-for-field.
std::vector<unsigned char> write_gdsii(const LayoutDatabase& db);
void write_gdsii_file(const LayoutDatabase& db, const std::string& path);

/// All boundary polygons and path outline rectangles on (layer, datatype),
/// flattened through SREF/AREF transforms starting at the top cell, converted
/// to micrometres, and clipped to `window`. Concave inputs may come back as
/// several pieces. Layers with no geometry yield an empty list.
std::vector<Polygon> query_window(const LayoutDatabase& db, int layer, int datatype, const Rect& window_um);

/// Bounding box of the flattened top cell in micrometres. Returns false when
/// the layout has no geometry.
bool layout_extent(const LayoutDatabase& db, Rect& out_um);

/// GDSII 8-byte excess-64 floating point encode/decode (exact for the values
/// a double can carry).
double gds_real64_decode(const unsigned char bytes[8]);
void gds_real64_encode(double value, unsigned char bytes[8]);

} // namespace beoltherm
