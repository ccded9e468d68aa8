// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

// GDSII stream record and data type codes (SEMI subset handled here).
namespace beoltherm::gdsrec {

enum : std::uint8_t {
  HEADER = 0x00,
  BGNLIB = 0x01,
  LIBNAME = 0x02,
  UNITS = 0x03,
  ENDLIB = 0x04,
  BGNSTR = 0x05,
  STRNAME = 0x06,
  ENDSTR = 0x07,
  BOUNDARY = 0x08,
  PATH = 0x09,
  SREF = 0x0A,
  AREF = 0x0B,
  TEXT = 0x0C,
  LAYER = 0x0D,
  DATATYPE = 0x0E,
  WIDTH = 0x0F,
  XY = 0x10,
  ENDEL = 0x11,
  SNAME = 0x12,
  COLROW = 0x13,
  NODE = 0x15,
  TEXTTYPE = 0x16,
  PRESENTATION = 0x17,
  STRING = 0x19,
  STRANS = 0x1A,
  MAG = 0x1B,
  ANGLE = 0x1C,
  PATHTYPE = 0x21,
  NODETYPE = 0x2A,
  BOX = 0x2D,
  BOXTYPE = 0x2E,
};

enum : std::uint8_t {
  DT_NONE = 0,
  DT_BITARRAY = 1,
  DT_INT16 = 2,
  DT_INT32 = 3,
  DT_REAL32 = 4,
  DT_REAL64 = 5,
  DT_STRING = 6,
};

} // namespace beoltherm::gdsrec
