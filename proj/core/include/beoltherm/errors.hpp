// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace beoltherm {

/// Base error for all failures raised by this library. Every error carries a
/// stage tag ("gds-parse", "stack", "rve", "homogenize", "macro", "pipeline",
/// ...) so callers can report which part of the workflow failed.
class Error : public std::runtime_error {
public:
  Error(std::string stage, const std::string& message)
      : std::runtime_error("[" + stage + "] " + message), stage_(std::move(stage)) {}

  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

/// Malformed input stream; carries the byte offset of the offending record.
class ParseError : public Error {
public:
  ParseError(std::string stage, const std::string& message, std::size_t byte_offset)
      : Error(std::move(stage), message + " (byte offset " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const { return byte_offset_; }

private:
  std::size_t byte_offset_;
};

/// Input uses a feature outside the supported subset (non-orthogonal
/// transforms, magnification, ...).
class UnsupportedFeatureError : public Error {
public:
  using Error::Error;
};

/// Inputs violate a documented precondition or invariant.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// An iterative solve failed to converge.
class SolverError : public Error {
public:
  using Error::Error;
};

} // namespace beoltherm
