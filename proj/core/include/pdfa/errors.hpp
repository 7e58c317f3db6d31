#pragma once

#include <stdexcept>
#include <string>

namespace pdfa {

/// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed program text. Carries a 1-based source position.
class ParseError : public Error {
public:
  ParseError(int line, int column, const std::string& msg)
      : Error("parse error at " + std::to_string(line) + ":" +
              std::to_string(column) + ": " + msg),
        line(line),
        column(column) {}

  int line;
  int column;
};

/// Invalid input that is not a syntax problem: bad distributions,
/// out-of-range values, unknown variables, non-partitions.
class InputError : public Error {
public:
  using Error::Error;
};

/// A matrix or state space would exceed the configured entry cap.
class SizeError : public Error {
public:
  using Error::Error;
};

/// An equation solver diverged, hit its iteration budget, or met a
/// singular system. The message carries the diagnostics.
class SolverError : public Error {
public:
  using Error::Error;
};

}  // namespace pdfa
