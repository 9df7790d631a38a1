#pragma once

#include <stdexcept>
#include <string>

namespace hdperm {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class AllZeroNuisance : public Error {
public:
  AllZeroNuisance() : Error("nuisance matrix has no singular value above tolerance") {}
};

class SingularAtZero : public Error {
public:
  SingularAtZero()
      : Error("lambda = 0 requires a full-rank nuisance matrix with fewer columns than rows") {}
};

class DegenerateFolds : public Error {
public:
  explicit DegenerateFolds(const std::string& msg) : Error(msg) {}
};

class ZeroVariance : public Error {
public:
  explicit ZeroVariance(const std::string& msg) : Error(msg) {}
};

class NotLowDimensional : public Error {
public:
  NotLowDimensional()
      : Error("this method requires fewer nuisance columns than observations") {}
};

class LengthMismatch : public Error {
public:
  explicit LengthMismatch(const std::string& msg) : Error(msg) {}
};

class DimensionMismatch : public Error {
public:
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

class ParseError : public Error {
public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

class MissingColumn : public Error {
public:
  explicit MissingColumn(const std::string& msg) : Error(msg) {}
};

class NonFinite : public Error {
public:
  explicit NonFinite(const std::string& msg) : Error(msg) {}
};

class UnknownPreset : public Error {
public:
  explicit UnknownPreset(const std::string& msg) : Error(msg) {}
};

} // namespace hdperm
