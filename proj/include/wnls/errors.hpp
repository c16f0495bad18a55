#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wnls {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class NonZeroMean : public Error {
 public:
  using Error::Error;
};

/// Input outside the range a physical field may take (e.g. |Y| > 300 before exponentiation).
class NonPhysical : public Error {
 public:
  using Error::Error;
};

class UnsupportedNorm : public Error {
 public:
  using Error::Error;
};

class BlowUp : public Error {
 public:
  BlowUp(std::int64_t step, const std::string& what)
      : Error(what), step_(step) {}
  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

class SmallDataViolation : public Error {
 public:
  SmallDataViolation(double lhs, const std::string& what) : Error(what), lhs_(lhs) {}
  double lhs() const noexcept { return lhs_; }

 private:
  double lhs_;
};

class UnresolvedMollifier : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class EmptySeries : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

// Snapshot file errors.
class BadMagic : public Error {
 public:
  using Error::Error;
};

class TruncatedPayload : public Error {
 public:
  using Error::Error;
};

class HeaderMismatch : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wnls
