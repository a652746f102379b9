#pragma once

#include <stdexcept>
#include <string>

namespace unishear {

// Base of every library error; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class NotAdmissible : public ConfigError {
 public:
  explicit NotAdmissible(int j)
      : ConfigError("scaling sequence not admissible at j=" + std::to_string(j)), j_(j) {}
  int index() const { return j_; }

 private:
  int j_;
};

class WrongAnchor : public ConfigError {
 public:
  WrongAnchor() : ConfigError("scaling sequence must start with alpha_0 = 0") {}
};

class GridTooSmall : public ConfigError {
 public:
  GridTooSmall(int J, int N)
      : ConfigError("grid N=" + std::to_string(N) + " too small for J=" + std::to_string(J)) {}
};

class ScaleTooFine : public ConfigError {
 public:
  ScaleTooFine(int j, int N)
      : ConfigError("corona j=" + std::to_string(j) + " does not fit grid N=" + std::to_string(N)) {}
};

class TilingFailure : public Error {
 public:
  explicit TilingFailure(double residual)
      : Error("tiling residual " + std::to_string(residual) + " exceeds 1e-8"), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroReference : public Error {
 public:
  ZeroReference() : Error("reference image has zero analysis norm") {}
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

}  // namespace unishear
