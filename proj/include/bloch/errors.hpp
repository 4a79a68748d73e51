#pragma once

#include <stdexcept>
#include <string>

namespace bloch {

/// Base class for every failure raised by the library. `kind()` is the stable
/// tag written into machine-readable reports.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

class InvalidArgument : public Error {
public:
  explicit InvalidArgument(const std::string& what) : Error("InvalidArgument", what) {}
};

/// Evaluation of a truncated series outside its trusted radius.
class OutOfValidity : public Error {
public:
  explicit OutOfValidity(const std::string& what) : Error("OutOfValidity", what) {}
};

class DimensionMismatch : public Error {
public:
  explicit DimensionMismatch(const std::string& what) : Error("DimensionMismatch", what) {}
};

class Infeasible : public Error {
public:
  explicit Infeasible(const std::string& what) : Error("Infeasible", what) {}
};

class Unbounded : public Error {
public:
  explicit Unbounded(const std::string& what) : Error("Unbounded", what) {}
};

class CertificationFailure : public Error {
public:
  explicit CertificationFailure(const std::string& what)
      : Error("CertificationFailure", what) {}
};

class RankDeficiency : public Error {
public:
  explicit RankDeficiency(const std::string& what) : Error("RankDeficiency", what) {}
};

class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error("ParseError", what) {}
};

}  // namespace bloch
