#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace phyllo {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TailUndefined : Error {
  using Error::Error;
};

struct IdentityViolation : Error {
  long long index;
  IdentityViolation(const std::string& msg, long long n) : Error(msg), index(n) {}
};

struct ReductionOverflow : Error {
  using Error::Error;
};

struct DegenerateMap : Error {
  using Error::Error;
};

struct InsufficientPoints : Error {
  using Error::Error;
};

struct IndexUnavailable : Error {
  using Error::Error;
};

struct MatchingInfeasible : Error {
  using Error::Error;
};

struct DegenerateInput : Error {
  using Error::Error;
};

struct EmptyAnnulus : Error {
  using Error::Error;
};

struct CountMismatch : Error {
  using Error::Error;
};

struct MeasurementFailure : Error {
  using Error::Error;
};

struct LoopBroken : Error {
  using Error::Error;
};

struct RoundingFailure : Error {
  using Error::Error;
};

struct Degree4Vertex : Error {
  using Error::Error;
};

struct DegenerateData : Error {
  using Error::Error;
};

struct LiftAmbiguous : Error {
  std::vector<double> breakpoints;
  explicit LiftAmbiguous(const std::string& msg, std::vector<double> bps = {})
      : Error(msg), breakpoints(std::move(bps)) {}
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace phyllo
