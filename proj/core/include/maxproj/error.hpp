#pragma once

#include <stdexcept>
#include <string>

namespace maxproj {

enum class Errc {
  DimensionMismatch,
  FieldMismatch,
  InvalidDimension,
  UnsupportedDimension,
  IndexOutOfRange,
  InvalidArgument,
  NotTight,
  InvalidWeights,
  ConditionsNotMet,
  NumericalFailure,
  Undetermined,
  ComplexUnsupported,
  RankDeficient,
  CoefficientOutOfRange,
  SingularTransform,
  NoStrictGap,
  SamplingExhausted,
  ZeroFrame,
  ParseError,
};

const char* errc_name(Errc c);

/// Library-wide exception type; every throw site attaches a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace maxproj
