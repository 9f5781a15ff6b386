#pragma once
#include <stdexcept>
#include <string>

namespace willflow {

//! Base class of every error raised by the toolkit.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateImmersion : Error {
  using Error::Error;
};
struct SingularPoint : Error {
  using Error::Error;
};
struct VerticalTangent : Error {
  using Error::Error;
};
struct BoundaryMismatch : Error {
  using Error::Error;
};
struct StepFailure : Error {
  using Error::Error;
};

//! Invalid run specification. `field` names the offending JSON path.
struct ConfigError : Error {
  std::string field;
  std::string reason;
  ConfigError(std::string f, const std::string &what)
      : Error("config field '" + f + "': " + what), field(std::move(f)), reason(what) {}
};

} // namespace willflow
