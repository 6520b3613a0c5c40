#pragma once

#include <stdexcept>
#include <string>

namespace darcyheat {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MeshError : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct QuadratureError : Error {
  using Error::Error;
};

struct AssemblyError : Error {
  using Error::Error;
};

struct SolverError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace darcyheat
