#pragma once

#include <stdexcept>
#include <string>

namespace sga {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

// Argument sits on a gamma pole.
class PoleError : public DomainError {
public:
  using DomainError::DomainError;
};

// Argument is closer to a gamma pole than the documented safety margin.
class NearPoleError : public DomainError {
public:
  using DomainError::DomainError;
};

class SingularConstraintError : public Error {
public:
  using Error::Error;
};

// Derivative of a higher order was requested than the jet carries.
class OrderError : public Error {
public:
  using Error::Error;
};

class QuadratureError : public Error {
public:
  using Error::Error;
};

class TruncationError : public QuadratureError {
public:
  TruncationError(const std::string &what, double suggested_radius)
      : QuadratureError(what), suggested_radius_(suggested_radius) {}
  double suggested_radius() const noexcept { return suggested_radius_; }

private:
  double suggested_radius_;
};

class MismatchError : public Error {
public:
  MismatchError(const std::string &what, double deviation)
      : Error(what), deviation_(deviation) {}
  double deviation() const noexcept { return deviation_; }

private:
  double deviation_;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace sga
