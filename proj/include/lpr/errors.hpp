#pragma once

#include <stdexcept>
#include <string>

namespace lpr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Array extents do not match the operation's contract.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A point lies outside a map's declared domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Orbit metric or block metric is singular: the action is not free here.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

// The gauge is not transversal to the orbits (Phi singular).
class GaugeError : public Error {
 public:
  using Error::Error;
};

// Group-chart Newton failed or a point left the chart.
class ChartError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Adaptive step size collapsed below the floor.
class StiffnessError : public Error {
 public:
  using Error::Error;
};

}  // namespace lpr
