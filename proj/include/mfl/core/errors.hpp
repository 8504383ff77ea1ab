#pragma once

#include <stdexcept>
#include <string>

namespace mfl {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Precondition violation (bad argument, malformed input data).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A coordinate or field became non-finite during time stepping.
class DivergenceError : public Error {
public:
  DivergenceError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

private:
  double time_;
};

/// The Lagrangian flow map lost (or is about to lose) invertibility.
class CausticError : public Error {
public:
  CausticError(const std::string& what, double time, double estimated_time)
      : Error(what), time_(time), estimated_time_(estimated_time) {}
  double time() const { return time_; }
  double estimated_time() const { return estimated_time_; }

private:
  double time_;
  double estimated_time_;
};

/// Grid too coarse for the requested physics.
class ResolutionError : public Error {
public:
  ResolutionError(const std::string& what, double required_spacing)
      : Error(what), required_spacing_(required_spacing) {}
  double required_spacing() const { return required_spacing_; }

private:
  double required_spacing_;
};

/// Momentum mass reaches the edge of the Wigner velocity grid.
class AliasingError : public Error {
public:
  AliasingError(const std::string& what, double edge_mass) : Error(what), edge_mass_(edge_mass) {}
  double edge_mass() const { return edge_mass_; }

private:
  double edge_mass_;
};

/// Particles or markers left the computational domain.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Cooperative cancellation (SIGINT in the CLI).
class Cancelled : public Error {
public:
  Cancelled() : Error("run cancelled") {}
};

}  // namespace mfl
