#pragma once

#include <stdexcept>
#include <string>

namespace heckepair {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration, unknown family, wrong element family, bad word.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A query needs cosets beyond the radius materialized in a BallTable.
class OutOfRange : public Error {
 public:
  OutOfRange(const std::string& what, int radius_needed)
      : Error(what), radius_needed_(radius_needed) {}

  // -1 when the needed radius cannot be bounded.
  int radius_needed() const noexcept { return radius_needed_; }

 private:
  int radius_needed_;
};

// An enumeration hit its budget. Carries the last radius that was completed.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, int completed_radius)
      : Error(what), completed_radius_(completed_radius) {}

  int completed_radius() const noexcept { return completed_radius_; }

 private:
  int completed_radius_;
};

}  // namespace heckepair
