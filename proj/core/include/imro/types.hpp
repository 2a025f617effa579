#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace imro {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Thrown when a vector or matrix argument has the wrong length.
class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(const std::string& what_arg, Index expected, Index actual)
      : std::invalid_argument(what_arg + ": expected length " +
                              std::to_string(expected) + ", got " +
                              std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  Index expected() const { return expected_; }
  Index actual() const { return actual_; }

 private:
  Index expected_;
  Index actual_;
};

// Thrown when a relation the algorithms guarantee analytically fails beyond
// roundoff tolerance. Indicates a bug or a numerically hostile input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace imro
