#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qpecost {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kAngstromToBohr = 1.8897259886;

/// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind {
  Parse,        // malformed input text (XYZ, basis JSON, FCIDUMP, flags)
  Input,        // well-formed but semantically invalid input
  Convergence,  // SCF / Davidson did not converge
  Capacity,     // problem exceeds a configured size cap
  Io,           // file system failures
  Numerical,    // invalid numerical state (singular overlap, non-PSD ERI, ...)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

const char* to_string(ErrorKind kind);

}  // namespace qpecost
