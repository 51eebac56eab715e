#include "qpecost/common.hpp"

namespace qpecost {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Input: return "input";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Io: return "io";
    case ErrorKind::Numerical: return "numerical";
  }
  return "unknown";
}

}  // namespace qpecost
