#pragma once

#include <stdexcept>
#include <string>

namespace gaplab {

// Error categories; each maps to one CLI diagnostic prefix and exit code.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct argument_error : error {
  using error::error;
};
struct range_error : error {
  using error::error;
};
struct resource_error : error {
  using error::error;
};
struct infeasible_error : error {
  using error::error;
};
struct parse_error : error {
  using error::error;
};
struct io_error : error {
  using error::error;
};

}  // namespace gaplab
