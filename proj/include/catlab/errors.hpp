#ifndef CATLAB_ERRORS_HPP
#define CATLAB_ERRORS_HPP

#include <stdexcept>

namespace catlab {

// Invalid inputs throw std::invalid_argument. The types below separate
// failures a caller may want to recover from differently.

/// Enumeration budget exceeded.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation undefined at a degenerate point (e.g. shifting a point mass).
class singularity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strategy has no closed form for the requested quantity.
class unsupported_strategy : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Batch statistics are degenerate (e.g. all-zero weights).
class degenerate_batch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace catlab

#endif
