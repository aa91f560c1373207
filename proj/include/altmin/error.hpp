#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace altmin {

/// Two vectors (or a vector and a set) of different ambient dimension met.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A NaN or infinity showed up in an input or an intermediate quantity.
class NonFiniteError : public std::domain_error {
 public:
  explicit NonFiniteError(const std::string& what,
                          std::optional<std::size_t> iteration = std::nullopt)
      : std::domain_error(iteration ? what + " (iteration " +
                                          std::to_string(*iteration) + ")"
                                    : what),
        iteration_(iteration) {}

  std::optional<std::size_t> iteration() const noexcept { return iteration_; }

 private:
  std::optional<std::size_t> iteration_;
};

/// The geometry does not offer the requested operation (e.g. projection onto
/// a V-polytope). Callers should fall back to LMO-only algorithms.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid construction parameters or a precondition that is not met.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace altmin
