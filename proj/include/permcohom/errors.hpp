#pragma once

#include <stdexcept>
#include <string>

namespace pcoh {

/// A configured resource cap (element count, rank, time budget) was hit.
/// Distinct from mathematical failure; the CLI maps it to exit code 2.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed: a computed object violates an
/// invariant it must satisfy by construction.
class VerificationFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pcoh
