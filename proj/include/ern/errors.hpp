#pragma once

#include <stdexcept>

namespace ern {

// Base class for every error the library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input data or graph state violates a documented invariant.
struct ValidationError : Error {
  using Error::Error;
};

// Lookup of a vertex, link, or record that does not exist.
struct NotFoundError : Error {
  using Error::Error;
};

// Caller broke an API contract, e.g. out-of-order delivery to a timed session.
struct ContractError : Error {
  using Error::Error;
};

}  // namespace ern
