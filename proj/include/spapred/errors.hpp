#pragma once

#include <stdexcept>

namespace spapred {

/// Malformed or incompatible input data (corrupt JSONL, schema mismatch).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed (NaN loss, unconverged solver where
/// convergence is required).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spapred
