#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace clonelab {

/// Element of a finite domain E_k = {0, ..., k-1}.
using Elem = std::uint32_t;
using Tuple = std::vector<Elem>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An enumeration or search would exceed its configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Returns base^exp, or throws CapExceeded if the result exceeds `cap`.
std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t cap);

/// Writes `index` in base `k` into `digits` (most significant digit first).
void decode_index(std::uint64_t index, std::size_t k, std::vector<Elem>& digits);

/// Inverse of decode_index.
std::uint64_t encode_index(const Elem* digits, std::size_t length, std::size_t k);

std::string tuple_to_string(const Tuple& t);

}  // namespace clonelab
