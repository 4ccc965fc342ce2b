#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace crtnc {

// Session or topology parameters that cannot be run as given.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Fewer m-bit primes exist than were requested.
class insufficient_primes_error : public std::runtime_error {
 public:
  insufficient_primes_error(std::uint64_t requested, std::uint64_t available,
                            unsigned bit_length)
      : std::runtime_error("requested " + std::to_string(requested) + " primes of " +
                           std::to_string(bit_length) + " bits, only " +
                           std::to_string(available) + " exist"),
        requested(requested),
        available(available),
        bit_length(bit_length) {}

  std::uint64_t requested;
  std::uint64_t available;
  unsigned bit_length;
};

// Incompatible congruences met inside a node: packets from different
// sessions or corrupted in flight. Aborts the session with a diagnostic.
class corrupt_session_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Byte string rejected by the wire codec.
class wire_format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace crtnc
