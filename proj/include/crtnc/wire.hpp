#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "crtnc/packet.hpp"

namespace crtnc {

// Fixed-width big-endian packet layout. Field widths depend only on m, so
// every packet of a session occupies the same number of bytes:
//   header: two primes, ceil(m/8) bytes each
//   payload: u residues, ceil(2m/8) bytes each

constexpr std::size_t head_field_bytes(unsigned m) { return (m + 7) / 8; }
constexpr std::size_t payload_field_bytes(unsigned m) { return (2 * m + 7) / 8; }

constexpr std::size_t wire_size(unsigned m, std::size_t u) {
  return 2 * head_field_bytes(m) + u * payload_field_bytes(m);
}

// Serializes pkt. Throws wire_format_error if a field does not fit its
// width, the header is not a pair of distinct primes, a residue is not
// below p*q, or the slot count differs from u.
std::vector<std::uint8_t> encode_wire(const Packet& pkt, unsigned m, std::size_t u);

// Parses bytes produced by encode_wire, validating length and all packet
// invariants. Throws wire_format_error on any violation.
Packet decode_wire(std::span<const std::uint8_t> bytes, unsigned m, std::size_t u);

}  // namespace crtnc
