#include "crtnc/wire.hpp"

#include "crtnc/errors.hpp"
#include "crtnc/primes.hpp"

namespace crtnc {

namespace {

void put_uint(std::vector<std::uint8_t>& out, std::uint64_t value, std::size_t width) {
  if (width < 8 && value >> (8 * width) != 0)
    throw wire_format_error("header field exceeds its wire width");
  for (std::size_t i = 0; i < width; ++i)
    out.push_back(static_cast<std::uint8_t>(value >> (8 * (width - 1 - i))));
}

void put_int(std::vector<std::uint8_t>& out, const Int& value, std::size_t width) {
  if (value >> (8 * width) != 0) throw wire_format_error("payload field exceeds its wire width");
  for (std::size_t i = 0; i < width; ++i)
    out.push_back(static_cast<std::uint8_t>((value >> (8 * (width - 1 - i))) & 0xff));
}

std::uint64_t get_uint(std::span<const std::uint8_t> bytes, std::size_t offset,
                       std::size_t width) {
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < width; ++i) value = (value << 8) | bytes[offset + i];
  return value;
}

Int get_int(std::span<const std::uint8_t> bytes, std::size_t offset, std::size_t width) {
  Int value = 0;
  for (std::size_t i = 0; i < width; ++i) value = (value << 8) | bytes[offset + i];
  return value;
}

}  // namespace

std::vector<std::uint8_t> encode_wire(const Packet& pkt, unsigned m, std::size_t u) {
  if (m < 2 || m > 62) throw wire_format_error("unsupported prime bit length");
  if (pkt.residues.size() != u) throw wire_format_error("payload slot count differs from u");
  if (pkt.p == pkt.q || !is_prime(pkt.p) || !is_prime(pkt.q))
    throw wire_format_error("header must hold two distinct primes");
  const std::size_t hw = head_field_bytes(m);
  const std::size_t pw = payload_field_bytes(m);
  const Int product = pkt.head_product();
  std::vector<std::uint8_t> out;
  out.reserve(wire_size(m, u));
  put_uint(out, pkt.p, hw);
  put_uint(out, pkt.q, hw);
  for (const Int& r : pkt.residues) {
    if (r < 0 || r >= product) throw wire_format_error("residue out of range for header pair");
    put_int(out, r, pw);
  }
  return out;
}

Packet decode_wire(std::span<const std::uint8_t> bytes, unsigned m, std::size_t u) {
  if (m < 2 || m > 62) throw wire_format_error("unsupported prime bit length");
  if (bytes.size() != wire_size(m, u))
    throw wire_format_error("wire packet has wrong length: got " + std::to_string(bytes.size()) +
                            ", expected " + std::to_string(wire_size(m, u)));
  const std::size_t hw = head_field_bytes(m);
  const std::size_t pw = payload_field_bytes(m);
  Packet pkt;
  pkt.p = get_uint(bytes, 0, hw);
  pkt.q = get_uint(bytes, hw, hw);
  if (pkt.p == pkt.q) throw wire_format_error("header primes are equal");
  if (!is_prime(pkt.p) || !is_prime(pkt.q)) throw wire_format_error("header field is not prime");
  const Int product = pkt.head_product();
  pkt.residues.reserve(u);
  for (std::size_t i = 0; i < u; ++i) {
    Int r = get_int(bytes, 2 * hw + i * pw, pw);
    if (r >= product) throw wire_format_error("residue not reduced modulo header product");
    pkt.residues.push_back(std::move(r));
  }
  return pkt;
}

}  // namespace crtnc
