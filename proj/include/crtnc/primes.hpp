#pragma once

#include "crtnc/rng.hpp"

#include <cstdint>
#include <vector>

namespace crtnc {

// Random draw of `count` distinct primes, each exactly bit_length bits
// (2^(m-1) <= p < 2^m). Order is the selection order, not sorted.
struct PrimePool {
  std::vector<std::uint64_t> primes;
  unsigned bit_length = 0;
};

// Deterministic Miller-Rabin, valid for the full uint64 range.
bool is_prime(std::uint64_t n);

// Exact count of m-bit primes, by sieve. m is capped (see max_sieve_bits);
// larger m throws std::length_error.
std::uint64_t count_primes_with_bits(unsigned m);

inline constexpr unsigned max_sieve_bits = 26;

// Rejection sampling against is_prime, with a fallback to full enumeration
// when count approaches the number of available primes. Deterministic per
// seed. Throws insufficient_primes_error when fewer than count m-bit primes
// exist, std::invalid_argument for count < 1 or m outside [2, 62].
PrimePool generate_primes(std::uint64_t count, unsigned m, Rng& rng);

// Smallest m whose exact m-bit prime count is >= prime_count.
unsigned min_bit_length(std::uint64_t prime_count);

}  // namespace crtnc
