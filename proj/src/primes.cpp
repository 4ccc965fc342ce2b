#include "crtnc/primes.hpp"

#include "crtnc/errors.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <unordered_set>

namespace crtnc {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
  return static_cast<std::uint64_t>(static_cast<__uint128_t>(a) * b % mod);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  std::uint64_t result = 1;
  base %= mod;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, mod);
    base = mulmod(base, base, mod);
    exp >>= 1;
  }
  return result;
}

// Shared lazy sieve of composites, grown on demand.
std::mutex sieve_mutex;
std::vector<bool> sieve_composite;  // index i composite?

const std::vector<bool>& sieve_upto(std::uint64_t bound) {
  if (sieve_composite.size() < bound + 1) {
    std::uint64_t n = bound + 1;
    sieve_composite.assign(n, false);
    sieve_composite[0] = true;
    if (n > 1) sieve_composite[1] = true;
    for (std::uint64_t i = 2; i * i < n; ++i) {
      if (sieve_composite[i]) continue;
      for (std::uint64_t j = i * i; j < n; j += i) sieve_composite[j] = true;
    }
  }
  return sieve_composite;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // This witness set is deterministic for all n < 2^64.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t count_primes_with_bits(unsigned m) {
  if (m < 2 || m > max_sieve_bits)
    throw std::length_error("exact prime count supported for bit lengths 2.." +
                            std::to_string(max_sieve_bits));
  static std::uint64_t cache[max_sieve_bits + 1] = {};
  static bool cached[max_sieve_bits + 1] = {};
  std::lock_guard<std::mutex> lock(sieve_mutex);
  if (!cached[m]) {
    const std::uint64_t lo = 1ULL << (m - 1);
    const std::uint64_t hi = 1ULL << m;
    const auto& composite = sieve_upto(hi - 1);
    std::uint64_t count = 0;
    for (std::uint64_t i = lo; i < hi; ++i) count += !composite[i];
    cache[m] = count;
    cached[m] = true;
  }
  return cache[m];
}

PrimePool generate_primes(std::uint64_t count, unsigned m, Rng& rng) {
  if (count < 1) throw std::invalid_argument("generate_primes: count must be >= 1");
  if (m < 2 || m > 62) throw std::invalid_argument("generate_primes: bit length must be in [2, 62]");

  PrimePool pool;
  pool.bit_length = m;
  pool.primes.reserve(count);

  const std::uint64_t lo = 1ULL << (m - 1);
  const std::uint64_t hi = 1ULL << m;

  if (m <= max_sieve_bits) {
    const std::uint64_t total = count_primes_with_bits(m);
    if (count > total) throw insufficient_primes_error(count, total, m);
    if (2 * count >= total) {
      // Dense request: enumerate every m-bit prime and take a random prefix.
      std::vector<std::uint64_t> all;
      all.reserve(total);
      {
        std::lock_guard<std::mutex> lock(sieve_mutex);
        const auto& composite = sieve_upto(hi - 1);
        for (std::uint64_t i = lo; i < hi; ++i)
          if (!composite[i]) all.push_back(i);
      }
      for (std::uint64_t i = 0; i < count; ++i) {
        std::uint64_t j = i + rng.below(all.size() - i);
        std::swap(all[i], all[j]);
        pool.primes.push_back(all[i]);
      }
      return pool;
    }
  }

  // Sparse request: rejection-sample odd m-bit candidates. Every prime in
  // range is odd here (the m=2 case, where 2 itself qualifies, always takes
  // the enumeration path above).
  std::unordered_set<std::uint64_t> seen;
  const std::uint64_t odd_count = (hi - lo) / 2;
  while (pool.primes.size() < count) {
    std::uint64_t candidate = lo + 1 + 2 * rng.below(odd_count);
    if (seen.count(candidate)) continue;
    if (is_prime(candidate)) {
      seen.insert(candidate);
      pool.primes.push_back(candidate);
    } else {
      seen.insert(candidate);
    }
  }
  return pool;
}

unsigned min_bit_length(std::uint64_t prime_count) {
  if (prime_count < 1) throw std::invalid_argument("min_bit_length: prime_count must be >= 1");
  for (unsigned m = 2; m <= max_sieve_bits; ++m) {
    if (count_primes_with_bits(m) >= prime_count) return m;
  }
  throw std::length_error("min_bit_length: prime_count exceeds the supported sieve range");
}

}  // namespace crtnc
