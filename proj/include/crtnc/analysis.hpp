#pragma once

#include <cstddef>
#include <cstdint>

#include "crtnc/rng.hpp"

namespace crtnc {

// Expected fraction of fully covered sources after l independent uniform
// pair draws over 2k primes: (1 - (1 - 1/k)^l)^2.
double expected_recovery_exact_formula(std::uint64_t k, std::uint64_t l);

// The r-only approximation (1 - 0.367^r)^2, r = l/k.
double approx_recovery(double r);

struct CoverageEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

// Monte Carlo: each trial draws l uniform 2-subsets of a 2k-element set and
// counts how many of the k consecutive pairs {2i, 2i+1} are fully covered.
CoverageEstimate coverage_oracle(std::uint64_t k, std::uint64_t l, std::uint64_t trials, Rng& rng);

// Exact expectation of the same quantity, by inclusion-exclusion over the
// draws, evaluated in rational arithmetic:
//   E = 1 - 2*q1^l + q2^l
//   q1 = P(one fixed element missed by a draw)  = (k-1)/k
//   q2 = P(two fixed elements missed by a draw) = (2k-2)(2k-3)/((2k)(2k-1))
double coverage_exact_small(std::uint64_t k, std::uint64_t l);

struct OverheadComparison {
  std::uint64_t k = 0;           // sources / coding-vector length
  std::uint64_t receivers = 0;   // |T|
  std::uint64_t field_size = 0;  // q
  unsigned m = 0;                // prime bit length
  std::size_t frame_bytes = 0;

  std::size_t vector_head_bytes = 0;  // ceil(k * ceil(log2 q) / 8)
  std::size_t crt_head_bytes = 0;     // 2 * ceil(m / 8)
  double vector_fraction = 0.0;       // of the frame
  double crt_fraction = 0.0;
  bool vector_feasible = false;  // head fits the frame
  bool crt_feasible = false;
};

// Header cost of a classic coding-vector scheme versus the two-prime head,
// for a fixed frame size. Requires q > receivers (the field-size condition
// the vector scheme itself imposes); throws std::invalid_argument otherwise.
OverheadComparison compare_overhead(std::uint64_t k, std::uint64_t receivers,
                                    std::uint64_t field_size, unsigned m, std::size_t frame_bytes);

}  // namespace crtnc
