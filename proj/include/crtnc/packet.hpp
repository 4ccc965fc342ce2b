#pragma once

#include "crtnc/congruence.hpp"

#include <cstdint>
#include <vector>

namespace crtnc {

// The unit carried on every edge: u payload residues plus a two-prime head.
// Invariants: p != q, and every residue lies in [0, p*q).
struct Packet {
  std::vector<Int> residues;
  std::uint64_t p = 0;
  std::uint64_t q = 0;

  Int head_product() const { return Int(p) * q; }

  bool operator==(const Packet&) const = default;
};

// The fixed prime pair (p_{2i-1}, p_{2i}) owned by source i in multi-source
// sessions. Pairs of different sources share no primes.
struct SourceIdentity {
  std::size_t index = 0;  // 1-based source index
  std::uint64_t p = 0;
  std::uint64_t q = 0;

  Int product() const { return Int(p) * q; }
};

enum class RecodePolicy { per_node, per_edge };
enum class RecodePath { full, fast };

struct SessionConfig {
  unsigned m = 16;           // prime bit length
  std::size_t u = 1;         // residues per packet
  unsigned n = 31;           // message bit length; multi-source sessions use 2m-1
  std::size_t k = 0;         // source count; 0 means "derive from the topology"
  RecodePolicy policy = RecodePolicy::per_node;
  RecodePath path = RecodePath::full;
  std::uint64_t seed = 0;
};

enum class RecoveryKind { full, partial, none };

// Per-source (or per-slot) decoding result: the message itself, a residue
// modulo one known prime, or nothing.
struct RecoveryOutcome {
  RecoveryKind kind = RecoveryKind::none;
  Int value = 0;    // full: the message; partial: the residue
  Int modulus = 0;  // full: the identity product; partial: the known prime

  bool operator==(const RecoveryOutcome&) const = default;
};

}  // namespace crtnc
