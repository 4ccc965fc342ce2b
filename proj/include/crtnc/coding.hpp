#pragma once

#include "crtnc/packet.hpp"
#include "crtnc/primes.hpp"
#include "crtnc/rng.hpp"

#include <span>
#include <utility>
#include <vector>

namespace crtnc {

// --- source coding -------------------------------------------------------

// Split a prime list into consecutive pairs and emit one packet per pair,
// each carrying message mod (pair product). The list length must be even
// (2k primes -> k packets); message must fit n_bits.
std::vector<Packet> source_encode_single(const Int& message, std::span<const std::uint64_t> primes,
                                         unsigned n_bits);

// One packet carrying u independent messages reduced modulo p*q.
Packet source_encode_parallel(std::span<const Int> messages, std::uint64_t p, std::uint64_t q,
                              unsigned n_bits);

// Multi-source: the source's own pair is the head, the message the payload.
// The message must fit 2m-1 bits; it is reduced modulo the identity product
// (a no-op whenever it is smaller, which the identity primes make usual).
Packet source_encode_multi(const SourceIdentity& identity, const Int& message, unsigned m);

// --- internal recoding ----------------------------------------------------

using PrimePair = std::pair<std::uint64_t, std::uint64_t>;

// Two distinct prime values drawn from the multiset of input heads: the
// first uniform over all head entries, the second uniform over entries of a
// different value. Throws corrupt_session_error if the inputs carry fewer
// than two distinct primes.
PrimePair pick_prime_pair(std::span<const Packet> inputs, Rng& rng);

// Recode the inputs onto the given head pair. The full path solves the whole
// congruence system per payload slot and reduces; the fast path reduces one
// packet per picked prime and solves only the resulting two-congruence
// system. Identical picks give identical outputs; the fast path cannot
// detect incompatible inputs (the full path throws corrupt_session_error).
Packet recode_with_pair(std::span<const Packet> inputs, PrimePair pair, RecodePath path);

// Steps: solve (or shortcut), pick, reduce; one pick serves every output
// under per_node, each output draws its own under per_edge. A node whose
// inputs carry fewer than two distinct primes forwards its input unchanged.
std::vector<Packet> internal_recode(std::span<const Packet> inputs, std::size_t out_degree,
                                    RecodePolicy policy, RecodePath path, Rng& rng);

// --- receiver -------------------------------------------------------------

// Merge all inputs into one congruence class per payload slot (modulo the
// lcm of the head products). Incompatible inputs throw corrupt_session_error.
std::vector<CongruenceClass> receiver_solve(std::span<const Packet> inputs);

// Single-source finalize: the class c mod N pins the message exactly when
// [0, 2^n) holds a single member of it, i.e. c < 2^n <= c + N.
RecoveryOutcome finalize_single(const Int& c, const Int& modulus, unsigned n_bits);

// Multi-source classification: full recovery when both identity primes
// divide the solved modulus, partial modulo one when only it does.
RecoveryOutcome classify_recovery(const CongruenceClass& solution, const SourceIdentity& identity);

}  // namespace crtnc
