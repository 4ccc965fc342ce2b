#include "crtnc/coding.hpp"

#include "crtnc/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace crtnc {

namespace {

void check_message_bits(const Int& message, unsigned n_bits, const char* what) {
  if (message < 0) throw std::domain_error(std::string(what) + ": message must be non-negative");
  if (message >> n_bits != 0)
    throw std::domain_error(std::string(what) + ": message exceeds " + std::to_string(n_bits) +
                            " bits");
}

void check_head_pair(std::uint64_t p, std::uint64_t q, const char* what) {
  if (p == q) throw std::invalid_argument(std::string(what) + ": head primes must be distinct");
  if (!is_prime(p) || !is_prime(q))
    throw std::invalid_argument(std::string(what) + ": head values must be prime");
}

// x ≡ a (mod p), x ≡ b (mod q) for distinct primes p, q; result in [0, pq).
// Fits the whole computation in 64 bits when pq does.
Int crt_two_primes(const Int& a_in, std::uint64_t p, const Int& b_in, std::uint64_t q) {
  if (p < (1ULL << 32) && q < (1ULL << 32)) {
    const std::uint64_t a = static_cast<std::uint64_t>(a_in % p);
    const std::uint64_t b = static_cast<std::uint64_t>(b_in % q);
    // Invert p modulo q by the signed Euclidean algorithm.
    std::int64_t r0 = static_cast<std::int64_t>(q), r1 = static_cast<std::int64_t>(p % q);
    std::int64_t x0 = 0, x1 = 1;
    while (r1 != 0) {
      std::int64_t k = r0 / r1;
      r0 -= k * r1;
      std::swap(r0, r1);
      x0 -= k * x1;
      std::swap(x0, x1);
    }
    std::uint64_t inv = static_cast<std::uint64_t>(x0 < 0 ? x0 + static_cast<std::int64_t>(q) : x0);
    std::uint64_t diff = (b + q - a % q) % q;
    std::uint64_t t = static_cast<std::uint64_t>(static_cast<__uint128_t>(diff) * inv % q);
    return Int(a + p * t);
  }
  CongruenceClass ca(a_in % p, Int(p));
  CongruenceClass cb(b_in % q, Int(q));
  return merge(ca, cb)->residue;  // distinct primes are coprime: always solvable
}

// One congruence class per payload slot across all inputs, or throw.
std::vector<CongruenceClass> solve_slots(std::span<const Packet> inputs) {
  if (inputs.empty()) throw std::invalid_argument("recode/solve: no input packets");
  const std::size_t u = inputs.front().residues.size();
  for (const Packet& pkt : inputs) {
    if (pkt.residues.size() != u)
      throw corrupt_session_error("packets disagree on payload slot count");
  }
  std::vector<CongruenceClass> out;
  out.reserve(u);
  for (std::size_t slot = 0; slot < u; ++slot) {
    CongruenceClass acc(inputs.front().residues[slot], inputs.front().head_product());
    for (std::size_t i = 1; i < inputs.size(); ++i) {
      auto merged = merge(acc, CongruenceClass(inputs[i].residues[slot], inputs[i].head_product()));
      if (!merged)
        throw corrupt_session_error("incompatible congruences in slot " + std::to_string(slot) +
                                    ": corrupted packet or mismatched session");
      acc = std::move(*merged);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

std::size_t distinct_head_primes(std::span<const Packet> inputs) {
  std::vector<std::uint64_t> values;
  values.reserve(2 * inputs.size());
  for (const Packet& pkt : inputs) {
    values.push_back(pkt.p);
    values.push_back(pkt.q);
  }
  std::sort(values.begin(), values.end());
  return std::unique(values.begin(), values.end()) - values.begin();
}

Packet reduce_to_pair(const std::vector<CongruenceClass>& slots, PrimePair pair) {
  Packet out;
  out.p = pair.first;
  out.q = pair.second;
  Int product = Int(pair.first) * pair.second;
  out.residues.reserve(slots.size());
  for (const CongruenceClass& c : slots) out.residues.push_back(c.residue % product);
  return out;
}

Packet fast_recode(std::span<const Packet> inputs, PrimePair pair) {
  auto find_holder = [&](std::uint64_t prime) -> const Packet& {
    for (const Packet& pkt : inputs)
      if (pkt.p == prime || pkt.q == prime) return pkt;
    throw corrupt_session_error("picked prime missing from inputs");
  };
  const Packet& first = find_holder(pair.first);
  const Packet& second = find_holder(pair.second);

  Packet out;
  out.p = pair.first;
  out.q = pair.second;
  out.residues.reserve(first.residues.size());
  if (&first == &second) {
    // Both primes sit in one head: that payload is already the answer mod pq.
    Int product = Int(pair.first) * pair.second;
    for (const Int& r : first.residues) out.residues.push_back(r % product);
    return out;
  }
  for (std::size_t slot = 0; slot < first.residues.size(); ++slot) {
    out.residues.push_back(
        crt_two_primes(first.residues[slot], pair.first, second.residues[slot], pair.second));
  }
  return out;
}

}  // namespace

std::vector<Packet> source_encode_single(const Int& message, std::span<const std::uint64_t> primes,
                                         unsigned n_bits) {
  if (primes.size() < 2 || primes.size() % 2 != 0)
    throw std::invalid_argument("source_encode_single: need an even number of primes (2k)");
  check_message_bits(message, n_bits, "source_encode_single");
  std::vector<Packet> packets;
  packets.reserve(primes.size() / 2);
  for (std::size_t i = 0; i + 1 < primes.size(); i += 2) {
    check_head_pair(primes[i], primes[i + 1], "source_encode_single");
    Packet pkt;
    pkt.p = primes[i];
    pkt.q = primes[i + 1];
    pkt.residues.push_back(message % pkt.head_product());
    packets.push_back(std::move(pkt));
  }
  return packets;
}

Packet source_encode_parallel(std::span<const Int> messages, std::uint64_t p, std::uint64_t q,
                              unsigned n_bits) {
  if (messages.empty()) throw std::invalid_argument("source_encode_parallel: no messages");
  check_head_pair(p, q, "source_encode_parallel");
  Packet pkt;
  pkt.p = p;
  pkt.q = q;
  Int product = pkt.head_product();
  pkt.residues.reserve(messages.size());
  for (const Int& message : messages) {
    check_message_bits(message, n_bits, "source_encode_parallel");
    pkt.residues.push_back(message % product);
  }
  return pkt;
}

Packet source_encode_multi(const SourceIdentity& identity, const Int& message, unsigned m) {
  check_head_pair(identity.p, identity.q, "source_encode_multi");
  check_message_bits(message, 2 * m - 1, "source_encode_multi");
  Packet pkt;
  pkt.p = identity.p;
  pkt.q = identity.q;
  pkt.residues.push_back(message % pkt.head_product());
  return pkt;
}

PrimePair pick_prime_pair(std::span<const Packet> inputs, Rng& rng) {
  if (inputs.empty()) throw std::invalid_argument("pick_prime_pair: no input packets");
  std::vector<std::uint64_t> heads;
  heads.reserve(2 * inputs.size());
  for (const Packet& pkt : inputs) {
    heads.push_back(pkt.p);
    heads.push_back(pkt.q);
  }
  const std::uint64_t first = heads[rng.below(heads.size())];
  std::size_t other = 0;
  for (std::uint64_t v : heads) other += (v != first);
  if (other == 0) throw corrupt_session_error("inputs carry a single distinct prime");
  std::uint64_t skip = rng.below(other);
  for (std::uint64_t v : heads) {
    if (v == first) continue;
    if (skip == 0) return {first, v};
    --skip;
  }
  throw std::logic_error("pick_prime_pair: unreachable");
}

Packet recode_with_pair(std::span<const Packet> inputs, PrimePair pair, RecodePath path) {
  if (pair.first == pair.second)
    throw std::invalid_argument("recode_with_pair: picked primes must be distinct");
  if (path == RecodePath::fast) return fast_recode(inputs, pair);
  return reduce_to_pair(solve_slots(inputs), pair);
}

std::vector<Packet> internal_recode(std::span<const Packet> inputs, std::size_t out_degree,
                                    RecodePolicy policy, RecodePath path, Rng& rng) {
  if (inputs.empty()) throw std::invalid_argument("internal_recode: no input packets");
  if (distinct_head_primes(inputs) < 2) {
    // Degenerate pass-through; unreachable with well-formed heads.
    return std::vector<Packet>(out_degree, inputs.front());
  }
  std::vector<Packet> out;
  out.reserve(out_degree);
  if (policy == RecodePolicy::per_node) {
    Packet pkt = recode_with_pair(inputs, pick_prime_pair(inputs, rng), path);
    for (std::size_t e = 0; e < out_degree; ++e) out.push_back(pkt);
    return out;
  }
  // per_edge: independent pick per output link. The full system is solved
  // once and reused across picks; identical to recode_with_pair per edge.
  if (path == RecodePath::full) {
    auto slots = solve_slots(inputs);
    for (std::size_t e = 0; e < out_degree; ++e)
      out.push_back(reduce_to_pair(slots, pick_prime_pair(inputs, rng)));
    return out;
  }
  for (std::size_t e = 0; e < out_degree; ++e)
    out.push_back(fast_recode(inputs, pick_prime_pair(inputs, rng)));
  return out;
}

std::vector<CongruenceClass> receiver_solve(std::span<const Packet> inputs) {
  return solve_slots(inputs);
}

RecoveryOutcome finalize_single(const Int& c, const Int& modulus, unsigned n_bits) {
  if (modulus < 1 || c < 0 || c >= modulus)
    throw std::invalid_argument("finalize_single: need 0 <= c < modulus");
  Int bound = Int(1) << n_bits;
  if (c < bound && c + modulus >= bound) return {RecoveryKind::full, c, modulus};
  return {RecoveryKind::partial, c, modulus};
}

RecoveryOutcome classify_recovery(const CongruenceClass& solution, const SourceIdentity& identity) {
  const bool has_p = solution.modulus % identity.p == 0;
  const bool has_q = solution.modulus % identity.q == 0;
  if (has_p && has_q) {
    Int product = identity.product();
    return {RecoveryKind::full, solution.residue % product, product};
  }
  if (has_p || has_q) {
    std::uint64_t known = has_p ? identity.p : identity.q;
    return {RecoveryKind::partial, solution.residue % known, Int(known)};
  }
  return {RecoveryKind::none, 0, 0};
}

}  // namespace crtnc
