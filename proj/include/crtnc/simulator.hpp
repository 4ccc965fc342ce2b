#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "crtnc/coding.hpp"
#include "crtnc/packet.hpp"
#include "crtnc/topology.hpp"

namespace crtnc {

enum class SessionMode { single_source, multi_source };

struct ReceiverReport {
  std::size_t node = 0;
  std::vector<std::uint64_t> collected_primes;  // distinct head primes, ascending
  std::vector<CongruenceClass> merged;          // one class per payload slot; empty if no input
  // multi-source: one outcome per source; single-source: one per payload slot
  std::vector<RecoveryOutcome> outcomes;

  std::size_t prime_count() const { return collected_primes.size(); }
};

struct RecoveryReport {
  SessionMode mode = SessionMode::single_source;
  std::size_t source_count = 0;  // k
  std::vector<std::uint64_t> pool;
  std::vector<SourceIdentity> identities;  // multi-source only
  std::vector<ReceiverReport> receivers;
};

// Test and demo plumbing: swap in a fixed prime pool, force the pair a
// given node recodes onto, or watch every packet delivery.
struct SessionHooks {
  std::optional<std::vector<std::uint64_t>> pool_override;
  std::function<std::optional<PrimePair>(std::size_t node, std::span<const Packet> inputs)>
      pick_override;
  std::function<void(std::size_t from, std::size_t to, const Packet& pkt)> edge_observer;
};

// Runs one multicast session: sources encode, internal nodes recode under
// the configured policy/path, receivers solve and classify. Nodes fire in
// id (level) order, so the result is deterministic for a given rng state.
//
// single_source: messages holds u values (one per payload slot) and the
// lone source's out-degree fixes k; its i-th out-edge carries the packet of
// prime pair i. multi_source: messages holds one value per source, u = 1.
RecoveryReport run_session(const Topology& topo, SessionMode mode, const SessionConfig& config,
                           std::span<const Int> messages, Rng& rng,
                           const SessionHooks* hooks = nullptr);

struct RateSummary {
  std::vector<double> per_receiver;  // R* = full outcomes / k
  double mean = 0.0;
};

// Per-receiver recover rate of a multi-source report.
RateSummary recover_rate(const RecoveryReport& report);

// Parameters of the random-network experiment, fixed by design:
// 100 sources, 10 receivers, sigma 0.8, 16-bit primes, one slot per packet.
inline constexpr std::size_t table2_sources = 100;
inline constexpr std::size_t table2_receivers = 10;
inline constexpr double table2_sigma = 0.8;
inline constexpr unsigned table2_prime_bits = 16;

struct Table2Row {
  std::size_t m = 0;  // interior level width M
  std::size_t l = 0;  // interior level count L
  std::uint64_t seed = 0;
  bool is_mean = false;  // seed-averaged summary row (seed field unused)
  std::vector<double> t;  // collected-prime count per receiver, t_1..t_10
  double r_prime = 0.0;   // (mean t_i) / (2k)
};

// For every (M, L) pair and every seed: generate the layered network,
// run one multi-source session, and record each receiver's distinct-prime
// count. A seed-averaged row follows each (M, L) group.
std::vector<Table2Row> experiment_table2(std::span<const std::size_t> m_list,
                                         std::span<const std::size_t> l_list,
                                         std::span<const std::uint64_t> seeds, RecodePolicy policy,
                                         RecodePath path);

}  // namespace crtnc
