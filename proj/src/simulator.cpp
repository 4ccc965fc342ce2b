#include "crtnc/simulator.hpp"

#include "crtnc/errors.hpp"
#include "crtnc/primes.hpp"

#include <algorithm>
#include <stdexcept>

namespace crtnc {

namespace {

std::vector<std::uint64_t> session_pool(std::size_t k, const SessionConfig& config, Rng& rng,
                                        const SessionHooks* hooks) {
  if (hooks && hooks->pool_override) {
    const auto& pool = *hooks->pool_override;
    if (pool.size() != 2 * k)
      throw config_error("pool override holds " + std::to_string(pool.size()) + " primes, need " +
                         std::to_string(2 * k));
    return pool;
  }
  PrimePool pool = generate_primes(2 * k, config.m, rng);
  return std::move(pool.primes);
}

std::vector<std::uint64_t> distinct_heads(std::span<const Packet> packets) {
  std::vector<std::uint64_t> primes;
  primes.reserve(2 * packets.size());
  for (const Packet& pkt : packets) {
    primes.push_back(pkt.p);
    primes.push_back(pkt.q);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

}  // namespace

RecoveryReport run_session(const Topology& topo, SessionMode mode, const SessionConfig& config,
                           std::span<const Int> messages, Rng& rng, const SessionHooks* hooks) {
  topo.validate();
  const std::size_t n_nodes = topo.node_count();

  std::vector<std::vector<std::size_t>> out_targets(n_nodes);
  for (const auto& [from, to] : topo.edges) out_targets[from].push_back(to);

  std::vector<std::vector<Packet>> inbox(n_nodes);
  auto deliver = [&](std::size_t from, std::size_t to, const Packet& pkt) {
    if (hooks && hooks->edge_observer) hooks->edge_observer(from, to, pkt);
    inbox[to].push_back(pkt);
  };

  const std::vector<std::size_t> sources = topo.sources();
  std::size_t k = 0;
  if (mode == SessionMode::single_source) {
    if (sources.size() != 1)
      throw config_error("single-source session on a topology with " +
                         std::to_string(sources.size()) + " sources");
    k = out_targets[sources.front()].size();
    if (messages.size() != config.u)
      throw config_error("single-source session needs one message per payload slot");
  } else {
    k = sources.size();
    if (config.u != 1) throw config_error("multi-source sessions carry one payload slot");
    if (messages.size() != k)
      throw config_error("multi-source session needs one message per source");
  }
  if (config.k != 0 && config.k != k)
    throw config_error("configured k=" + std::to_string(config.k) +
                       " does not match the topology's " + std::to_string(k));

  RecoveryReport report;
  report.mode = mode;
  report.source_count = k;
  report.pool = session_pool(k, config, rng, hooks);

  if (mode == SessionMode::multi_source) {
    report.identities.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
      report.identities.push_back({i + 1, report.pool[2 * i], report.pool[2 * i + 1]});
  }

  for (std::size_t v = 0; v < n_nodes; ++v) {
    switch (topo.role_of(v)) {
      case NodeRole::source: {
        if (mode == SessionMode::single_source) {
          for (std::size_t i = 0; i < k; ++i) {
            Packet pkt = source_encode_parallel(messages, report.pool[2 * i],
                                                report.pool[2 * i + 1], config.n);
            deliver(v, out_targets[v][i], pkt);
          }
        } else {
          Packet pkt = source_encode_multi(report.identities[v], messages[v], config.m);
          for (std::size_t to : out_targets[v]) deliver(v, to, pkt);
        }
        break;
      }
      case NodeRole::internal: {
        if (inbox[v].empty() || out_targets[v].empty()) break;
        std::optional<PrimePair> forced;
        if (hooks && hooks->pick_override) forced = hooks->pick_override(v, inbox[v]);
        if (forced) {
          Packet pkt = recode_with_pair(inbox[v], *forced, config.path);
          for (std::size_t to : out_targets[v]) deliver(v, to, pkt);
        } else {
          std::vector<Packet> outs =
              internal_recode(inbox[v], out_targets[v].size(), config.policy, config.path, rng);
          for (std::size_t i = 0; i < outs.size(); ++i) deliver(v, out_targets[v][i], outs[i]);
        }
        std::vector<Packet>().swap(inbox[v]);
        break;
      }
      case NodeRole::receiver: {
        ReceiverReport rr;
        rr.node = v;
        rr.collected_primes = distinct_heads(inbox[v]);
        if (!inbox[v].empty()) rr.merged = receiver_solve(inbox[v]);
        if (mode == SessionMode::single_source) {
          for (std::size_t slot = 0; slot < config.u; ++slot) {
            if (rr.merged.empty())
              rr.outcomes.push_back({RecoveryKind::none, 0, 0});
            else
              rr.outcomes.push_back(
                  finalize_single(rr.merged[slot].residue, rr.merged[slot].modulus, config.n));
          }
        } else {
          for (const SourceIdentity& id : report.identities) {
            if (rr.merged.empty())
              rr.outcomes.push_back({RecoveryKind::none, 0, 0});
            else
              rr.outcomes.push_back(classify_recovery(rr.merged.front(), id));
          }
        }
        report.receivers.push_back(std::move(rr));
        std::vector<Packet>().swap(inbox[v]);
        break;
      }
    }
  }
  return report;
}

RateSummary recover_rate(const RecoveryReport& report) {
  if (report.mode != SessionMode::multi_source)
    throw std::invalid_argument("recover_rate applies to multi-source reports");
  RateSummary summary;
  summary.per_receiver.reserve(report.receivers.size());
  double total = 0.0;
  for (const ReceiverReport& rr : report.receivers) {
    std::size_t full = 0;
    for (const RecoveryOutcome& outcome : rr.outcomes) full += (outcome.kind == RecoveryKind::full);
    double rate = static_cast<double>(full) / static_cast<double>(report.source_count);
    summary.per_receiver.push_back(rate);
    total += rate;
  }
  if (!summary.per_receiver.empty()) summary.mean = total / summary.per_receiver.size();
  return summary;
}

std::vector<Table2Row> experiment_table2(std::span<const std::size_t> m_list,
                                         std::span<const std::size_t> l_list,
                                         std::span<const std::uint64_t> seeds, RecodePolicy policy,
                                         RecodePath path) {
  if (seeds.empty()) throw config_error("experiment needs at least one seed");
  std::vector<Table2Row> rows;
  std::size_t combo = 0;
  for (std::size_t m_width : m_list) {
    for (std::size_t l_count : l_list) {
      Table2Row mean_row;
      mean_row.m = m_width;
      mean_row.l = l_count;
      mean_row.is_mean = true;
      mean_row.t.assign(table2_receivers, 0.0);

      for (std::uint64_t seed : seeds) {
        Rng rng(derive_seed(seed, combo));
        Topology topo = generate_layered(table2_sources, m_width, l_count, table2_receivers,
                                         table2_sigma, rng);
        PrimePool pool = generate_primes(2 * table2_sources, table2_prime_bits, rng);

        // Each message fits both the (2m-1)-bit budget and its own
        // identity product, so a full recovery returns it verbatim.
        std::vector<Int> messages;
        messages.reserve(table2_sources);
        for (std::size_t i = 0; i < table2_sources; ++i) {
          std::uint64_t cap = std::min<std::uint64_t>(
              1ULL << (2 * table2_prime_bits - 1), pool.primes[2 * i] * pool.primes[2 * i + 1]);
          messages.emplace_back(rng.below(cap));
        }

        SessionConfig config;
        config.m = table2_prime_bits;
        config.u = 1;
        config.n = 2 * table2_prime_bits - 1;
        config.k = table2_sources;
        config.policy = policy;
        config.path = path;
        config.seed = seed;

        SessionHooks hooks;
        hooks.pool_override = pool.primes;
        RecoveryReport report =
            run_session(topo, SessionMode::multi_source, config, messages, rng, &hooks);

        Table2Row row;
        row.m = m_width;
        row.l = l_count;
        row.seed = seed;
        row.t.reserve(report.receivers.size());
        double sum_t = 0.0;
        for (const ReceiverReport& rr : report.receivers) {
          row.t.push_back(static_cast<double>(rr.prime_count()));
          sum_t += static_cast<double>(rr.prime_count());
        }
        row.r_prime = sum_t / static_cast<double>(row.t.size()) /
                      static_cast<double>(2 * table2_sources);
        for (std::size_t i = 0; i < row.t.size(); ++i) mean_row.t[i] += row.t[i];
        mean_row.r_prime += row.r_prime;
        rows.push_back(std::move(row));
      }

      const auto n_seeds = static_cast<double>(seeds.size());
      for (double& v : mean_row.t) v /= n_seeds;
      mean_row.r_prime /= n_seeds;
      rows.push_back(std::move(mean_row));
      ++combo;
    }
  }
  return rows;
}

}  // namespace crtnc
