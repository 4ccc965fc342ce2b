#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "crtnc/analysis.hpp"
#include "crtnc/coding.hpp"
#include "crtnc/errors.hpp"
#include "crtnc/primes.hpp"
#include "crtnc/rng.hpp"
#include "crtnc/simulator.hpp"
#include "crtnc/topology.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using Params = nlohmann::ordered_json;
using crtnc::Int;

std::string fmt(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

crtnc::RecodePolicy parse_policy(const std::string& s) {
  if (s == "per-node") return crtnc::RecodePolicy::per_node;
  if (s == "per-edge") return crtnc::RecodePolicy::per_edge;
  throw crtnc::config_error("unknown policy: " + s);
}

crtnc::RecodePath parse_path(const std::string& s) {
  if (s == "full") return crtnc::RecodePath::full;
  if (s == "fast") return crtnc::RecodePath::fast;
  throw crtnc::config_error("unknown path: " + s);
}

const char* kind_name(crtnc::RecoveryKind k) {
  switch (k) {
    case crtnc::RecoveryKind::full: return "full";
    case crtnc::RecoveryKind::partial: return "partial";
    default: return "none";
  }
}

std::string packet_label(const crtnc::Packet& pkt) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < pkt.residues.size(); ++i)
    out << (i ? "," : "") << pkt.residues[i];
  out << " | " << pkt.p << ',' << pkt.q << ']';
  return out.str();
}

// ---------------------------------------------------------------- demo

std::string render_demo(const Params& params) {
  const Int message(params.at("message").get<std::string>());
  const std::string format = params.at("format").get<std::string>();
  const std::vector<std::string> names{"s", "a", "b", "c", "d", "t1", "t2"};

  crtnc::Topology topo = crtnc::butterfly();
  crtnc::SessionConfig config;
  config.m = 4;
  config.u = 1;
  config.n = 8;

  crtnc::SessionHooks hooks;
  hooks.pool_override = std::vector<std::uint64_t>{3, 11, 5, 7};
  hooks.pick_override = [](std::size_t node,
                           std::span<const crtnc::Packet>) -> std::optional<crtnc::PrimePair> {
    switch (node) {
      case 1: return crtnc::PrimePair{3, 11};
      case 2: return crtnc::PrimePair{5, 7};
      case 3: return crtnc::PrimePair{7, 11};
      case 4: return crtnc::PrimePair{7, 11};
      default: return std::nullopt;
    }
  };

  std::ostringstream trace;
  Params edges = Params::array();
  hooks.edge_observer = [&](std::size_t from, std::size_t to, const crtnc::Packet& pkt) {
    trace << names[from] << " -> " << names[to] << " : " << packet_label(pkt) << '\n';
    Params e;
    e["from"] = names[from];
    e["to"] = names[to];
    e["p"] = pkt.p;
    e["q"] = pkt.q;
    e["residues"] = Params::array();
    for (const Int& r : pkt.residues) e["residues"].push_back(r.str());
    edges.push_back(std::move(e));
  };

  std::vector<Int> messages{message};
  crtnc::Rng rng(0);
  crtnc::RecoveryReport report =
      crtnc::run_session(topo, crtnc::SessionMode::single_source, config, messages, rng, &hooks);

  Params receivers = Params::array();
  for (const crtnc::ReceiverReport& rr : report.receivers) {
    const crtnc::CongruenceClass& sol = rr.merged.front();
    const crtnc::RecoveryOutcome& outcome = rr.outcomes.front();
    trace << names[rr.node] << ": solve -> " << sol.residue << " (mod " << sol.modulus << "); ";
    if (outcome.kind == crtnc::RecoveryKind::full)
      trace << "recovered " << outcome.value << '\n';
    else
      trace << "ambiguous, residue " << outcome.value << " mod " << outcome.modulus << '\n';
    Params r;
    r["node"] = names[rr.node];
    r["residue"] = sol.residue.str();
    r["modulus"] = sol.modulus.str();
    r["outcome"] = kind_name(outcome.kind);
    r["value"] = outcome.value.str();
    receivers.push_back(std::move(r));
  }

  Params report_json;
  report_json["message"] = message.str();
  report_json["primes"] = *hooks.pool_override;
  report_json["edges"] = std::move(edges);
  report_json["receivers"] = std::move(receivers);

  if (format == "json") return report_json.dump(2) + "\n";
  return trace.str() + report_json.dump(2) + "\n";
}

// ---------------------------------------------------------------- table1

std::string render_table1(const Params& params) {
  const std::string format = params.at("format").get<std::string>();
  const double rs[] = {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  if (format == "json") {
    Params rows = Params::array();
    for (double r : rs) {
      Params row;
      row["r"] = r;
      row["rstar"] = crtnc::approx_recovery(r);
      rows.push_back(std::move(row));
    }
    return rows.dump(2) + "\n";
  }
  std::string out = "r,R*\n";
  for (double r : rs) out += fmt(r, 1) + "," + fmt(crtnc::approx_recovery(r), 6) + "\n";
  return out;
}

// ---------------------------------------------------------------- table2

std::string render_table2(const Params& params) {
  const auto m_list = params.at("m_list").get<std::vector<std::size_t>>();
  const auto l_list = params.at("l_list").get<std::vector<std::size_t>>();
  const auto base_seed = params.at("seed").get<std::uint64_t>();
  const auto seed_count = params.at("seeds").get<std::uint64_t>();
  const auto policy = parse_policy(params.at("policy").get<std::string>());
  const auto path = parse_path(params.at("path").get<std::string>());
  const std::string format = params.at("format").get<std::string>();

  std::vector<std::uint64_t> seeds(seed_count);
  for (std::uint64_t i = 0; i < seed_count; ++i) seeds[i] = base_seed + i;

  auto rows = crtnc::experiment_table2(m_list, l_list, seeds, policy, path);

  if (format == "json") {
    Params arr = Params::array();
    for (const crtnc::Table2Row& row : rows) {
      Params r;
      r["M"] = row.m;
      r["L"] = row.l;
      if (row.is_mean)
        r["seed"] = "mean";
      else
        r["seed"] = row.seed;
      r["t"] = row.t;
      r["r_prime"] = row.r_prime;
      arr.push_back(std::move(r));
    }
    return arr.dump(2) + "\n";
  }

  std::string out = "M,L,seed";
  for (int i = 1; i <= 10; ++i) out += ",t_" + std::to_string(i);
  out += ",R'\n";
  for (const crtnc::Table2Row& row : rows) {
    out += std::to_string(row.m) + "," + std::to_string(row.l) + ",";
    out += row.is_mean ? "mean" : std::to_string(row.seed);
    for (double t : row.t) out += "," + fmt(t, row.is_mean ? 2 : 0);
    out += "," + fmt(row.r_prime, 4) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------- overhead

std::string render_overhead(const Params& params) {
  auto cmp = crtnc::compare_overhead(
      params.at("k").get<std::uint64_t>(), params.at("receivers").get<std::uint64_t>(),
      params.at("q").get<std::uint64_t>(), params.at("m").get<unsigned>(),
      params.at("frame").get<std::size_t>());
  const std::string format = params.at("format").get<std::string>();

  if (format == "json") {
    Params j;
    j["k"] = cmp.k;
    j["receivers"] = cmp.receivers;
    j["q"] = cmp.field_size;
    j["m"] = cmp.m;
    j["frame_bytes"] = cmp.frame_bytes;
    j["vector_head_bytes"] = cmp.vector_head_bytes;
    j["vector_fraction"] = cmp.vector_fraction;
    j["vector_feasible"] = cmp.vector_feasible;
    j["crt_head_bytes"] = cmp.crt_head_bytes;
    j["crt_fraction"] = cmp.crt_fraction;
    j["crt_feasible"] = cmp.crt_feasible;
    return j.dump(2) + "\n";
  }
  std::string out = "scheme,head_bytes,fraction_of_frame,feasible\n";
  out += "coding-vector," + std::to_string(cmp.vector_head_bytes) + "," +
         fmt(cmp.vector_fraction, 6) + "," + (cmp.vector_feasible ? "yes" : "no") + "\n";
  out += "crt," + std::to_string(cmp.crt_head_bytes) + "," + fmt(cmp.crt_fraction, 6) + "," +
         (cmp.crt_feasible ? "yes" : "no") + "\n";
  return out;
}

// ---------------------------------------------------------------- simulate

std::string render_simulate(const Params& params) {
  const std::string topo_file = params.at("topology").get<std::string>();
  const auto seed = params.at("seed").get<std::uint64_t>();
  const std::string mode_name = params.at("mode").get<std::string>();
  const std::string format = params.at("format").get<std::string>();

  crtnc::SessionConfig config;
  config.m = params.at("m").get<unsigned>();
  config.u = params.at("u").get<std::size_t>();
  config.n = 2 * config.m - 1;
  config.policy = parse_policy(params.at("policy").get<std::string>());
  config.path = parse_path(params.at("path").get<std::string>());
  config.seed = seed;

  const bool multi = mode_name == "multi";
  if (!multi && mode_name != "single") throw crtnc::config_error("unknown mode: " + mode_name);

  crtnc::Rng rng(seed);
  crtnc::Topology topo;
  if (!topo_file.empty()) {
    std::ifstream in(topo_file);
    if (!in) throw crtnc::config_error("cannot open topology file: " + topo_file);
    std::stringstream buf;
    buf << in.rdbuf();
    topo = crtnc::from_text(buf.str());
  } else {
    topo = crtnc::generate_layered(multi ? 100 : 1, params.at("M").get<std::size_t>(),
                                   params.at("L").get<std::size_t>(), 10, 0.8, rng);
  }

  std::size_t k = multi ? topo.sources().size() : topo.out_degree(topo.sources().at(0));
  crtnc::PrimePool pool = crtnc::generate_primes(2 * k, config.m, rng);

  std::vector<Int> messages;
  const std::string fixed = params.at("message").get<std::string>();
  if (multi) {
    if (!fixed.empty()) throw crtnc::config_error("--message applies to single-source mode");
    for (std::size_t i = 0; i < k; ++i) {
      std::uint64_t cap = pool.primes[2 * i] * pool.primes[2 * i + 1];
      if (config.m < 32) cap = std::min(cap, std::uint64_t{1} << (2 * config.m - 1));
      messages.emplace_back(rng.below(cap));
    }
  } else if (!fixed.empty()) {
    if (config.u != 1) throw crtnc::config_error("--message needs u=1");
    messages.emplace_back(Int(fixed));
  } else {
    for (std::size_t s = 0; s < config.u; ++s)
      messages.emplace_back(Int(rng.next()) % (Int(1) << config.n));
  }

  crtnc::SessionHooks hooks;
  hooks.pool_override = pool.primes;
  crtnc::RecoveryReport report = crtnc::run_session(
      topo, multi ? crtnc::SessionMode::multi_source : crtnc::SessionMode::single_source, config,
      messages, rng, &hooks);

  if (format == "json") {
    Params j;
    j["mode"] = mode_name;
    j["k"] = report.source_count;
    j["pool"] = report.pool;
    Params receivers = Params::array();
    for (const crtnc::ReceiverReport& rr : report.receivers) {
      Params r;
      r["node"] = rr.node;
      r["t"] = rr.prime_count();
      Params outcomes = Params::array();
      for (const crtnc::RecoveryOutcome& outcome : rr.outcomes) {
        Params o;
        o["kind"] = kind_name(outcome.kind);
        o["value"] = outcome.value.str();
        o["modulus"] = outcome.modulus.str();
        outcomes.push_back(std::move(o));
      }
      r["outcomes"] = std::move(outcomes);
      receivers.push_back(std::move(r));
    }
    j["receivers"] = std::move(receivers);
    if (multi) {
      crtnc::RateSummary rate = crtnc::recover_rate(report);
      j["r_star_mean"] = rate.mean;
    }
    return j.dump(2) + "\n";
  }

  if (multi) {
    crtnc::RateSummary rate = crtnc::recover_rate(report);
    std::string out = "receiver,t,full,partial,none,r_star\n";
    for (std::size_t i = 0; i < report.receivers.size(); ++i) {
      const crtnc::ReceiverReport& rr = report.receivers[i];
      std::size_t tally[3] = {0, 0, 0};
      for (const crtnc::RecoveryOutcome& outcome : rr.outcomes)
        ++tally[static_cast<int>(outcome.kind)];
      out += std::to_string(rr.node) + "," + std::to_string(rr.prime_count()) + "," +
             std::to_string(tally[0]) + "," + std::to_string(tally[1]) + "," +
             std::to_string(tally[2]) + "," + fmt(rate.per_receiver[i], 4) + "\n";
    }
    return out;
  }
  std::string out = "receiver,t,slot,kind,value,modulus\n";
  for (const crtnc::ReceiverReport& rr : report.receivers) {
    for (std::size_t slot = 0; slot < rr.outcomes.size(); ++slot) {
      const crtnc::RecoveryOutcome& outcome = rr.outcomes[slot];
      out += std::to_string(rr.node) + "," + std::to_string(rr.prime_count()) + "," +
             std::to_string(slot) + "," + kind_name(outcome.kind) + "," + outcome.value.str() +
             "," + outcome.modulus.str() + "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------- plumbing

using Renderer = std::string (*)(const Params&);

const std::map<std::string, Renderer>& renderers() {
  static const std::map<std::string, Renderer> table{
      {"demo-butterfly", render_demo}, {"table1", render_table1},
      {"table2", render_table2},       {"overhead", render_overhead},
      {"simulate", render_simulate},
  };
  return table;
}

void finish(const std::string& subcommand, const Params& params, const std::string& out_path,
            const std::string& data) {
  if (out_path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << data;

  Params manifest;
  manifest["subcommand"] = subcommand;
  manifest["version"] = kVersion;
  manifest["params"] = params;
  manifest["outputs"] = Params::array({out_path});
  const std::string manifest_path = out_path + ".manifest.json";
  std::ofstream mf(manifest_path, std::ios::binary);
  if (!mf) throw std::runtime_error("cannot write " + manifest_path);
  mf << manifest.dump(2) << "\n";
  std::cerr << "wrote " << out_path << " and " << manifest_path << "\n";
}

void replay(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path);
  Params manifest = Params::parse(in);
  const std::string subcommand = manifest.at("subcommand").get<std::string>();
  auto it = renderers().find(subcommand);
  if (it == renderers().end())
    throw std::runtime_error("manifest names unknown subcommand: " + subcommand);
  const std::string data = it->second(manifest.at("params"));
  for (const auto& path : manifest.at("outputs")) {
    std::ofstream out(path.get<std::string>(), std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.get<std::string>());
    out << data;
    std::cerr << "wrote " << path.get<std::string>() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Congruence-based random network coding simulator"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // demo-butterfly
  std::string demo_message = "200";
  std::string demo_format = "text";
  std::string demo_out;
  auto* demo = app.add_subcommand("demo-butterfly", "Trace one session over the butterfly network");
  demo->add_option("--message", demo_message, "message to multicast (default 200, < 256)");
  demo->add_option("--format", demo_format)->check(CLI::IsMember({"text", "json"}));
  demo->add_option("--out", demo_out, "write output here plus a run manifest");

  // table1
  std::string t1_format = "csv";
  std::string t1_out;
  auto* t1 = app.add_subcommand("table1", "Recovery-rate approximation at fixed l/k ratios");
  t1->add_option("--format", t1_format)->check(CLI::IsMember({"csv", "json"}));
  t1->add_option("--out", t1_out);

  // table2
  std::vector<std::size_t> t2_m{200, 250, 400};
  std::vector<std::size_t> t2_l{3, 5};
  std::uint64_t t2_seed = 0, t2_seeds = 10;
  std::string t2_policy = "per-node", t2_path = "full", t2_format = "csv", t2_out;
  auto* t2 = app.add_subcommand("table2", "Recover-rate experiment on random layered networks");
  t2->add_option("--M", t2_m, "interior level widths to sweep");
  t2->add_option("--L", t2_l, "interior level counts to sweep");
  t2->add_option("--seed", t2_seed, "base seed");
  t2->add_option("--seeds", t2_seeds, "number of seeds per (M, L)");
  t2->add_option("--policy", t2_policy)->check(CLI::IsMember({"per-node", "per-edge"}));
  t2->add_option("--path", t2_path)->check(CLI::IsMember({"full", "fast"}));
  t2->add_option("--format", t2_format)->check(CLI::IsMember({"csv", "json"}));
  t2->add_option("--out", t2_out);

  // overhead
  std::uint64_t ov_k = 100, ov_t = 2, ov_q = 16;
  unsigned ov_m = 16;
  std::size_t ov_frame = 30;
  std::string ov_format = "csv", ov_out;
  auto* ov = app.add_subcommand("overhead", "Header sizes: coding vector vs two-prime head");
  ov->add_option("--k", ov_k, "source count / vector length");
  ov->add_option("--T", ov_t, "receiver count");
  ov->add_option("--q", ov_q, "coding-vector field size");
  ov->add_option("--m", ov_m, "prime bit length");
  ov->add_option("--frame", ov_frame, "frame size in bytes");
  ov->add_option("--format", ov_format)->check(CLI::IsMember({"csv", "json"}));
  ov->add_option("--out", ov_out);

  // simulate
  std::string sim_topo, sim_mode = "multi", sim_message;
  std::size_t sim_M = 200, sim_L = 3, sim_u = 1;
  unsigned sim_m = 16;
  std::uint64_t sim_seed = 0;
  std::string sim_policy = "per-node", sim_path = "full", sim_format = "csv", sim_out;
  auto* sim = app.add_subcommand("simulate", "Run one session on a given or generated topology");
  sim->add_option("--topology", sim_topo, "topology file (levels/edges text form)");
  sim->add_option("--M", sim_M, "generated interior level width");
  sim->add_option("--L", sim_L, "generated interior level count");
  sim->add_option("--mode", sim_mode)->check(CLI::IsMember({"single", "multi"}));
  sim->add_option("--message", sim_message, "fixed message (single-source, u=1)");
  sim->add_option("--seed", sim_seed);
  sim->add_option("--m", sim_m, "prime bit length");
  sim->add_option("--u", sim_u, "payload slots per packet");
  sim->add_option("--policy", sim_policy)->check(CLI::IsMember({"per-node", "per-edge"}));
  sim->add_option("--path", sim_path)->check(CLI::IsMember({"full", "fast"}));
  sim->add_option("--format", sim_format)->check(CLI::IsMember({"csv", "json"}));
  sim->add_option("--out", sim_out);

  // replay
  std::string replay_manifest;
  auto* rep = app.add_subcommand("replay", "Re-run a manifest and rewrite its outputs");
  rep->add_option("manifest", replay_manifest)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (demo->parsed()) {
      Params p{{"message", demo_message}, {"format", demo_format}};
      finish("demo-butterfly", p, demo_out, render_demo(p));
    } else if (t1->parsed()) {
      Params p{{"format", t1_format}};
      finish("table1", p, t1_out, render_table1(p));
    } else if (t2->parsed()) {
      Params p{{"m_list", t2_m},     {"l_list", t2_l}, {"seed", t2_seed},
               {"seeds", t2_seeds},  {"policy", t2_policy}, {"path", t2_path},
               {"format", t2_format}};
      finish("table2", p, t2_out, render_table2(p));
    } else if (ov->parsed()) {
      Params p{{"k", ov_k},       {"receivers", ov_t}, {"q", ov_q},
               {"m", ov_m},       {"frame", ov_frame}, {"format", ov_format}};
      finish("overhead", p, ov_out, render_overhead(p));
    } else if (sim->parsed()) {
      Params p{{"topology", sim_topo}, {"M", sim_M},           {"L", sim_L},
               {"mode", sim_mode},     {"message", sim_message}, {"seed", sim_seed},
               {"m", sim_m},           {"u", sim_u},           {"policy", sim_policy},
               {"path", sim_path},     {"format", sim_format}};
      finish("simulate", p, sim_out, render_simulate(p));
    } else if (rep->parsed()) {
      replay(replay_manifest);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
