#include "crtnc/topology.hpp"

#include "crtnc/errors.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace crtnc {

std::size_t Topology::node_count() const {
  return std::accumulate(level_sizes.begin(), level_sizes.end(), std::size_t{0});
}

std::size_t Topology::level_of(std::size_t node) const {
  std::size_t base = 0;
  for (std::size_t lvl = 0; lvl < level_sizes.size(); ++lvl) {
    base += level_sizes[lvl];
    if (node < base) return lvl;
  }
  throw config_error("node id " + std::to_string(node) + " out of range");
}

NodeRole Topology::role_of(std::size_t node) const {
  std::size_t lvl = level_of(node);
  if (lvl == 0) return NodeRole::source;
  if (lvl + 1 == level_sizes.size()) return NodeRole::receiver;
  return NodeRole::internal;
}

std::vector<std::size_t> Topology::sources() const {
  std::vector<std::size_t> out(level_sizes.empty() ? 0 : level_sizes.front());
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

std::vector<std::size_t> Topology::receivers() const {
  if (level_sizes.empty()) return {};
  std::vector<std::size_t> out(level_sizes.back());
  std::iota(out.begin(), out.end(), node_count() - level_sizes.back());
  return out;
}

std::size_t Topology::out_degree(std::size_t node) const {
  std::size_t d = 0;
  for (const auto& [from, to] : edges) d += (from == node);
  return d;
}

std::size_t Topology::in_degree(std::size_t node) const {
  std::size_t d = 0;
  for (const auto& [from, to] : edges) d += (to == node);
  return d;
}

void Topology::validate() const {
  if (level_sizes.size() < 2) throw config_error("topology needs at least two levels");
  for (std::size_t s : level_sizes)
    if (s == 0) throw config_error("empty level");
  const std::size_t n = node_count();
  std::vector<std::size_t> in(n, 0), out(n, 0);
  for (const auto& [from, to] : edges) {
    if (from >= n || to >= n) throw config_error("edge endpoint out of range");
    if (level_of(to) <= level_of(from))
      throw config_error("edge " + std::to_string(from) + " -> " + std::to_string(to) +
                         " does not point to a later level");
    ++out[from];
    ++in[to];
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (role_of(v) == NodeRole::source && out[v] == 0)
      throw config_error("source " + std::to_string(v) + " has no output edge");
    if (role_of(v) == NodeRole::receiver && in[v] == 0)
      throw config_error("receiver " + std::to_string(v) + " has no input edge");
  }
}

Topology butterfly() {
  Topology t;
  t.level_sizes = {1, 2, 1, 1, 2};
  // ids: s=0, a=1, b=2, c=3, d=4, t1=5, t2=6
  t.edges = {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {1, 5}, {2, 6}, {3, 4}, {4, 5}, {4, 6}};
  return t;
}

Topology generate_layered(std::size_t m0, std::size_t m, std::size_t l_mid, std::size_t m_last,
                          double sigma, Rng& rng) {
  if (!(sigma > 0.0 && sigma <= 1.0)) throw config_error("sigma must be in (0, 1]");
  if (m0 == 0 || m == 0 || m_last == 0) throw config_error("level sizes must be positive");

  Topology t;
  t.level_sizes.push_back(m0);
  t.level_sizes.insert(t.level_sizes.end(), l_mid, m);
  t.level_sizes.push_back(m_last);

  std::size_t base = 0;
  for (std::size_t lvl = 0; lvl + 1 < t.level_sizes.size(); ++lvl) {
    const std::size_t here = t.level_sizes[lvl];
    const std::size_t next = t.level_sizes[lvl + 1];
    const std::size_t next_base = base + here;
    const auto fanout = static_cast<std::size_t>(std::llround(sigma * static_cast<double>(next)));
    if (fanout < 1)
      throw config_error("sigma * " + std::to_string(next) + " rounds below one target");
    std::vector<std::size_t> idx(next);
    for (std::size_t node = base; node < next_base; ++node) {
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      for (std::size_t j = 0; j < fanout; ++j) {
        std::swap(idx[j], idx[j + rng.below(next - j)]);
        t.edges.emplace_back(node, next_base + idx[j]);
      }
    }
    base = next_base;
  }
  t.validate();
  return t;
}

std::string to_text(const Topology& topo) {
  std::ostringstream out;
  out << "levels:";
  for (std::size_t s : topo.level_sizes) out << ' ' << s;
  out << '\n';
  for (const auto& [from, to] : topo.edges) out << from << " -> " << to << '\n';
  return out.str();
}

Topology from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Topology t;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    if (!saw_header) {
      std::string tag;
      fields >> tag;
      if (tag != "levels:") throw config_error("expected 'levels:' header line");
      std::size_t s;
      while (fields >> s) t.level_sizes.push_back(s);
      if (!fields.eof()) throw config_error("bad level size in header");
      saw_header = true;
      continue;
    }
    std::size_t from, to;
    std::string arrow;
    if (!(fields >> from >> arrow >> to) || arrow != "->")
      throw config_error("bad edge line: " + line);
    t.edges.emplace_back(from, to);
  }
  if (!saw_header) throw config_error("missing 'levels:' header line");
  t.validate();
  return t;
}

}  // namespace crtnc
