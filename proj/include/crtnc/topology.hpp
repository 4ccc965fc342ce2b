#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "crtnc/rng.hpp"

namespace crtnc {

enum class NodeRole { source, internal, receiver };

// Layered DAG. Node ids are dense, assigned level by level: level 0 holds
// ids [0, level_sizes[0]), level 1 the next block, and so on. Edges point
// strictly forward in level order (usually to the next level; fixtures like
// the butterfly also use level-skipping edges).
struct Topology {
  std::vector<std::size_t> level_sizes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (from, to) node ids

  std::size_t node_count() const;
  std::size_t level_count() const { return level_sizes.size(); }
  std::size_t level_of(std::size_t node) const;
  NodeRole role_of(std::size_t node) const;

  std::vector<std::size_t> sources() const;
  std::vector<std::size_t> receivers() const;
  std::size_t out_degree(std::size_t node) const;
  std::size_t in_degree(std::size_t node) const;

  // Throws config_error if a level is empty, an edge does not point to a
  // higher level, a source has no output, or a receiver has no input.
  void validate() const;
};

// The classic 7-node two-receiver multicast network:
// s -> a, s -> b, a -> c, b -> c, a -> t1, b -> t2, c -> d, d -> t1, d -> t2.
Topology butterfly();

// Random layered network: level sizes (m0, m, ..., m [l_mid times], m_last);
// every node links to round(sigma * next level size) distinct targets drawn
// uniformly without replacement. Deterministic per rng state.
Topology generate_layered(std::size_t m0, std::size_t m, std::size_t l_mid, std::size_t m_last,
                          double sigma, Rng& rng);

// Line format: "levels: M_0 M_1 ... M_last" then one "u -> v" line per edge.
std::string to_text(const Topology& topo);
Topology from_text(const std::string& text);

}  // namespace crtnc
