#pragma once

#include <cstddef>
#include <vector>

#include "nka/rational.hpp"

namespace nka {

/// Small integer flow network with lower and upper edge bounds. Used to decide
/// whether a transportation table with prescribed margins and per-cell lower
/// bounds exists, and to produce one when it does.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t nodes);

  /// Adds a directed edge carrying between `lower` and `upper` units and
  /// returns its handle.
  std::size_t add_edge(std::size_t from, std::size_t to, Count lower, Count upper);

  /// Searches for a circulation that respects every bound. Flows are available
  /// through flow() after a successful call.
  bool find_circulation();

  /// Flow on an edge from the last successful find_circulation().
  Count flow(std::size_t edge) const;

  std::size_t node_count() const { return nodes_; }

 private:
  struct Arc {
    std::size_t to;
    std::size_t reverse;
    Count capacity;
  };
  struct Edge {
    std::size_t from;
    std::size_t to;
    Count lower;
    Count upper;
    std::size_t arc = 0;
  };

  std::size_t add_arc(std::size_t from, std::size_t to, Count capacity);
  Count max_flow(std::size_t source, std::size_t sink);
  bool build_levels(std::size_t source, std::size_t sink);
  Count push(std::size_t node, std::size_t sink, Count limit);

  std::size_t nodes_;
  std::vector<std::vector<Arc>> adjacency_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<std::size_t> next_arc_;
  bool solved_ = false;
};

}  // namespace nka
