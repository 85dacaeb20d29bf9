#include "nka/flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "nka/error.hpp"

namespace nka {

FlowNetwork::FlowNetwork(std::size_t nodes) : nodes_(nodes) {}

std::size_t FlowNetwork::add_edge(std::size_t from, std::size_t to, Count lower, Count upper) {
  if (from >= nodes_ || to >= nodes_) throw InvalidArgument("flow edge endpoint out of range");
  if (lower < 0 || upper < lower) {
    throw InvalidArgument("flow edge bounds must satisfy 0 <= lower <= upper");
  }
  edges_.push_back({from, to, lower, upper});
  solved_ = false;
  return edges_.size() - 1;
}

std::size_t FlowNetwork::add_arc(std::size_t from, std::size_t to, Count capacity) {
  adjacency_[from].push_back({to, adjacency_[to].size(), capacity});
  adjacency_[to].push_back({from, adjacency_[from].size() - 1, 0});
  return adjacency_[from].size() - 1;
}

bool FlowNetwork::build_levels(std::size_t source, std::size_t sink) {
  level_.assign(adjacency_.size(), -1);
  std::queue<std::size_t> frontier;
  level_[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const std::size_t node = frontier.front();
    frontier.pop();
    for (const Arc& arc : adjacency_[node]) {
      if (arc.capacity > 0 && level_[arc.to] < 0) {
        level_[arc.to] = level_[node] + 1;
        frontier.push(arc.to);
      }
    }
  }
  return level_[sink] >= 0;
}

Count FlowNetwork::push(std::size_t node, std::size_t sink, Count limit) {
  if (node == sink) return limit;
  for (std::size_t& i = next_arc_[node]; i < adjacency_[node].size(); ++i) {
    Arc& arc = adjacency_[node][i];
    if (arc.capacity <= 0 || level_[arc.to] != level_[node] + 1) continue;
    const Count pushed = push(arc.to, sink, std::min(limit, arc.capacity));
    if (pushed > 0) {
      arc.capacity -= pushed;
      adjacency_[arc.to][arc.reverse].capacity += pushed;
      return pushed;
    }
  }
  return 0;
}

Count FlowNetwork::max_flow(std::size_t source, std::size_t sink) {
  Count total = 0;
  while (build_levels(source, sink)) {
    next_arc_.assign(adjacency_.size(), 0);
    while (Count pushed = push(source, sink, std::numeric_limits<Count>::max())) total += pushed;
  }
  return total;
}

bool FlowNetwork::find_circulation() {
  // Each edge keeps only its slack; mandatory lower bounds become supplies and
  // demands served from an auxiliary source and sink. A circulation exists iff
  // the auxiliary max flow saturates every supply.
  const std::size_t source = nodes_;
  const std::size_t sink = nodes_ + 1;
  adjacency_.assign(nodes_ + 2, {});
  std::vector<Count> balance(nodes_, 0);
  for (Edge& edge : edges_) {
    edge.arc = add_arc(edge.from, edge.to, edge.upper - edge.lower);
    balance[edge.to] += edge.lower;
    balance[edge.from] -= edge.lower;
  }
  Count required = 0;
  for (std::size_t node = 0; node < nodes_; ++node) {
    if (balance[node] > 0) {
      add_arc(source, node, balance[node]);
      required += balance[node];
    } else if (balance[node] < 0) {
      add_arc(node, sink, -balance[node]);
    }
  }
  solved_ = max_flow(source, sink) == required;
  return solved_;
}

Count FlowNetwork::flow(std::size_t edge) const {
  if (!solved_) throw InvalidArgument("no circulation has been computed");
  const Edge& e = edges_.at(edge);
  return e.upper - adjacency_[e.from][e.arc].capacity;
}

}  // namespace nka
