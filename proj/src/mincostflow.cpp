#include "flexmat/mincostflow.hpp"

#include <cassert>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

namespace flexmat {

namespace {
constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::max();
}

MinCostFlow::MinCostFlow(int num_nodes)
    : adjacency_(num_nodes),
      potential_(num_nodes, 0),
      distance_(num_nodes, 0),
      parent_arc_(num_nodes, -1) {}

int MinCostFlow::add_arc(int from, int to, std::int64_t capacity,
                         std::int64_t cost) {
  assert(from >= 0 && from < num_nodes());
  assert(to >= 0 && to < num_nodes());
  if (capacity < 0 || cost < 0) {
    throw std::invalid_argument("arc capacity and cost must be nonnegative");
  }
  const int id = static_cast<int>(arcs_.size());
  arcs_.push_back({to, capacity, cost});
  arcs_.push_back({from, 0, -cost});
  original_capacity_.push_back(capacity);
  original_capacity_.push_back(0);
  adjacency_[from].push_back(id);
  adjacency_[to].push_back(id + 1);
  return id;
}

bool MinCostFlow::find_path(int source, int sink) {
  distance_.assign(distance_.size(), kUnreachable);
  parent_arc_.assign(parent_arc_.size(), -1);
  distance_[source] = 0;

  using Item = std::pair<std::int64_t, int>;  // (distance, node)
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  heap.emplace(0, source);

  while (!heap.empty()) {
    const auto [dist, node] = heap.top();
    heap.pop();
    if (dist > distance_[node]) {
      continue;  // stale entry
    }
    for (const int arc_id : adjacency_[node]) {
      const Arc& arc = arcs_[arc_id];
      if (arc.residual <= 0) {
        continue;
      }
      // Reduced cost; nonnegative by the potential invariant.
      const std::int64_t step =
          arc.cost + potential_[node] - potential_[arc.to];
      if (distance_[node] + step < distance_[arc.to]) {
        distance_[arc.to] = distance_[node] + step;
        parent_arc_[arc.to] = arc_id;
        heap.emplace(distance_[arc.to], arc.to);
      }
    }
  }

  if (distance_[sink] == kUnreachable) {
    return false;
  }
  for (std::size_t node = 0; node < potential_.size(); ++node) {
    if (distance_[node] != kUnreachable) {
      potential_[node] += distance_[node];
    } else {
      potential_[node] += distance_[sink];
    }
  }
  return true;
}

MinCostFlow::Result MinCostFlow::solve(int source, int sink) {
  Result result;
  while (find_path(source, sink)) {
    std::int64_t bottleneck = kUnreachable;
    for (int node = sink; node != source; node = arcs_[parent_arc_[node] ^ 1].to) {
      bottleneck = std::min(bottleneck, arcs_[parent_arc_[node]].residual);
    }
    std::int64_t path_cost = 0;
    for (int node = sink; node != source; node = arcs_[parent_arc_[node] ^ 1].to) {
      const int arc_id = parent_arc_[node];
      arcs_[arc_id].residual -= bottleneck;
      arcs_[arc_id ^ 1].residual += bottleneck;
      path_cost += arcs_[arc_id].cost;
    }
    result.flow += bottleneck;
    result.cost += path_cost * bottleneck;
  }
  return result;
}

std::int64_t MinCostFlow::flow_on(int arc_id) const {
  return original_capacity_[arc_id] - arcs_[arc_id].residual;
}

}  // namespace flexmat
