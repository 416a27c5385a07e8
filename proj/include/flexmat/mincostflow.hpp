#pragma once

#include <cstdint>
#include <vector>

namespace flexmat {

// Integer min-cost max-flow via successive shortest augmenting paths with
// node potentials (Dijkstra on reduced costs). Arc costs must be
// nonnegative, so initial potentials are zero and no negative-edge handling
// is needed. After each augmentation the flow is cost-minimal for its value,
// so the final flow is a min-cost maximum flow.
class MinCostFlow {
 public:
  explicit MinCostFlow(int num_nodes);

  // Adds a directed arc and its zero-capacity reverse; returns an arc id
  // usable with flow_on(). Requires capacity >= 0 and cost >= 0.
  int add_arc(int from, int to, std::int64_t capacity, std::int64_t cost);

  struct Result {
    std::int64_t flow = 0;
    std::int64_t cost = 0;
  };

  // Augments along shortest paths until the sink is unreachable.
  Result solve(int source, int sink);

  std::int64_t flow_on(int arc_id) const;

  int num_nodes() const { return static_cast<int>(adjacency_.size()); }

 private:
  struct Arc {
    int to = 0;
    std::int64_t residual = 0;  // remaining capacity
    std::int64_t cost = 0;
  };

  // Runs Dijkstra on reduced costs; fills distance_/parent_arc_ and updates
  // potentials. Returns true if the sink is reachable.
  bool find_path(int source, int sink);

  std::vector<Arc> arcs_;  // paired: reverse of arc i is arc i^1
  std::vector<std::int64_t> original_capacity_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::int64_t> potential_;
  std::vector<std::int64_t> distance_;
  std::vector<int> parent_arc_;
};

}  // namespace flexmat
