#pragma once

#include <vector>

namespace mstn {

// Dinic max-flow on doubles (BFS level graph + blocking-flow DFS). Supports
// undirected capacities via paired arcs.
class MaxFlow {
 public:
  explicit MaxFlow(int num_nodes);

  // Directed arc with the given capacities in each direction.
  void add_edge(int from, int to, double cap_forward, double cap_backward = 0.0);

  double solve(int source, int sink);

  // After solve: nodes reachable from the source in the residual network
  // (the source side of a minimum cut).
  std::vector<bool> min_cut_source_side(int source) const;

 private:
  struct Arc {
    int to;
    double cap;
    double flow;
  };

  int n_;
  std::vector<Arc> arcs_;                 // paired: arc i's reverse is i^1
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_;
  std::vector<int> next_arc_;

  bool bfs(int source, int sink);
  double dfs(int v, int sink, double limit);
};

}  // namespace mstn
