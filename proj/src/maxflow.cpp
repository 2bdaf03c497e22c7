#include "mstn/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "mstn/errors.hpp"

namespace mstn {

namespace {
constexpr double kFlowEps = 1e-11;
}

MaxFlow::MaxFlow(int num_nodes) : n_(num_nodes), adj_(num_nodes) {}

void MaxFlow::add_edge(int from, int to, double cap_forward, double cap_backward) {
  if (from < 0 || from >= n_ || to < 0 || to >= n_) throw UsageError("MaxFlow: node out of range");
  adj_[from].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({to, cap_forward, 0.0});
  adj_[to].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({from, cap_backward, 0.0});
}

bool MaxFlow::bfs(int source, int sink) {
  level_.assign(n_, -1);
  std::queue<int> queue;
  queue.push(source);
  level_[source] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int id : adj_[v]) {
      const Arc& a = arcs_[id];
      if (a.cap - a.flow > kFlowEps && level_[a.to] < 0) {
        level_[a.to] = level_[v] + 1;
        queue.push(a.to);
      }
    }
  }
  return level_[sink] >= 0;
}

double MaxFlow::dfs(int v, int sink, double limit) {
  if (v == sink) return limit;
  for (int& i = next_arc_[v]; i < static_cast<int>(adj_[v].size()); ++i) {
    const int id = adj_[v][i];
    Arc& a = arcs_[id];
    const double residual = a.cap - a.flow;
    if (residual > kFlowEps && level_[a.to] == level_[v] + 1) {
      const double pushed = dfs(a.to, sink, std::min(limit, residual));
      if (pushed > kFlowEps) {
        a.flow += pushed;
        arcs_[id ^ 1].flow -= pushed;
        return pushed;
      }
    }
  }
  return 0.0;
}

double MaxFlow::solve(int source, int sink) {
  if (source == sink) throw UsageError("MaxFlow: source equals sink");
  double total = 0.0;
  while (bfs(source, sink)) {
    next_arc_.assign(n_, 0);
    while (true) {
      const double pushed = dfs(source, sink, std::numeric_limits<double>::infinity());
      if (pushed <= kFlowEps) break;
      total += pushed;
    }
  }
  return total;
}

std::vector<bool> MaxFlow::min_cut_source_side(int source) const {
  std::vector<bool> reach(n_, false);
  std::queue<int> queue;
  queue.push(source);
  reach[source] = true;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int id : adj_[v]) {
      const Arc& a = arcs_[id];
      if (a.cap - a.flow > kFlowEps && !reach[a.to]) {
        reach[a.to] = true;
        queue.push(a.to);
      }
    }
  }
  return reach;
}

}  // namespace mstn
