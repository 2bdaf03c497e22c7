#include "mstn/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "mstn/errors.hpp"
#include "mstn/lp.hpp"
#include "mstn/maxflow.hpp"
#include "mstn/spanning_tree.hpp"

namespace mstn {

namespace {
constexpr double kIntTol = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}
}  // namespace

double BendersCut::rhs_at(const std::vector<double>& x,
                          const std::vector<EdgeBounds>& bounds) const {
  double rhs = value;
  std::vector<bool> in_tree(x.size(), false);
  for (int e : tree_edges) in_tree[e] = true;
  for (std::size_t e = 0; e < x.size(); ++e) {
    if (in_tree[e]) {
      rhs += bounds[e].upper * (x[e] - 1.0);
    } else {
      rhs += bounds[e].lower * x[e];
    }
  }
  return rhs;
}

BendersCut make_cut(const Tree& tree, const GeometricSolution& geo) {
  BendersCut cut;
  cut.tree_edges = tree.edge_ids();
  cut.value = geo.objective;
  return cut;
}

std::vector<std::vector<int>> separate_sec(const Instance& instance, const std::vector<double>& x,
                                           double violation_tol) {
  const int n = instance.num_vertices();
  const int m = instance.num_edges();
  if (static_cast<int>(x.size()) != m) throw UsageError("separate_sec: x size mismatch");

  const auto violation_of = [&](const std::vector<int>& s) {
    std::vector<bool> in(n, false);
    for (int v : s) in[v] = true;
    double inside = 0.0;
    for (int e = 0; e < m; ++e) {
      if (in[instance.edges[e].first] && in[instance.edges[e].second]) inside += x[e];
    }
    return inside - (static_cast<double>(s.size()) - 1.0);
  };

  std::set<std::vector<int>> found;

  bool integral = true;
  for (double xe : x) {
    if (std::min(std::abs(xe), std::abs(1.0 - xe)) > kIntTol) {
      integral = false;
      break;
    }
  }

  if (integral) {
    // Components of the support graph; any component carrying >= |S| edges
    // holds a cycle and is violated.
    DisjointSets ds(n);
    for (int e = 0; e < m; ++e) {
      if (x[e] > 0.5) ds.unite(instance.edges[e].first, instance.edges[e].second);
    }
    std::map<int, std::vector<int>> comps;
    for (int v = 0; v < n; ++v) comps[ds.find(v)].push_back(v);
    for (auto& [root, members] : comps) {
      if (static_cast<int>(members.size()) < 2 || static_cast<int>(members.size()) > n - 1) {
        continue;
      }
      if (violation_of(members) > violation_tol) found.insert(members);
    }
    return {found.begin(), found.end()};
  }

  // Fractional: maximize x(E(S)) - |S| + 1 over S containing a forced vertex,
  // via min cut. Source/sink arcs carry max(0, deg/2 - 1) / max(0, 1 - deg/2).
  std::vector<double> deg(n, 0.0);
  for (int e = 0; e < m; ++e) {
    deg[instance.edges[e].first] += x[e];
    deg[instance.edges[e].second] += x[e];
  }
  double big = 1.0;
  for (int v = 0; v < n; ++v) big += std::abs(deg[v] / 2.0 - 1.0);
  for (int e = 0; e < m; ++e) big += x[e];

  for (int forced = 0; forced < n; ++forced) {
    MaxFlow flow(n + 2);
    const int source = n, sink = n + 1;
    for (int v = 0; v < n; ++v) {
      const double a = deg[v] / 2.0 - 1.0;
      if (v == forced) {
        flow.add_edge(source, v, big);
      } else if (a > 0.0) {
        flow.add_edge(source, v, a);
      } else if (a < 0.0) {
        flow.add_edge(v, sink, -a);
      }
    }
    for (int e = 0; e < m; ++e) {
      if (x[e] > 1e-12) {
        flow.add_edge(instance.edges[e].first, instance.edges[e].second, x[e] / 2.0, x[e] / 2.0);
      }
    }
    flow.solve(source, sink);
    const std::vector<bool> side = flow.min_cut_source_side(source);
    std::vector<int> s;
    for (int v = 0; v < n; ++v) {
      if (side[v]) s.push_back(v);
    }
    if (static_cast<int>(s.size()) < 2 || static_cast<int>(s.size()) > n - 1) continue;
    if (violation_of(s) > violation_tol) found.insert(std::move(s));
  }
  return {found.begin(), found.end()};
}

namespace {

// Relaxed master over (x, theta): permanent cardinality and theta-link rows,
// dynamic SEC and Benders rows. x_e bounds carry the preprocessing fixings
// and the branch-and-bound fixings.
class Master {
 public:
  Master(const Instance& instance, const Reduction& reduction)
      : instance_(instance), bounds_(reduction.bounds), m_(instance.num_edges()) {
    for (int e = 0; e < m_; ++e) lp_.add_variable(0.0, 1.0, 0.0);          // x_e
    for (int e = 0; e < m_; ++e) lp_.add_variable(0.0, kInf, 1.0);         // theta_e
    {
      std::vector<double> row(m_, 1.0);
      lp_.add_row(std::move(row), RowSense::Equal, instance.num_vertices() - 1.0);
    }
    for (int e = 0; e < m_; ++e) {
      // theta_e >= u_e x_e
      std::vector<double> row(2 * m_, 0.0);
      row[m_ + e] = 1.0;
      row[e] = -bounds_[e].lower;
      lp_.add_row(std::move(row), RowSense::GreaterEqual, 0.0);
    }
    for (int e = 0; e < m_; ++e) {
      // theta_e >= u_e - U_e (1 - x_e), the linking row with the length
      // variable replaced by its lower bound
      std::vector<double> row(2 * m_, 0.0);
      row[m_ + e] = 1.0;
      row[e] = -bounds_[e].upper;
      lp_.add_row(std::move(row), RowSense::GreaterEqual, bounds_[e].lower - bounds_[e].upper);
    }
    base_lo_.assign(m_, 0.0);
    base_hi_.assign(m_, 1.0);
    for (int e : reduction.forced) base_lo_[e] = 1.0;
    for (int e : reduction.removed) base_hi_[e] = 0.0;
    reset_fixings();
  }

  const std::vector<EdgeBounds>& bounds() const { return bounds_; }

  void reset_fixings() {
    for (int e = 0; e < m_; ++e) lp_.set_variable_bounds(e, base_lo_[e], base_hi_[e]);
  }

  // fixed: -1 free, 0 or 1.
  void apply_fixings(const std::vector<signed char>& fixed) {
    for (int e = 0; e < m_; ++e) {
      double lo = base_lo_[e], hi = base_hi_[e];
      if (fixed[e] == 0) hi = std::min(hi, 0.0);
      if (fixed[e] == 1) lo = std::max(lo, 1.0);
      if (lo > hi) {
        infeasible_fixing_ = true;
        return;
      }
      lp_.set_variable_bounds(e, lo, hi);
    }
    infeasible_fixing_ = false;
  }

  bool infeasible_fixing() const { return infeasible_fixing_; }

  bool add_sec(const std::vector<int>& s) {
    if (!seen_secs_.insert(s).second) return false;
    std::vector<bool> in(instance_.num_vertices(), false);
    for (int v : s) in[v] = true;
    std::vector<double> row(2 * m_, 0.0);
    for (int e = 0; e < m_; ++e) {
      if (in[instance_.edges[e].first] && in[instance_.edges[e].second]) row[e] = 1.0;
    }
    lp_.add_row(std::move(row), RowSense::LessEqual, static_cast<double>(s.size()) - 1.0);
    ++sec_count_;
    return true;
  }

  bool add_benders(const BendersCut& cut) {
    if (!seen_cut_trees_.insert(cut.tree_edges).second) return false;
    std::vector<bool> in(m_, false);
    for (int e : cut.tree_edges) in[e] = true;
    std::vector<double> row(2 * m_, 0.0);
    double rhs = cut.value;
    for (int e = 0; e < m_; ++e) {
      row[m_ + e] = 1.0;
      if (in[e]) {
        row[e] = -bounds_[e].upper;
        rhs -= bounds_[e].upper;
      } else {
        row[e] = -bounds_[e].lower;
      }
    }
    lp_.add_row(std::move(row), RowSense::GreaterEqual, rhs);
    ++benders_count_;
    return true;
  }

  bool has_cut_for(const std::vector<int>& tree_edges) const {
    return seen_cut_trees_.count(tree_edges) > 0;
  }

  LpResult solve() { return lp_.solve(); }

  std::vector<double> x_part(const LpResult& res) const {
    return {res.x.begin(), res.x.begin() + m_};
  }
  double theta_sum(const LpResult& res) const {
    double acc = 0.0;
    for (int e = 0; e < m_; ++e) acc += res.x[m_ + e];
    return acc;
  }

  long sec_count() const { return sec_count_; }
  long benders_count() const { return benders_count_; }

 private:
  const Instance& instance_;
  std::vector<EdgeBounds> bounds_;
  int m_;
  LpModel lp_;
  std::vector<double> base_lo_, base_hi_;
  std::set<std::vector<int>> seen_secs_;
  std::set<std::vector<int>> seen_cut_trees_;
  long sec_count_ = 0;
  long benders_count_ = 0;
  bool infeasible_fixing_ = false;
};

struct BnbResult {
  bool feasible = false;
  bool hit_limit = false;
  double objective = kInf;       // incumbent value
  double lower_bound = -kInf;    // proven bound for the whole tree search
  double root_bound = -kInf;
  std::vector<int> tree_edges;   // incumbent tree
  long nodes = 0;
};

// Shared branch-and-bound over the master. When `geometry` is set, integral
// spanning trees are priced by the subproblem and Benders cuts are added
// lazily (branch-and-cut mode); otherwise the master objective itself is
// minimized to integer optimality.
class BranchAndBound {
 public:
  struct GeometryHooks {
    // Returns the subproblem optimum for the tree (cached outside).
    std::function<const GeometricSolution&(const Tree&)> solve_tree;
    double eps = 1e-6;
  };

  BranchAndBound(const Instance& instance, Master& master, double eps, Clock::time_point start,
                 double time_limit)
      : instance_(instance),
        master_(master),
        eps_(eps),
        start_(start),
        time_limit_(time_limit) {}

  GeometryHooks* geometry = nullptr;
  double initial_incumbent = kInf;
  std::vector<int> initial_tree;

  BnbResult run() {
    BnbResult out;
    out.objective = initial_incumbent;
    out.tree_edges = initial_tree;

    struct Node {
      double bound;
      long seq;
      std::vector<signed char> fixed;
    };
    const auto cmp = [](const Node& a, const Node& b) {
      return a.bound > b.bound || (a.bound == b.bound && a.seq > b.seq);
    };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> open(cmp);
    long seq = 0;
    open.push({-kInf, seq++, std::vector<signed char>(instance_.num_edges(), -1)});
    bool root = true;
    double best_open_bound = -kInf;

    while (!open.empty()) {
      Node node = open.top();
      open.pop();
      best_open_bound = node.bound;
      if (node.bound >= out.objective - eps_) {
        // Best-first: every remaining node is at least as high.
        out.lower_bound = std::max(out.lower_bound, out.objective);
        break;
      }
      if (seconds_since(start_) > time_limit_) {
        out.hit_limit = true;
        out.lower_bound = std::max(out.lower_bound, std::max(node.bound, 0.0));
        break;
      }
      ++out.nodes;

      master_.apply_fixings(node.fixed);
      if (master_.infeasible_fixing()) continue;

      // Cut loop on this node.
      double node_bound = node.bound;
      std::vector<double> x;
      bool prune = false;
      while (true) {
        const LpResult res = master_.solve();
        if (res.status == LpStatus::Infeasible) {
          prune = true;
          break;
        }
        if (res.status == LpStatus::Unbounded) {
          throw SolverError("master LP unbounded (theta columns must be bounded below)");
        }
        node_bound = std::max(node_bound, res.objective);
        if (node_bound >= out.objective - eps_) {
          prune = true;
          break;
        }
        x = master_.x_part(res);
        const auto secs = separate_sec(instance_, x);
        if (!secs.empty()) {
          bool added = false;
          for (const auto& s : secs) added = master_.add_sec(s) || added;
          if (added) continue;
        }
        bool integral = true;
        for (double xe : x) {
          if (std::min(xe, 1.0 - xe) > kIntTol) {
            integral = false;
            break;
          }
        }
        if (!integral) break;

        // Integral, no violated SEC: a spanning tree.
        std::vector<int> tree_edges;
        for (int e = 0; e < instance_.num_edges(); ++e) {
          if (x[e] > 0.5) tree_edges.push_back(e);
        }
        if (geometry == nullptr) {
          if (res.objective < out.objective - 1e-12) {
            out.objective = res.objective;
            out.tree_edges = tree_edges;
          }
          prune = true;  // node solved to integer optimality
          break;
        }
        const Tree tree(instance_, tree_edges);
        const GeometricSolution& geo = geometry->solve_tree(tree);
        const double theta = master_.theta_sum(res);
        bool cut_added = false;
        if (theta < geo.objective - geometry->eps) {
          cut_added = master_.add_benders(make_cut(tree, geo));
        }
        if (cut_added) {
          if (seconds_since(start_) > time_limit_) {
            out.hit_limit = true;
            prune = true;
            break;
          }
          continue;  // re-solve with the new cut
        }
        // Cut satisfied (or already present): the tree is priced correctly
        // and this node's bound certifies it, so the node closes here.
        if (geo.objective < out.objective - 1e-12) {
          out.objective = geo.objective;
          out.tree_edges = tree_edges;
        }
        prune = true;
        break;
      }

      if (root) {
        root = false;
        out.root_bound = node_bound;
      }
      if (out.hit_limit) break;
      if (prune || x.empty()) continue;

      // Branch on the most fractional edge; ties by larger max-length bound,
      // then smaller id. x_e = 1 child first.
      int branch_edge = -1;
      double best_frac = kIntTol;
      for (int e = 0; e < instance_.num_edges(); ++e) {
        if (node.fixed[e] != -1) continue;
        const double frac = std::min(x[e], 1.0 - x[e]);
        const double cur_upper = branch_edge >= 0 ? master_.bounds()[branch_edge].upper : -1.0;
        if (frac > best_frac + 1e-12 ||
            (frac > best_frac - 1e-12 && branch_edge >= 0 &&
             (master_.bounds()[e].upper > cur_upper + 1e-12 ||
              (std::abs(master_.bounds()[e].upper - cur_upper) <= 1e-12 && e < branch_edge)))) {
          best_frac = frac;
          branch_edge = e;
        }
      }
      if (branch_edge < 0) {
        // Numerically integral but not caught above; treat as closed.
        continue;
      }
      Node one{node_bound, seq++, node.fixed};
      one.fixed[branch_edge] = 1;
      Node zero{node_bound, seq++, node.fixed};
      zero.fixed[branch_edge] = 0;
      open.push(std::move(one));
      open.push(std::move(zero));
    }

    if (open.empty() && !out.hit_limit) {
      out.lower_bound = std::max(out.lower_bound, out.objective);
    } else if (!open.empty()) {
      out.lower_bound = std::max(out.lower_bound, std::max(best_open_bound, 0.0));
    }
    out.feasible = out.objective < kInf;
    if (out.root_bound == -kInf) out.root_bound = out.lower_bound;
    master_.reset_fixings();
    return out;
  }

 private:
  const Instance& instance_;
  Master& master_;
  double eps_;
  Clock::time_point start_;
  double time_limit_;
};

struct CommonState {
  Reduction reduction;
  std::map<std::vector<int>, GeometricSolution> cache;

  const GeometricSolution& solve_cached(const Instance& instance, const Tree& tree,
                                        const SubproblemOptions& opts) {
    auto it = cache.find(tree.edge_ids());
    if (it == cache.end()) {
      it = cache.emplace(tree.edge_ids(), solve_points(instance, tree, opts)).first;
    }
    return it->second;
  }
};

Tree center_distance_mst(const Instance& instance, const Reduction& reduction) {
  WeightVector w(instance.num_edges());
  for (int e = 0; e < instance.num_edges(); ++e) w[e] = instance.center_distance(e);
  return mst(instance, w, reduction.forced, reduction.removed);
}

void fill_solution(SolveReport& report, const Instance& instance, const std::vector<int>& edges,
                   const GeometricSolution& geo) {
  report.tree_edges = edges;
  report.points = geo.points;
  report.lengths = geo.lengths;
}

std::vector<std::pair<std::string, std::string>> options_list(const ExactOptions& opts) {
  return {{"eps", std::to_string(opts.eps)},
          {"max_iterations", std::to_string(opts.max_iterations)},
          {"time_limit", std::to_string(opts.time_limit)},
          {"subproblem_tolerance", std::to_string(opts.subproblem.tolerance)}};
}

}  // namespace

SolveReport solve_iterative(const Instance& instance, const ExactOptions& opts) {
  const auto start = Clock::now();
  CommonState state;
  state.reduction = reduce(instance, compute_bounds(instance));
  Master master(instance, state.reduction);

  SolveReport report;
  report.method = "exact-iter";
  report.instance_name = instance.name;
  report.options = options_list(opts);

  Tree current = center_distance_mst(instance, state.reduction);
  double lb = 0.0;
  double ub = kInf;
  std::vector<int> best_tree;
  bool first_master = true;
  bool hit_limit = false;

  while (true) {
    const GeometricSolution& geo = state.solve_cached(instance, current, opts.subproblem);
    if (geo.objective < ub) {
      ub = geo.objective;
      best_tree = current.edge_ids();
    }
    if (std::abs(ub - lb) <= opts.eps) break;
    if (report.iterations >= opts.max_iterations) break;
    if (seconds_since(start) > opts.time_limit) {
      hit_limit = true;
      break;
    }
    if (master.has_cut_for(current.edge_ids())) {
      // The master re-proposed an already-cut tree; its value certifies
      // optimality up to eps (possible only through LP tolerance slack).
      break;
    }
    master.add_benders(make_cut(current, geo));
    ++report.iterations;

    BranchAndBound bnb(instance, master, opts.eps, start, opts.time_limit);
    bnb.initial_incumbent = kInf;
    BnbResult master_opt = bnb.run();
    report.nodes += master_opt.nodes;
    if (master_opt.hit_limit) {
      hit_limit = true;
      lb = std::max(lb, std::min(master_opt.lower_bound, ub));
      break;
    }
    if (!master_opt.feasible) {
      throw SolverError("solve_iterative: master became infeasible");
    }
    if (first_master) {
      report.gap0 = relative_gap(ub, master_opt.objective);
      first_master = false;
    }
    lb = std::max(lb, master_opt.objective);
    current = Tree(instance, master_opt.tree_edges);
  }

  const GeometricSolution& best_geo =
      state.cache.count(best_tree) ? state.cache.at(best_tree)
                                   : state.solve_cached(instance, Tree(instance, best_tree),
                                                        opts.subproblem);
  report.objective = ub;
  report.bound = std::min(lb, ub);
  report.gap = relative_gap(ub, report.bound);
  report.status = hit_limit ? SolveStatus::TimeLimit
                            : (std::abs(ub - report.bound) <= opts.eps ? SolveStatus::Optimal
                                                                       : SolveStatus::GapLimit);
  if (report.status == SolveStatus::Optimal) report.bound = ub;
  fill_solution(report, instance, best_tree, best_geo);
  report.sec_cuts = master.sec_count();
  report.benders_cuts = master.benders_count();
  report.wall_time = seconds_since(start);
  return report;
}

SolveReport solve_branch_and_cut(const Instance& instance, const ExactOptions& opts) {
  const auto start = Clock::now();
  CommonState state;
  state.reduction = reduce(instance, compute_bounds(instance));
  Master master(instance, state.reduction);

  SolveReport report;
  report.method = "exact-bc";
  report.instance_name = instance.name;
  report.options = options_list(opts);

  // Incumbent from the center-distance MST before any search.
  const Tree start_tree = center_distance_mst(instance, state.reduction);
  const GeometricSolution& start_geo = state.solve_cached(instance, start_tree, opts.subproblem);

  BranchAndBound bnb(instance, master, opts.eps, start, opts.time_limit);
  BranchAndBound::GeometryHooks hooks;
  hooks.eps = opts.eps;
  hooks.solve_tree = [&](const Tree& t) -> const GeometricSolution& {
    return state.solve_cached(instance, t, opts.subproblem);
  };
  bnb.geometry = &hooks;
  bnb.initial_incumbent = start_geo.objective;
  bnb.initial_tree = start_tree.edge_ids();

  BnbResult res = bnb.run();
  if (!res.feasible) throw SolverError("solve_branch_and_cut: no feasible tree found");

  report.objective = res.objective;
  report.bound = res.hit_limit ? std::max(0.0, std::min(res.lower_bound, res.objective))
                               : res.objective;
  report.gap = relative_gap(report.objective, report.bound);
  report.gap0 = relative_gap(start_geo.objective, std::max(res.root_bound, 0.0));
  report.status = res.hit_limit ? SolveStatus::TimeLimit : SolveStatus::Optimal;
  report.nodes = res.nodes;
  report.sec_cuts = master.sec_count();
  report.benders_cuts = master.benders_count();
  report.iterations = master.benders_count();

  const GeometricSolution& geo =
      state.solve_cached(instance, Tree(instance, res.tree_edges), opts.subproblem);
  fill_solution(report, instance, res.tree_edges, geo);
  report.wall_time = seconds_since(start);
  return report;
}

}  // namespace mstn
