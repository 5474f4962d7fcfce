#include "pcia/feasibility.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <ostream>
#include <stdexcept>
#include <string>

namespace pcia {

namespace {

std::vector<int> mask_to_set(unsigned mask) {
  std::vector<int> out;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

}  // namespace

void validate_instance(const FreedomConstraintInstance& inst) {
  const int K = inst.K;
  if (K < 0) throw std::invalid_argument("instance: negative K");
  if (static_cast<int>(inst.v_t.size()) != K ||
      static_cast<int>(inst.v_r.size()) != K)
    throw std::invalid_argument("instance: budget vector size mismatch");
  if (static_cast<int>(inst.c.size()) != K)
    throw std::invalid_argument("instance: constraint matrix size mismatch");
  for (int n = 0; n < K; ++n) {
    if (inst.v_t[n] < 0 || inst.v_r[n] < 0)
      throw std::invalid_argument("instance: negative freedom budget at node " +
                                  std::to_string(n));
  }
  for (int m = 0; m < K; ++m) {
    if (static_cast<int>(inst.c[m].size()) != K)
      throw std::invalid_argument("instance: constraint row size mismatch");
    for (int n = 0; n < K; ++n) {
      if (inst.c[m][n] < 0)
        throw std::invalid_argument(
            "instance: negative constraint count at (" + std::to_string(m) +
            ", " + std::to_string(n) + ")");
      if (m == n && inst.c[m][n] != 0)
        throw std::invalid_argument("instance: nonzero diagonal at " +
                                    std::to_string(m));
    }
  }
}

FeasibilityVerdict brute_force_proper(const FreedomConstraintInstance& inst) {
  validate_instance(inst);
  const int K = inst.K;
  if (K > 14)
    throw std::invalid_argument(
        "brute_force_proper: exhaustive check limited to K <= 14");

  FeasibilityVerdict verdict;
  const unsigned full = K >= 1 ? (1u << K) : 1u;
  std::vector<long long> in_sum(K);
  for (unsigned gt = 1; gt < full; ++gt) {
    long long vt_sum = 0;
    for (int n = 0; n < K; ++n)
      if (gt & (1u << n)) vt_sum += inst.v_t[n];
    for (unsigned gr = 1; gr < full; ++gr) {
      long long lhs = 0;
      long long vr_sum = 0;
      for (int m = 0; m < K; ++m) {
        if (!(gr & (1u << m))) continue;
        vr_sum += inst.v_r[m];
        for (int n = 0; n < K; ++n)
          if (n != m && (gt & (1u << n))) lhs += inst.c[m][n];
      }
      if (lhs > vt_sum + vr_sum) {
        verdict.proper = false;
        verdict.witness = {mask_to_set(gt), mask_to_set(gr)};
        return verdict;
      }
    }
  }
  verdict.proper = true;
  return verdict;
}

FeasibilityVerdict tree_check(const FreedomConstraintInstance& inst,
                              std::ostream* trace) {
  validate_instance(inst);
  const int K = inst.K;

  // Initial split: every constraint starts at its receiver.
  std::vector<std::vector<long long>> ct(K, std::vector<long long>(K, 0));
  std::vector<std::vector<long long>> cr = inst.c;
  std::vector<long long> pt(inst.v_t);
  std::vector<long long> pr(K);
  for (int m = 0; m < K; ++m) {
    long long load = 0;
    for (int n = 0; n < K; ++n) load += cr[m][n];
    pr[m] = inst.v_r[m] - load;
  }

  // Node ids: transmitter n -> n, receiver m -> K + m.
  const int krx = K;
  auto pressure = [&](int id) -> long long& {
    return id < krx ? pt[id] : pr[id - krx];
  };
  auto node_label = [&](int id) {
    return (id < krx ? "t" : "r") + std::to_string(id < krx ? id : id - krx);
  };

  FeasibilityVerdict verdict;
  while (true) {
    int root = -1;
    for (int n = 0; n < K && root < 0; ++n)
      if (pt[n] < 0) root = n;
    for (int m = 0; m < K && root < 0; ++m)
      if (pr[m] < 0) root = krx + m;
    if (root < 0) break;
    ++verdict.steps;
    if (trace)
      *trace << "root=" << node_label(root) << " deficit=" << -pressure(root)
             << '\n';

    while (pressure(root) < 0) {
      // Grow the tree: breadth-first along positive assigned shares,
      // children in ascending counterpart index.
      std::vector<int> parent(2 * K, -1);
      std::vector<bool> in_tree(2 * K, false);
      std::deque<int> frontier{root};
      in_tree[root] = true;
      std::vector<int> positive;  // discovery order
      while (!frontier.empty()) {
        const int x = frontier.front();
        frontier.pop_front();
        for (int o = 0; o < K; ++o) {
          int y;
          long long share;
          if (x < krx) {  // tx x sheds toward rx o
            y = krx + o;
            share = ct[x][o];
          } else {  // rx (x - K) sheds toward tx o
            y = o;
            share = cr[x - krx][o];
          }
          if (share <= 0 || in_tree[y]) continue;
          in_tree[y] = true;
          parent[y] = x;
          frontier.push_back(y);
          ++verdict.steps;
          if (pressure(y) > 0) positive.push_back(y);
        }
      }

      if (positive.empty()) {
        // Stuck: every positive share from the tree stays inside it and no
        // node in it has pressure to spare, so the tree's node set violates
        // the subset inequality.
        std::vector<int> gt, gr;
        for (int n = 0; n < K; ++n)
          if (in_tree[n]) gt.push_back(n);
        for (int m = 0; m < K; ++m)
          if (in_tree[krx + m]) gr.push_back(m);
        verdict.proper = false;
        verdict.witness = {std::move(gt), std::move(gr)};
        if (trace) *trace << "stuck\n";
        return verdict;
      }

      for (const int leaf : positive) {
        if (pressure(root) >= 0) break;
        // Root-to-leaf path; shares may have changed since discovery.
        std::vector<int> path;
        for (int x = leaf; x >= 0; x = parent[x]) path.push_back(x);
        std::reverse(path.begin(), path.end());
        long long eps = std::min(-pressure(root), pressure(leaf));
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          const int a = path[i];
          const int b = path[i + 1];
          const long long share =
              a < krx ? ct[a][b - krx] : cr[a - krx][b];
          eps = std::min(eps, share);
        }
        if (eps <= 0) continue;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          const int a = path[i];
          const int b = path[i + 1];
          if (a < krx) {  // tx a passes eps of link (b, a) to rx b
            ct[a][b - krx] -= eps;
            cr[b - krx][a] += eps;
          } else {  // rx passes eps of link (a, b) to tx b
            cr[a - krx][b] -= eps;
            ct[b][a - krx] += eps;
          }
        }
        pressure(root) += eps;
        pressure(leaf) -= eps;
        ++verdict.steps;
        if (trace) {
          *trace << "  transfer eps=" << eps << " path";
          for (const int x : path) *trace << ' ' << node_label(x);
          *trace << '\n';
        }
      }
    }
  }

  verdict.proper = true;
  verdict.assignment = ConstraintAssignment{std::move(ct), std::move(cr)};
  return verdict;
}

namespace {

// Compact integer Dinic max-flow.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes) : head_(nodes, -1) {}

  void add_edge(int from, int to, long long cap) {
    edges_.push_back({to, head_[from], cap});
    head_[from] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({from, head_[to], 0});
    head_[to] = static_cast<int>(edges_.size()) - 1;
  }

  long long run(int s, int t) {
    long long flow = 0;
    while (bfs(s, t)) {
      iter_ = head_;
      long long f;
      while ((f = dfs(s, t, LLONG_MAX)) > 0) flow += f;
    }
    return flow;
  }

  // After run(): nodes reachable from s in the residual graph.
  std::vector<bool> reachable(int s) const {
    std::vector<bool> seen(head_.size(), false);
    std::deque<int> q{s};
    seen[s] = true;
    while (!q.empty()) {
      const int x = q.front();
      q.pop_front();
      for (int e = head_[x]; e >= 0; e = edges_[e].next) {
        if (edges_[e].cap > 0 && !seen[edges_[e].to]) {
          seen[edges_[e].to] = true;
          q.push_back(edges_[e].to);
        }
      }
    }
    return seen;
  }

 private:
  struct Edge {
    int to;
    int next;
    long long cap;
  };

  bool bfs(int s, int t) {
    level_.assign(head_.size(), -1);
    std::deque<int> q{s};
    level_[s] = 0;
    while (!q.empty()) {
      const int x = q.front();
      q.pop_front();
      for (int e = head_[x]; e >= 0; e = edges_[e].next) {
        if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
          level_[edges_[e].to] = level_[x] + 1;
          q.push_back(edges_[e].to);
        }
      }
    }
    return level_[t] >= 0;
  }

  long long dfs(int x, int t, long long limit) {
    if (x == t) return limit;
    for (int& e = iter_[x]; e >= 0; e = edges_[e].next) {
      Edge& ed = edges_[e];
      if (ed.cap > 0 && level_[ed.to] == level_[x] + 1) {
        const long long f = dfs(ed.to, t, std::min(limit, ed.cap));
        if (f > 0) {
          ed.cap -= f;
          edges_[e ^ 1].cap += f;
          return f;
        }
      }
    }
    return 0;
  }

  std::vector<int> head_;
  std::vector<int> iter_;
  std::vector<int> level_;
  std::vector<Edge> edges_;
};

}  // namespace

FeasibilityVerdict flow_check(const FreedomConstraintInstance& inst) {
  validate_instance(inst);
  const int K = inst.K;

  std::vector<std::pair<int, int>> links;  // (m, n) with c > 0
  long long total = 0;
  for (int m = 0; m < K; ++m)
    for (int n = 0; n < K; ++n)
      if (inst.c[m][n] > 0) {
        links.emplace_back(m, n);
        total += inst.c[m][n];
      }

  const int l = static_cast<int>(links.size());
  const int source = 0;
  const int first_link = 1;
  const int first_tx = first_link + l;
  const int first_rx = first_tx + K;
  const int sink = first_rx + K;
  MaxFlow mf(sink + 1);
  const long long inf = total + 1;
  for (int i = 0; i < l; ++i) {
    const auto [m, n] = links[i];
    mf.add_edge(source, first_link + i, inst.c[m][n]);
    mf.add_edge(first_link + i, first_tx + n, inf);
    mf.add_edge(first_link + i, first_rx + m, inf);
  }
  for (int n = 0; n < K; ++n) mf.add_edge(first_tx + n, sink, inst.v_t[n]);
  for (int m = 0; m < K; ++m) mf.add_edge(first_rx + m, sink, inst.v_r[m]);

  FeasibilityVerdict verdict;
  verdict.proper = mf.run(source, sink) == total;
  if (!verdict.proper) {
    const std::vector<bool> cut = mf.reachable(source);
    std::vector<int> gt, gr;
    for (int n = 0; n < K; ++n)
      if (cut[first_tx + n]) gt.push_back(n);
    for (int m = 0; m < K; ++m)
      if (cut[first_rx + m]) gr.push_back(m);
    verdict.witness = {std::move(gt), std::move(gr)};
  }
  return verdict;
}

}  // namespace pcia
