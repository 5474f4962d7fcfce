#include "pcia/stage1.hpp"

#include <algorithm>
#include <iostream>
#include <stdexcept>
#include <string>

namespace pcia {

namespace {

const Subspace& link_null(const Topology& topo, Side side, int node, int other) {
  // tx side: link from transmitter `node` toward receiver `other`;
  // rx side: link from transmitter `other` into receiver `node`.
  return side == Side::kTx ? topo.tx(other, node) : topo.rx(node, other);
}

bool link_connected(const Topology& topo, Side side, int node, int other) {
  return side == Side::kTx ? topo.connected(other, node)
                           : topo.connected(node, other);
}

Subspace effective_space(const Topology& topo, Side side, int node) {
  return complement(side == Side::kTx ? topo.tx(node, node)
                                      : topo.rx(node, node));
}

/// Orthonormal direction sequence behind candidate_subspace: entry basis
/// columns in priority order, then the effective-space padding. Prefixes of
/// the sequence are the dim-dimensional candidates.
CMatrix direction_sequence(const Topology& topo, Side side, int node,
                           const std::vector<WeightedNullSpace>& entries) {
  const Subspace eff = effective_space(topo, side, node);
  const Index ambient = eff.ambient();
  const Index target = eff.rank();

  std::vector<const WeightedNullSpace*> order;
  order.reserve(entries.size());
  for (const auto& e : entries) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(),
                   [](const WeightedNullSpace* a, const WeightedNullSpace* b) {
                     if (a->weight != b->weight) return a->weight > b->weight;
                     if (a->covered.size() != b->covered.size())
                       return a->covered.size() > b->covered.size();
                     return a->covered < b->covered;
                   });

  CMatrix seq(ambient, target);
  Index got = 0;
  auto try_direction = [&](const CVector& v) {
    if (got >= target) return;
    CVector r = v;
    for (int pass = 0; pass < 2; ++pass)
      for (Index i = 0; i < got; ++i) r -= seq.col(i).dot(r) * seq.col(i);
    const double norm = r.norm();
    if (norm <= kResidualTol) return;
    seq.col(got++) = r / norm;
  };
  for (const WeightedNullSpace* e : order)
    for (Index c = 0; c < e->space.rank(); ++c)
      try_direction(e->space.basis().col(c));
  for (Index c = 0; c < eff.rank(); ++c) try_direction(eff.basis().col(c));
  if (got != target)
    throw std::logic_error("candidate_subspace: direction sequence degenerate");
  return seq;
}

/// min(d, dims of the subspace coupled through the link) on one side.
long long coupled_dims(const Subspace& chosen, const Subspace& link_null_space,
                       int d) {
  return std::min<long long>(d, dim_outside(chosen, link_null_space));
}

long long link_constraints(const Topology& topo, const StreamAssignment& sa,
                           int m, int n) {
  if (m == n || sa.d[m] <= 0 || sa.d[n] <= 0 || !topo.connected(m, n)) return 0;
  return coupled_dims(sa.s_r[m], topo.rx(m, n), sa.d[m]) *
         coupled_dims(sa.s_t[n], topo.tx(m, n), sa.d[n]);
}

long long node_freedoms(const StreamAssignment& sa, int q) {
  if (sa.d[q] <= 0) return 0;
  return static_cast<long long>(sa.d[q]) * (sa.s_t[q].rank() - sa.d[q]) +
         static_cast<long long>(sa.d[q]) * (sa.s_r[q].rank() - sa.d[q]);
}

SubspaceChoice select_subspace(const Topology& topo, Side side, int node,
                               const std::vector<int>& d,
                               const std::vector<Subspace>* s_t, DimRule rule) {
  const Index ambient = side == Side::kTx ? topo.Nt : topo.Nr;
  SubspaceChoice choice;
  choice.space = Subspace::zero(ambient);
  if (d[node] <= 0) return choice;

  const Subspace eff = effective_space(topo, side, node);
  const Index lo = d[node];
  const Index hi = eff.rank();
  if (hi < lo)
    throw std::invalid_argument(
        "select_subspace: stream count exceeds the effective space of node " +
        std::to_string(node));

  const auto entries = common_null_spaces(topo, side, node, d);
  const CMatrix seq = direction_sequence(topo, side, node, entries);

  const int K = topo.K;
  auto objective = [&](const Subspace& cand, Index dim) {
    long long obj = static_cast<long long>(d[node]) * (dim - d[node]);
    for (int o = 0; o < K; ++o) {
      if (o == node || d[o] <= 0 || !link_connected(topo, side, node, o))
        continue;
      const Subspace& nul = link_null(topo, side, node, o);
      long long own = coupled_dims(cand, nul, d[node]);
      long long other;
      if (side == Side::kTx) {
        // Receive subspaces are not chosen yet: cap by the full coupled
        // receive dimension of the link.
        other = std::min<long long>(d[o], topo.Nr - topo.rx(o, node).rank());
      } else {
        const Subspace& st = (*s_t)[o];
        other = st.rank() > 0
                    ? coupled_dims(st, topo.tx(node, o), d[o])
                    : std::min<long long>(d[o],
                                          topo.Nt - topo.tx(node, o).rank());
      }
      obj -= own * other;
    }
    return obj;
  };

  Index best_dim = lo;
  if (rule == DimRule::kForceMax) best_dim = hi;
  if (rule == DimRule::kArgmax) {
    // Ties resolve toward the larger dimension: when trades balance, keeping
    // freedoms beats spending them all on nulling (degenerate banded
    // topologies otherwise zero every budget and go improper).
    long long best = 0;
    bool first = true;
    for (Index dim = lo; dim <= hi; ++dim) {
      const auto cand = Subspace::from_orthonormal(seq.leftCols(dim));
      const long long obj = objective(cand, dim);
      if (first || obj >= best) {
        best = obj;
        best_dim = dim;
        first = false;
      }
    }
  }
  choice.dim = best_dim;
  choice.space = Subspace::from_orthonormal(seq.leftCols(best_dim));
  choice.objective = objective(choice.space, best_dim);
  return choice;
}

}  // namespace

std::vector<int> init_streams(const ChannelRealization& ch,
                              const std::vector<int>& d_max, double tol) {
  if (static_cast<int>(d_max.size()) != ch.K)
    throw std::invalid_argument("init_streams: d_max size mismatch");
  std::vector<int> d(ch.K);
  for (int n = 0; n < ch.K; ++n) {
    if (d_max[n] < 0)
      throw std::invalid_argument("init_streams: negative d_max");
    d[n] = std::min<int>(d_max[n],
                         static_cast<int>(numerical_rank(ch.H(n, n), tol)));
  }
  return d;
}

std::vector<WeightedNullSpace> common_null_spaces(const Topology& topo,
                                                  Side side, int node,
                                                  const std::vector<int>& d,
                                                  std::size_t* visited) {
  const Subspace eff = effective_space(topo, side, node);
  std::size_t work = 0;

  std::vector<int> connected_peers, covered_free;
  for (int o = 0; o < topo.K; ++o) {
    if (o == node || d[o] <= 0) continue;
    (link_connected(topo, side, node, o) ? connected_peers : covered_free)
        .push_back(o);
  }

  // Per-peer base space: the link null restricted to the effective space.
  std::vector<Subspace> base;
  base.reserve(connected_peers.size());
  std::vector<WeightedNullSpace> out;

  struct Alive {
    std::vector<int> members;  // indices into connected_peers, ascending
    Subspace space;
  };
  std::vector<Alive> alive;

  auto emit = [&](const std::vector<int>& members, const Subspace& space) {
    WeightedNullSpace e;
    for (const int i : members) e.covered.push_back(connected_peers[i]);
    e.covered.insert(e.covered.end(), covered_free.begin(), covered_free.end());
    std::sort(e.covered.begin(), e.covered.end());
    e.space = space;
    for (const int o : e.covered) e.weight += d[o];
    out.push_back(std::move(e));
  };

  for (std::size_t i = 0; i < connected_peers.size(); ++i) {
    const Subspace& nul = link_null(topo, side, node, connected_peers[i]);
    base.push_back(intersect(nul, eff));
    ++work;
    if (base.back().rank() > 0) {
      alive.push_back({{static_cast<int>(i)}, base.back()});
      emit(alive.back().members, base.back());
    }
  }

  int cardinality = 1;
  while (!alive.empty() && cardinality < kMaxCommonNullCardinality) {
    std::vector<Alive> next;
    for (const Alive& a : alive) {
      for (std::size_t j = a.members.back() + 1; j < connected_peers.size();
           ++j) {
        if (base[j].rank() == 0) continue;
        Subspace s = intersect(a.space, base[j]);
        ++work;
        if (s.rank() == 0) continue;
        Alive grown{a.members, std::move(s)};
        grown.members.push_back(static_cast<int>(j));
        emit(grown.members, grown.space);
        next.push_back(std::move(grown));
      }
    }
    alive = std::move(next);
    ++cardinality;
  }
  if (!alive.empty())
    std::cerr << "common_null_spaces: subset growth stopped at cardinality "
              << kMaxCommonNullCardinality << '\n';

  if (visited) *visited = work;
  return out;
}

Subspace candidate_subspace(const Topology& topo, Side side, int node,
                            Index dim,
                            const std::vector<WeightedNullSpace>& entries) {
  const Subspace eff = effective_space(topo, side, node);
  if (dim < 0 || dim > eff.rank())
    throw std::invalid_argument(
        "candidate_subspace: dim outside the effective space");
  const CMatrix seq = direction_sequence(topo, side, node, entries);
  return Subspace::from_orthonormal(seq.leftCols(dim));
}

SubspaceChoice select_tx_subspace(const Topology& topo, int node,
                                  const std::vector<int>& d, DimRule rule) {
  return select_subspace(topo, Side::kTx, node, d, nullptr, rule);
}

SubspaceChoice select_rx_subspace(const Topology& topo, int node,
                                  const std::vector<int>& d,
                                  const std::vector<Subspace>& s_t,
                                  DimRule rule) {
  return select_subspace(topo, Side::kRx, node, d, &s_t, rule);
}

FreedomConstraintInstance count_instance(const Topology& topo,
                                         const StreamAssignment& sa) {
  const int K = topo.K;
  FreedomConstraintInstance inst;
  inst.K = K;
  inst.v_t.resize(K, 0);
  inst.v_r.resize(K, 0);
  inst.c.assign(K, std::vector<long long>(K, 0));
  for (int n = 0; n < K; ++n) {
    if (sa.d[n] <= 0) continue;
    inst.v_t[n] = static_cast<long long>(sa.d[n]) * (sa.s_t[n].rank() - sa.d[n]);
    inst.v_r[n] = static_cast<long long>(sa.d[n]) * (sa.s_r[n].rank() - sa.d[n]);
  }
  for (int m = 0; m < K; ++m)
    for (int n = 0; n < K; ++n)
      if (m != n) inst.c[m][n] = link_constraints(topo, sa, m, n);
  return inst;
}

int remove_stream(const Topology& topo, const StreamAssignment& sa,
                  DimRule rule, RemovalStep* detail) {
  const int K = topo.K;
  if (detail) *detail = RemovalStep{};
  int chosen = -1;
  long long best = 0;
  for (int q = 0; q < K; ++q) {
    if (sa.d[q] <= 0) continue;

    StreamAssignment after = sa;
    after.d[q] -= 1;
    after.s_t[q] = select_tx_subspace(topo, q, after.d, rule).space;
    after.s_r[q] = select_rx_subspace(topo, q, after.d, after.s_t, rule).space;

    // Only row q, column q and node q's freedoms change.
    long long freed = 0;
    for (int o = 0; o < K; ++o) {
      if (o == q) continue;
      freed += link_constraints(topo, sa, o, q) -
               link_constraints(topo, after, o, q);
      freed += link_constraints(topo, sa, q, o) -
               link_constraints(topo, after, q, o);
    }
    const long long gain = freed + node_freedoms(after, q) - node_freedoms(sa, q);
    if (detail) detail->gains.emplace_back(q, gain);
    if (chosen < 0 || gain > best) {
      best = gain;
      chosen = q;
    }
  }
  if (detail) detail->chosen = chosen;
  return chosen;
}

StreamAssignment stage1_run(const Topology& topo, const ChannelRealization& ch,
                            const std::vector<int>& d_max, DimRule rule,
                            Stage1Stats* stats) {
  const int K = topo.K;
  StreamAssignment sa;
  sa.d = init_streams(ch, d_max);
  sa.s_t.resize(K);
  sa.s_r.resize(K);
  for (int n = 0; n < K; ++n)
    sa.s_t[n] = select_tx_subspace(topo, n, sa.d, rule).space;
  for (int m = 0; m < K; ++m)
    sa.s_r[m] = select_rx_subspace(topo, m, sa.d, sa.s_t, rule).space;
  if (stats) {
    *stats = Stage1Stats{};
    stats->initial_d = sa.d;
  }

  while (true) {
    if (stats) ++stats->iterations;
    if (tree_check(count_instance(topo, sa)).proper) break;
    RemovalStep step;
    const int q = remove_stream(topo, sa, rule, stats ? &step : nullptr);
    if (q < 0) break;  // no active pair left; the empty instance is proper
    sa.d[q] -= 1;
    sa.s_t[q] = select_tx_subspace(topo, q, sa.d, rule).space;
    sa.s_r[q] = select_rx_subspace(topo, q, sa.d, sa.s_t, rule).space;
    if (stats) stats->removals.push_back(std::move(step));
  }
  return sa;
}

}  // namespace pcia
