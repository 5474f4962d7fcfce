#pragma once

#include <cstddef>
#include <vector>

#include "pcia/channel.hpp"
#include "pcia/feasibility.hpp"

namespace pcia {

enum class Side { kTx, kRx };

/// Common null space shared by the links toward `covered` counterparts,
/// weighted by the streams it would suppress.
struct WeightedNullSpace {
  std::vector<int> covered;  // receiver indices (tx side) / transmitter (rx)
  Subspace space;
  long long weight = 0;
};

/// Per-pair stream counts and signalling subspaces. s_t[n] lives in C^Nt,
/// s_r[m] in C^Nr (columns u^H). Pairs with d = 0 carry zero subspaces.
struct StreamAssignment {
  std::vector<int> d;
  std::vector<Subspace> s_t;
  std::vector<Subspace> s_r;
};

/// d[n] = min(d_max[n], rank of the direct link).
std::vector<int> init_streams(const ChannelRealization& ch,
                              const std::vector<int>& d_max,
                              double tol = kRankTol);

/// Enumeration guard: subset growth stops at this cardinality (with a
/// warning) to bound the work on adversarial topologies.
inline constexpr int kMaxCommonNullCardinality = 20;

/// All nonzero common null spaces of the node's connected counterpart
/// subsets, restricted to the complement of the direct-link null space.
/// Subsets are grown by cardinality, pruning supersets of vanished ones.
/// Covered sets are extended by the disconnected counterparts; weights are
/// the total streams of the covered counterparts. `visited`, when given,
/// receives the number of subset intersections evaluated.
std::vector<WeightedNullSpace> common_null_spaces(const Topology& topo,
                                                  Side side, int node,
                                                  const std::vector<int>& d,
                                                  std::size_t* visited = nullptr);

/// Greedy dim-dimensional candidate: walk the entries sorted by weight
/// descending (ties: larger covered set, then lexicographic covered set) and
/// collect basis directions while they increase the span, then pad from the
/// complement of the direct-link null space. Candidates are nested across
/// dim for a fixed entry list.
Subspace candidate_subspace(const Topology& topo, Side side, int node,
                            Index dim,
                            const std::vector<WeightedNullSpace>& entries);

enum class DimRule {
  kArgmax,    // maximize the dimension objective; ties toward larger dim
  kForceMax,  // keep the full effective space
  kForceMin,  // keep exactly d[node] dimensions
};

struct SubspaceChoice {
  Subspace space;
  Index dim = 0;
  long long objective = 0;
};

/// Transmit-side selection for an active node: over dim in
/// {d[node], ..., rank of the direct link's effective space}, trade freedoms
/// d_n (dim - d_n) against the estimated constraints of the still-coupled
/// outgoing links.
SubspaceChoice select_tx_subspace(const Topology& topo, int node,
                                  const std::vector<int>& d,
                                  DimRule rule = DimRule::kArgmax);

/// Receive-side counterpart; uses the chosen transmit subspaces of the
/// interferers for the link coupling factors.
SubspaceChoice select_rx_subspace(const Topology& topo, int node,
                                  const std::vector<int>& d,
                                  const std::vector<Subspace>& s_t,
                                  DimRule rule = DimRule::kArgmax);

/// Freedom budgets v = d (rank(S) - d) and per-link constraint counts
/// c[m][n] = min(d_m, coupled receive dims) * min(d_n, coupled transmit
/// dims); zero for inactive or disconnected links.
FreedomConstraintInstance count_instance(const Topology& topo,
                                         const StreamAssignment& sa);

struct RemovalStep {
  std::vector<std::pair<int, long long>> gains;  // (node, gain), active nodes
  int chosen = -1;
};

/// Node whose stream removal frees the most constraints net of the freedoms
/// it costs, re-selecting only that node's subspaces at d-1 under the given
/// dimension rule. Ties toward the lowest index.
int remove_stream(const Topology& topo, const StreamAssignment& sa,
                  DimRule rule = DimRule::kArgmax,
                  RemovalStep* detail = nullptr);

struct Stage1Stats {
  std::vector<int> initial_d;
  std::vector<RemovalStep> removals;
  int iterations = 0;
};

/// Full planning loop: initialize stream counts, select subspaces (transmit
/// side ascending, then receive side ascending), and while the counting
/// instance is improper remove one stream and re-select. Returns a proper
/// assignment (possibly all-zero on degenerate inputs).
StreamAssignment stage1_run(const Topology& topo, const ChannelRealization& ch,
                            const std::vector<int>& d_max,
                            DimRule rule = DimRule::kArgmax,
                            Stage1Stats* stats = nullptr);

}  // namespace pcia
