#pragma once

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace pcia {

/// Counting data of a stream assignment: per-node freedom budgets and
/// per-link constraint counts. c[m][n] is the number of constraints needed to
/// suppress the link from transmitter n into receiver m (zero diagonal).
/// The instance is proper iff for every pair of subsets (G_T, G_R) the
/// constraints inside G_R x G_T fit into the combined budgets.
struct FreedomConstraintInstance {
  int K = 0;
  std::vector<long long> v_t;
  std::vector<long long> v_r;
  std::vector<std::vector<long long>> c;
};

/// Throws std::invalid_argument on size mismatches, negative entries, or a
/// nonzero diagonal.
void validate_instance(const FreedomConstraintInstance& inst);

/// Split of every constraint between its two endpoints:
/// c_t[n][m] + c_r[m][n] == c[m][n], all shares nonnegative.
struct ConstraintAssignment {
  std::vector<std::vector<long long>> c_t;  // indexed [n][m]
  std::vector<std::vector<long long>> c_r;  // indexed [m][n]
};

struct FeasibilityVerdict {
  bool proper = false;
  /// Valid split with no overloaded node (tree_check, proper outcome).
  std::optional<ConstraintAssignment> assignment;
  /// Violating subsets (G_T, G_R) on the improper outcome.
  std::optional<std::pair<std::vector<int>, std::vector<int>>> witness;
  /// Work counter of tree_check (node additions + transfers + root picks).
  long long steps = 0;
};

/// Exhaustive subset check; guarded to K <= 14. The witness is the first
/// violating pair in ascending bitmask order (G_T outer).
FeasibilityVerdict brute_force_proper(const FreedomConstraintInstance& inst);

/// Pressure-transfer check. Every constraint starts at its receiver;
/// overloaded nodes (ascending index, transmit side first) root a tree that
/// grows along positive assigned shares (children in ascending index) and
/// shifts load to positive-pressure leaves in discovery order, recomputing
/// the transferable amount per leaf. Proper iff every deficit is absorbed;
/// otherwise the stuck tree's node set is the witness.
FeasibilityVerdict tree_check(const FreedomConstraintInstance& inst,
                              std::ostream* trace = nullptr);

/// Max-flow oracle: proper iff the dedicated flow network saturates every
/// constraint. Witness from the min cut on the improper outcome.
FeasibilityVerdict flow_check(const FreedomConstraintInstance& inst);

}  // namespace pcia
